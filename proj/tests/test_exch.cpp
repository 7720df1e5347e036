#include <doctest.h>

#include <bit>

#include "cubelab/exch.hpp"
#include "support/oracles.hpp"

using namespace cubelab;

TEST_SUITE_BEGIN("exch");

namespace {

// product measure lambda^(2^k) over a two-letter alphabet
WindowDistribution product_window(int k, const Rational& p1) {
    WindowDistribution w;
    w.k = k;
    w.dist.tuple_len = 1 << k;
    w.dist.alphabet = {"0", "1"};
    const int n = 1 << k;
    for (std::uint32_t code = 0; code < (1u << n); ++code) {
        Outcome o(n);
        Rational p(1);
        for (int v = 0; v < n; ++v) {
            o[v] = (code >> v) & 1;
            p *= o[v] ? p1 : (1 - p1);
        }
        w.dist.exact[o] = p;
    }
    return w;
}

}  // namespace

TEST_CASE("faces") {
    auto faces = all_faces(2);
    CHECK(faces.size() == 9);  // 3^k
    Face f0{2, 0b00, 0b01};    // single vertex 01
    CHECK(f0.vertices() == std::vector<std::uint32_t>{1});
    Face f1{2, 0b01, 0b10};    // free v1, fixed v2 = 1
    CHECK(f1.vertices() == std::vector<std::uint32_t>{2, 3});
    CHECK(faces_independent(f0, Face{2, 0b00, 0b00}));
    CHECK_FALSE(faces_independent(f1, Face{2, 0b01, 0b00}));  // shared free coord
    CHECK_FALSE(faces_independent(f0, Face{2, 0b10, 0b01}));  // overlapping vertex
}

TEST_CASE("pushforward by vertex maps") {
    WindowDistribution w = product_window(1, Rational(1, 3));
    // identity
    CHECK(pushforward_by_vertex_map(w.dist, {0, 1}) == w.dist);
    // projection to a single vertex: the marginal there
    FiniteDistribution m = pushforward_by_vertex_map(w.dist, {1});
    CHECK(m.exact_prob({1}) == Rational(1, 3));
    // the translation v -> v + e1 swaps the two coordinates
    FiniteDistribution swapped = pushforward_by_vertex_map(w.dist, {1, 0});
    CHECK(swapped == w.dist);  // product measure is symmetric

    WindowDistribution asym;
    asym.k = 1;
    asym.dist.tuple_len = 2;
    asym.dist.alphabet = {"0", "1"};
    asym.dist.exact[{0, 1}] = Rational(1, 2);
    asym.dist.exact[{0, 0}] = Rational(1, 2);
    FiniteDistribution moved = pushforward_by_vertex_map(asym.dist, {1, 0});
    CHECK(moved.exact_prob({1, 0}) == Rational(1, 2));
}

TEST_CASE("affine generator set generates the whole affine group") {
    CHECK(generate_affine_group(1).size() == 2);
    CHECK(generate_affine_group(2).size() == 24);
    CHECK(generate_affine_group(3).size() == 1344);
}

TEST_CASE("generator invariance implies invariance under random words") {
    GroupPtr z2 = make_d1(2);
    WindowDistribution w = uniform_cube_window(z2, 2, 1u << 22);
    REQUIRE(check_affine_exchangeable(w).pass);
    RngStream rng(17);
    auto gens = affine_generators(2);
    for (int rep = 0; rep < 50; ++rep) {
        // a random word in the generators
        std::vector<int> sigma(4);
        for (int v = 0; v < 4; ++v) sigma[v] = v;
        int len = 1 + static_cast<int>(rng.next_below(6));
        for (int i = 0; i < len; ++i) {
            const auto& g = gens[rng.next_below(gens.size())].map;
            std::vector<int> next(4);
            for (int v = 0; v < 4; ++v) next[v] = sigma[g.apply(v)];
            sigma = next;
        }
        CHECK(pushforward_by_vertex_map(w.dist, sigma) == w.dist);
    }
}

TEST_CASE("affine exchangeability of uniform cube measures tracks 2-homogeneity") {
    for (const auto& [name, z] : oracles::corpus()) {
        CAPTURE(name);
        WindowDistribution w = uniform_cube_window(z, 2, 1u << 22);
        ExchReport rep = check_affine_exchangeable(w);
        CHECK(rep.pass == z->is_2homogeneous());
    }
}

TEST_CASE("the Z3 failure pins the transvection witness") {
    WindowDistribution w = uniform_cube_window(make_d1(3), 2, 1u << 22);
    ExchReport rep = check_affine_exchangeable(w);
    REQUIRE_FALSE(rep.pass);
    bool transvection_blamed = false;
    for (const auto& wit : rep.witnesses)
        if (wit.transform.find("transvection") != std::string::npos) transvection_blamed = true;
    CHECK(transvection_blamed);
    // translations and the shift alone leave it invariant
    for (const auto& wit : rep.witnesses) CHECK(wit.transform.find("translate") == std::string::npos);
}

TEST_CASE("monte carlo windows get the statistical variant") {
    GroupPtr z4 = make_canonical(2, 1);
    LimitObject lim = dirac_mod_limit(z4, 2);
    WindowDistribution w;
    w.k = 2;
    w.dist = zeta_marginal(lim, full_window(2), mc_spec(100000, 13));
    ExchReport rep = check_affine_exchangeable(w);
    CHECK(rep.statistical);
    CHECK(rep.pass);

    // estimates corrupted well past the threshold fail
    WindowDistribution bad = w;
    auto first = bad.dist.estimated.begin();
    auto second = std::next(first);
    double delta = std::min(0.2, second->second);
    first->second += delta;
    second->second -= delta;
    ExchReport rep2 = check_affine_exchangeable(bad);
    CHECK(rep2.statistical);
    CHECK_FALSE(rep2.pass);
}

TEST_CASE("malformed windows are rejected") {
    WindowDistribution w;
    w.k = 1;
    w.dist.tuple_len = 2;
    w.dist.alphabet = {"0", "1"};
    w.dist.exact[{0, 0}] = Rational(1, 2);
    CHECK_THROWS_AS(check_affine_exchangeable(w), std::invalid_argument);  // sums to 1/2
    w.dist.exact[{1, 1}] = Rational(1, 2);
    CHECK(check_affine_exchangeable(w).pass);
    w.dist.tuple_len = 3;
    CHECK_THROWS_AS(check_affine_exchangeable(w), std::invalid_argument);
}

TEST_CASE("product measures pass everything") {
    WindowDistribution w = product_window(2, Rational(2, 5));
    CHECK(check_affine_exchangeable(w).pass);
    CHECK(check_cubic_exchangeable(w, 1).pass);
    CHECK(check_independence_property(w).pass);
}

TEST_CASE("cubic exchangeability") {
    GroupPtr z2 = make_d1(2);
    WindowDistribution w = uniform_cube_window(z2, 2, 1u << 22);
    for (int m = 0; m <= 2; ++m) CHECK(check_cubic_exchangeable(w, m).pass);
    CHECK_THROWS_AS(check_cubic_exchangeable(w, 3), std::invalid_argument);

    // moving mass between vertices of different Hamming weight breaks it
    WindowDistribution corrupted = w;
    auto it = corrupted.dist.exact.begin();
    Outcome low = it->first;
    Rational delta = it->second / 2;
    corrupted.dist.exact[low] -= delta;
    Outcome shifted = low;
    std::swap(shifted[0], shifted[3]);
    if (shifted == low) shifted[3] = (shifted[3] + 1) % 2;
    corrupted.dist.exact[shifted] += delta;
    CHECK_FALSE(check_cubic_exchangeable(corrupted, 1).pass);

    // uniform cube measures satisfy the consistency axiom corpus-wide
    for (const auto& [name, z] : oracles::corpus()) {
        CAPTURE(name);
        if (z->order() > 4) continue;
        WindowDistribution wz = uniform_cube_window(z, 2, 1u << 22);
        for (int m = 0; m <= 2; ++m) CHECK(check_cubic_exchangeable(wz, m).pass);
    }
}

TEST_CASE("independence property") {
    // zeta marginal windows have it
    GroupPtr z4 = make_canonical(2, 1);
    WindowDistribution w;
    w.k = 2;
    w.dist = zeta_marginal(dirac_mod_limit(z4, 2), full_window(2), exact_spec());
    CHECK(check_independence_property(w).pass);

    // perfectly correlated vertices on two independent 0-faces fail
    WindowDistribution corr;
    corr.k = 2;
    corr.dist.tuple_len = 4;
    corr.dist.alphabet = {"0", "1"};
    corr.dist.exact[{0, 0, 0, 0}] = Rational(1, 2);
    corr.dist.exact[{1, 1, 1, 1}] = Rational(1, 2);
    CHECK_FALSE(check_independence_property(corr).pass);
}

TEST_CASE("affine implies cubic implies equal face projections") {
    for (const auto& [name, z] : oracles::corpus()) {
        CAPTURE(name);
        if (z->order() > 4) continue;
        WindowDistribution w = uniform_cube_window(z, 2, 1u << 22);
        ExchReport affine = check_affine_exchangeable(w);
        ExchReport cubic1 = check_cubic_exchangeable(w, 1);
        ExchReport cubic2 = check_cubic_exchangeable(w, 2);
        if (affine.pass) {
            CHECK(cubic1.pass);
            CHECK(cubic2.pass);
        }
        if (cubic1.pass) {
            // projections along any two 1-faces agree: face marginals equal
            auto faces = all_faces(2);
            FiniteDistribution first;
            bool have = false;
            for (const auto& f : faces) {
                if (std::popcount(f.free_mask) != 1) continue;
                auto verts = f.vertices();
                FiniteDistribution m =
                    w.dist.marginal(std::vector<int>(verts.begin(), verts.end()));
                if (!have) {
                    first = m;
                    have = true;
                } else {
                    CHECK(m == first);
                }
            }
        }
    }
}

TEST_SUITE_END();
