#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "cubelab/cubes.hpp"
#include "cubelab/rng.hpp"
#include "support/oracles.hpp"

using namespace cubelab;

TEST_SUITE_BEGIN("cubes");

namespace {

CubePoint table_of(const GroupPtr& z, int k, std::vector<std::uint32_t> residues) {
    CubePoint q{k, z, {}};
    for (auto r : residues) q.values.push_back(z->index_of({r}));
    return q;
}

}  // namespace

TEST_CASE("evaluate examples") {
    GroupPtr z2 = make_d1(2);
    CubeCoeffs c1{1, z2, {0, 1}};
    CHECK(evaluate(c1).values == std::vector<std::uint32_t>{0, 1});

    // k=2 over Z4 with coefficients (1,1,2,2): table (1,2,3,2)
    GroupPtr z4 = make_canonical(2, 1);
    CubeCoeffs c2{2, z4, {1, 1, 2, 2}};
    CHECK(evaluate(c2).values == std::vector<std::uint32_t>{1, 2, 3, 2});

    CubeCoeffs zero{2, z4, {0, 0, 0, 0}};
    CHECK(evaluate(zero).values == std::vector<std::uint32_t>{0, 0, 0, 0});
}

TEST_CASE("moebius inversion round trips") {
    GroupPtr z4 = make_canonical(2, 1);
    CubePoint q = table_of(z4, 2, {1, 2, 3, 2});
    CubeCoeffs c = coeffs_from_cube(q);
    CHECK(c.coeff == std::vector<std::uint32_t>{1, 1, 2, 2});

    // constant table: only the empty coefficient survives
    CubePoint cst = table_of(z4, 2, {3, 3, 3, 3});
    CHECK(coeffs_from_cube(cst).coeff == std::vector<std::uint32_t>{3, 0, 0, 0});

    // round trip on random tables, including odd order
    for (const auto& [name, z] : oracles::corpus()) {
        CAPTURE(name);
        RngStream rng(42);
        for (int rep = 0; rep < 50; ++rep) {
            CubePoint t{2, z, {}};
            for (int v = 0; v < 4; ++v)
                t.values.push_back(static_cast<std::uint32_t>(rng.next_below(z->order())));
            CHECK(evaluate(coeffs_from_cube(t)).values == t.values);
        }
    }
}

TEST_CASE("is_cube examples") {
    GroupPtr z2 = make_d1(2);
    CHECK(is_cube(table_of(z2, 2, {0, 1, 1, 0})));
    CHECK_FALSE(is_cube(table_of(z2, 2, {0, 0, 0, 1})));
    // every 1-dimensional table is a cube (ergodicity)
    for (const auto& [name, z] : oracles::corpus())
        for (std::uint32_t a = 0; a < z->order(); ++a)
            for (std::uint32_t b = 0; b < z->order(); ++b)
                CHECK(is_cube(CubePoint{1, z, {a, b}}));
}

TEST_CASE("face route and coefficient route agree") {
    for (const auto& [name, z] : oracles::corpus()) {
        CAPTURE(name);
        RngStream rng(7);
        for (int k = 1; k <= 3; ++k)
            for (int rep = 0; rep < 200; ++rep) {
                CubePoint t{k, z, {}};
                for (int v = 0; v < (1 << k); ++v)
                    t.values.push_back(static_cast<std::uint32_t>(rng.next_below(z->order())));
                CHECK(is_cube(t) == is_cube_coeff_route(t));
            }
    }
}

TEST_CASE("complete corner") {
    GroupPtr z2 = make_d1(2);
    CubePoint p = table_of(z2, 2, {0, 1, 1, 0});
    p.values[3] = 0;  // pretend missing
    CubePoint done = complete_corner(p, 3);
    CHECK(done.values == std::vector<std::uint32_t>{0, 1, 1, 0});

    // Z4, k=3: a two-ones corner. Zeroing all six other vertices leaves the
    // side faces with sigma_2 = -1, outside 2Z4, so that table is rejected as
    // a corner; balancing the side faces makes the completion forced.
    GroupPtr z4 = make_canonical(2, 1);
    CubePoint invalid = table_of(z4, 3, {0, 1, 1, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(complete_corner(invalid, 7), std::invalid_argument);
    CHECK(count_completions(invalid, 7) == 0);

    CubePoint c3 = table_of(z4, 3, {0, 1, 1, 0, 0, 1, 1, 0});
    CubePoint full = complete_corner(c3, 7);
    CHECK(full.values[7] == z4->index_of({0}));
    CHECK(count_completions(c3, 7) == 1);
    // the forced value solves sigma_3(q) = 0; cross-check by brute force
    for (std::uint32_t x = 0; x < 4; ++x) {
        CubePoint probe = c3;
        probe.values[7] = x;
        CHECK(is_cube(probe) == (x == full.values[7]));
    }

    // constant corner completes with the same constant
    CubePoint cc = table_of(z4, 3, {3, 3, 3, 3, 3, 3, 3, 3});
    CHECK(complete_corner(cc, 5).values[5] == z4->index_of({3}));

    // dimension at or below the degree is rejected
    CHECK_THROWS_AS(complete_corner(table_of(z4, 2, {0, 0, 0, 0}), 3), std::invalid_argument);
    // but the exhaustive helper still counts
    CHECK(count_completions(table_of(z4, 2, {0, 0, 0, 0}), 3) == 2);

    // invalid corner: the bottom face (v3=0) has sigma_2 = 1, outside Z_(2) = 2Z4
    CubePoint bad = table_of(z4, 3, {0, 0, 0, 1, 0, 0, 0, 0});
    CHECK_THROWS_AS(complete_corner(bad, 7), std::invalid_argument);
}

TEST_CASE("corner completion unique at degree+1 for every corpus group") {
    for (const auto& [name, z] : oracles::corpus()) {
        CAPTURE(name);
        int k = z->degree() + 1;
        if (k > 3) continue;  // keep the scan small
        std::uint64_t checked = 0;
        for_each_cube(z, k, 1u << 22, [&](const CubeCoeffs& c) {
            if (checked >= 64) return;  // corners repeat; a sample suffices
            ++checked;
            CubePoint q = evaluate(c);
            CHECK(count_completions(q, (1u << k) - 1) == 1);
        });
    }
}

TEST_CASE("cube count formula matches brute force") {
    GroupPtr z2 = make_d1(2);
    CHECK(cube_count(z2, 2) == 8);
    CHECK(oracles::cube_set_full_scan(z2, 2).size() == 8);

    GroupPtr z4 = make_canonical(2, 1);
    CHECK(cube_count(z4, 2) == 128);
    CHECK(oracles::cube_set_full_scan(z4, 2).size() == 128);

    for (const auto& [name, z] : oracles::corpus()) {
        CAPTURE(name);
        CHECK(cube_count(z, 1) == BigInt(static_cast<unsigned long>(z->order() * z->order())));
    }
}

TEST_CASE("coefficient image equals membership set with no duplicates") {
    for (const auto& [name, z] : oracles::corpus()) {
        CAPTURE(name);
        for (int n = 1; n <= 2; ++n) {
            auto image = cube_table_set(z, n, 1u << 22);
            auto full = oracles::cube_set_full_scan(z, n);
            CHECK(image.size() == full.size());
            CHECK(std::equal(image.begin(), image.end(), full.begin(), full.end()));
            CHECK(cube_count(z, n) == BigInt(static_cast<unsigned long>(image.size())));
        }
    }
}

TEST_CASE("membership DFS equals coefficient image at k=3") {
    for (const auto& [name, z] : oracles::corpus()) {
        CAPTURE(name);
        if (z->order() > 4) continue;  // the big ones run in the acceptance suite
        auto dfs = cube_table_set_by_membership(z, 3);
        auto image = cube_table_set(z, 3, 1u << 22);
        CHECK(dfs == image);
    }
}

TEST_CASE("cube group closed under vertex-wise addition") {
    for (const auto& [name, z] : oracles::corpus()) {
        CAPTURE(name);
        RngStream rng(3);
        for (int rep = 0; rep < 100; ++rep) {
            CubeCoeffs a = sample_cube(z, 2, rng);
            CubeCoeffs b = sample_cube(z, 2, rng);
            CubePoint qa = evaluate(a), qb = evaluate(b);
            CubePoint sum{2, z, {}};
            for (int v = 0; v < 4; ++v) sum.values.push_back(z->add(qa.values[v], qb.values[v]));
            CHECK(is_cube(sum));
        }
    }
}

TEST_CASE("restriction by morphisms preserves membership") {
    GroupPtr z2 = make_d1(2);
    CubePoint q = table_of(z2, 2, {0, 1, 1, 0});

    CubeMorphism id{{MorphCoord::Var, 1}, {MorphCoord::Var, 2}};
    CHECK(restrict_cube(q, id, 2).values == q.values);

    CubeMorphism collapse{{MorphCoord::Zero, 0}, {MorphCoord::Zero, 0}};
    CHECK(restrict_cube(q, collapse, 2).values == std::vector<std::uint32_t>(4, q.values[0]));

    // face map v -> (v, 1) pulls out the top row (1,0)
    CubeMorphism face{{MorphCoord::Var, 1}, {MorphCoord::One, 0}};
    CHECK(restrict_cube(q, face, 1).values == std::vector<std::uint32_t>{1, 0});

    CubeMorphism bad{{MorphCoord::Var, 3}, {MorphCoord::One, 0}};
    CHECK_THROWS_AS(restrict_cube(q, bad, 1), std::invalid_argument);

    // exhaustively: every morphism image of a member is a member
    for (const auto& [name, z] : oracles::corpus()) {
        CAPTURE(name);
        if (z->order() > 4) continue;
        for (int k = 1; k <= 3; ++k) {
            std::uint64_t reps = 0;
            for_each_cube(z, k, 1u << 22, [&](const CubeCoeffs& c) {
                if (++reps > 40) return;
                CubePoint q2 = evaluate(c);
                for (int m = 1; m <= k; ++m)
                    for (const auto& phi : enumerate_morphisms_mk(m, k, false))
                        CHECK(is_cube(restrict_cube(q2, phi, m)));
            });
        }
    }
}

TEST_CASE("sampling is uniform over the exact cube set") {
    // D1(Z2), k=1: all four tables equally likely
    GroupPtr z2 = make_d1(2);
    RngStream rng(12345);
    const int N = 100000;
    std::map<std::uint64_t, int> freq;
    for (int i = 0; i < N; ++i) ++freq[pack_table(evaluate(sample_cube(z2, 1, rng)))];
    CHECK(freq.size() == 4);
    for (const auto& [t, c] : freq)
        CHECK(std::abs(c - N / 4.0) < 3 * std::sqrt(N * 0.25 * 0.75));

    // Z_{2,1}, k=2: support inside the 128-element set, roughly uniform
    GroupPtr z4 = make_canonical(2, 1);
    auto exact = cube_table_set(z4, 2, 1u << 22);
    std::set<std::uint64_t> exact_set(exact.begin(), exact.end());
    std::map<std::uint64_t, int> freq2;
    for (int i = 0; i < N; ++i) ++freq2[pack_table(evaluate(sample_cube(z4, 2, rng)))];
    double p = 1.0 / 128.0;
    for (const auto& [t, c] : freq2) {
        CHECK(exact_set.count(t) == 1);
        CHECK(std::abs(c - N * p) < 4 * std::sqrt(N * p * (1 - p)));
    }

    // trivial group: the single all-zero cube
    GroupPtr triv = make_trivial_group();
    CubeCoeffs c = sample_cube(triv, 2, rng);
    CHECK(evaluate(c).values == std::vector<std::uint32_t>{0, 0, 0, 0});
}

TEST_CASE("finite 2-homogeneity criterion: affine images of cubes stay cubes iff 2-homogeneous") {
    // q composed with any affine map T: F_2^m -> F_2^n stays a cube exactly
    // when the group is 2-homogeneous; D1(Z3) must fail.
    auto affine_stable = [](const GroupPtr& z) {
        for (int n = 1; n <= 3; ++n) {
            bool ok = true;
            std::vector<std::uint32_t> qv(1u << n);
            for_each_cube(z, n, 1u << 22, [&](const CubeCoeffs& c) {
                if (!ok) return;
                evaluate_into(*z, n, c.coeff.data(), qv.data());
                for (int m = 1; m <= 3 && ok; ++m) {
                    // all affine maps F_2^m -> F_2^n: columns + shift
                    std::vector<std::uint32_t> composed(1u << m);
                    for (std::uint32_t code = 0; code < (1u << ((m + 1) * n)) && ok; ++code) {
                        for (std::uint32_t v = 0; v < (1u << m); ++v) {
                            std::uint32_t w = code & ((1u << n) - 1);  // shift
                            for (int i = 0; i < m; ++i)
                                if ((v >> i) & 1) w ^= (code >> ((i + 1) * n)) & ((1u << n) - 1);
                            composed[v] = qv[w];
                        }
                        if (!is_cube_values(*z, m, composed.data())) ok = false;
                    }
                }
            });
            if (!ok) return false;
        }
        return true;
    };
    for (const auto& [name, z] : oracles::corpus()) {
        CAPTURE(name);
        if (z->order() > 4) continue;
        CHECK(affine_stable(z) == z->is_2homogeneous());
    }
}

TEST_SUITE_END();
