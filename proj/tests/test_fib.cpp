#include <doctest.h>

#include <algorithm>

#include "cubelab/fib.hpp"
#include "support/oracles.hpp"

using namespace cubelab;

TEST_SUITE_BEGIN("fib");

namespace {

std::vector<std::vector<std::uint32_t>> tables(const std::vector<GroupNilspaceMap>& v) {
    std::vector<std::vector<std::uint32_t>> t;
    for (const auto& m : v) t.push_back(m.table);
    std::sort(t.begin(), t.end());
    return t;
}

}  // namespace

TEST_CASE("identity and quotient maps are morphisms") {
    for (const auto& [name, z] : oracles::corpus()) {
        CAPTURE(name);
        CHECK(is_morphism(identity_map(z)).ok);
    }
    GroupNilspaceMap pi = quotient_projection(make_canonical(2, 1), 2);
    CHECK(*pi.codomain == *make_canonical(1, 1));
    CHECK(is_morphism(pi).ok);
}

TEST_CASE("a map that breaks a sigma constraint is rejected with the cube route") {
    GroupPtr z4 = make_canonical(2, 1);
    // x -> x^2-like scramble: 0,1,2,3 -> 0,1,0,3 is not a polynomial map
    GroupNilspaceMap bad{z4, z4, {0, 1, 0, 3}};
    CHECK_FALSE(is_morphism(bad).ok);
    CHECK_FALSE(is_morphism_differences(bad));
}

TEST_CASE("difference route equals the cube route on every map of small pairs") {
    std::vector<GroupPtr> small{make_d1(2), make_d1(3), make_canonical(2, 1),
                                make_canonical(2, 2)};
    for (const auto& x : small)
        for (const auto& y : small) {
            int nmax = std::max(x->degree(), y->degree()) + 1;
            auto brute = oracles::morphisms_full_scan(x, y, nmax, 1u << 22);
            auto fast = enumerate_group_morphisms(x, y, 1u << 22);
            CHECK(tables(brute) == tables(fast));
            // every brute morphism passes the difference conditions and the
            // spot-check one dimension higher
            for (const auto& phi : brute) {
                CHECK(is_morphism_differences(phi));
                CHECK(is_morphism(phi, nmax + 1, 1u << 22).ok);
            }
        }
}

TEST_CASE("morphism counts on named pairs") {
    GroupPtr z2 = make_d1(2);
    auto endo = enumerate_group_morphisms(z2, z2);
    CHECK(endo.size() == 4);  // the four affine maps

    auto from_trivial = enumerate_group_morphisms(make_trivial_group(), make_canonical(2, 1));
    CHECK(from_trivial.size() == 4);  // one constant per target point

    auto into_d2 = enumerate_group_morphisms(z2, make_canonical(2, 2));
    CHECK(into_d2.size() == 4);  // every map Z2 -> Z2 is affine
}

TEST_CASE("cube surjectivity") {
    GroupPtr z4 = make_canonical(2, 1);
    GroupPtr z2 = make_canonical(1, 1);
    CHECK(is_cube_surjective(identity_map(z4), 3));
    GroupNilspaceMap pi = quotient_projection(z4, 2);
    CHECK(is_cube_surjective(pi, 2));

    GroupNilspaceMap constant{z4, z4, {0, 0, 0, 0}};
    CHECK_FALSE(is_cube_surjective(constant, 0));

    // inclusion Z2 -> Z4 by doubling: a morphism, but not surjective at n=0
    GroupNilspaceMap incl{z2, z4, {0, 2}};
    CHECK(is_morphism(incl).ok);
    CHECK_FALSE(is_cube_surjective(incl, 0));
    CHECK_FALSE(is_fibration(incl));
}

TEST_CASE("fibrations: identity, quotients, and the coset route vs corners") {
    for (const auto& [name, z] : oracles::corpus()) {
        CAPTURE(name);
        CHECK(is_fibration(identity_map(z)));
        for (int j = 1; j <= z->degree() + 1; ++j) {
            GroupNilspaceMap pi = quotient_projection(z, j);
            CHECK(is_morphism(pi).ok);
            CHECK(is_fibration(pi));
            if (z->order() <= 4) CHECK(is_fibration_corner_route(pi, z->degree() + 1, 1u << 22));
        }
    }
    // two routes agree on every morphism of a small pair
    GroupPtr a = make_canonical(2, 1);
    GroupPtr b = make_canonical(1, 1);
    for (const auto& phi : enumerate_group_morphisms(a, b))
        CHECK(is_fibration(phi) == is_fibration_corner_route(phi, 3, 1u << 22));
}

TEST_CASE("fibrations compose") {
    GroupPtr z8 = make_canonical(3, 1);
    GroupNilspaceMap p1 = quotient_projection(z8, 3);             // Z8 -> Z4
    GroupNilspaceMap p2 = quotient_projection(p1.codomain, 2);    // Z4 -> Z2
    GroupNilspaceMap comp = compose(p2, p1);
    CHECK(is_morphism(comp).ok);
    CHECK(is_fibration(comp));
}

TEST_CASE("explicit fibrations from truncations of the universal group") {
    for (const auto& [name, z] : oracles::corpus()) {
        CAPTURE(name);
        if (!z->is_2homogeneous() || z->degree() > 2) continue;
        auto hf = search_h_fibration(z);
        REQUIRE(hf.has_value());
        CHECK(is_morphism(hf->map).ok);
        CHECK(is_fibration(hf->map));
        CHECK(is_cube_surjective(hf->map, z->degree() + 1));
    }
}

TEST_CASE("cube-surjective morphisms are fibrations on small pairs") {
    std::vector<GroupPtr> small{make_d1(2), make_d1(3), make_canonical(2, 1),
                                make_canonical(2, 2)};
    for (const auto& x : small)
        for (const auto& y : small) {
            int nmax = std::max(x->degree(), y->degree()) + 1;
            for (const auto& phi : enumerate_group_morphisms(x, y))
                if (is_cube_surjective(phi, nmax)) CHECK(is_fibration(phi));
        }
}

TEST_SUITE_END();
