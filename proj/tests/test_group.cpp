#include <doctest.h>

#include "cubelab/group.hpp"
#include "support/oracles.hpp"

using namespace cubelab;

TEST_SUITE_BEGIN("group");

TEST_CASE("canonical blocks match the order formula") {
    // |Z_{k,l}| = 2^(k-l+1)
    for (int k = 1; k <= 6; ++k)
        for (int ell = 1; ell <= k; ++ell) {
            GroupPtr z = make_canonical(k, ell);
            CHECK(z->order() == (1ull << (k - ell + 1)));
            CHECK(z->degree() == k);
            CHECK(z->is_2homogeneous());
        }
    CHECK_THROWS_AS(make_canonical(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_canonical(2, 3), std::invalid_argument);
}

TEST_CASE("canonical examples") {
    GroupPtr z11 = make_canonical(1, 1);
    CHECK(z11->moduli() == std::vector<std::uint32_t>{2});
    CHECK(z11->degree() == 1);

    GroupPtr z21 = make_canonical(2, 1);
    CHECK(z21->moduli() == std::vector<std::uint32_t>{4});
    CHECK(z21->multiplier(2, 0) == 2);
    CHECK(z21->multiplier(3, 0) == 4);

    GroupPtr z22 = make_canonical(2, 2);
    CHECK(z22->moduli() == std::vector<std::uint32_t>{2});
    CHECK(z22->degree() == 2);
    CHECK(z22->multiplier(2, 0) == 1);
}

TEST_CASE("level subgroup index of canonical blocks") {
    for (int k = 1; k <= 5; ++k)
        for (int ell = 1; ell <= k; ++ell) {
            GroupPtr z = make_canonical(k, ell);
            for (int i = 0; i <= k + 1; ++i) {
                std::uint64_t index = z->order() / z->level_order(i);
                int expect = std::max(0, std::min(i, k + 1) - ell);
                CHECK(index == std::min<std::uint64_t>(z->order(), 1ull << expect));
            }
        }
}

TEST_CASE("h truncation shapes") {
    GroupPtr a = make_h_truncation(1, {1});
    CHECK(*a == *make_canonical(1, 1));

    GroupPtr b = make_h_truncation(2, {1, 1});
    CHECK(b->moduli() == std::vector<std::uint32_t>{4, 2});
    CHECK(b->degree() == 2);
    CHECK(b->multiplier(2, 0) == 2);
    CHECK(b->multiplier(2, 1) == 1);

    GroupPtr c = make_h_truncation(2, {0, 2});
    CHECK(c->moduli() == std::vector<std::uint32_t>{2, 2});
    CHECK(c->level_order(2) == 4);
    CHECK(c->is_2homogeneous());
}

TEST_CASE("product basics") {
    GroupPtr z2 = make_d1(2);
    GroupPtr p = product(z2, z2);
    CHECK(p->order() == 4);
    CHECK(p->degree() == 1);

    GroupPtr q = product(make_canonical(2, 1), make_canonical(2, 2));
    CHECK(q->moduli() == std::vector<std::uint32_t>{4, 2});
    CHECK(q->degree() == 2);

    GroupPtr with_trivial = product(q, make_trivial_group());
    CHECK(*with_trivial == *q);
}

TEST_CASE("product is associative") {
    GroupPtr a = make_canonical(2, 1);
    GroupPtr b = make_canonical(3, 2);
    GroupPtr c = make_d1(3);
    CHECK(*product(product(a, b), c) == *product(a, product(b, c)));
}

TEST_CASE("product level counts multiply") {
    GroupPtr a = make_canonical(2, 1);
    GroupPtr b = make_canonical(3, 2);
    GroupPtr p = product(a, b);
    for (int i = 0; i <= p->degree() + 1; ++i)
        CHECK(p->level_order(i) == a->level_order(i) * b->level_order(i));
}

TEST_CASE("quotient by level") {
    // canonical projection pi_1^(1): Z_{2,1}/Z_(2) is Z_{1,1}
    GroupPtr z21 = make_canonical(2, 1);
    CHECK(*quotient_by_level(z21, 2) == *make_canonical(1, 1));

    // quotient at j = 1 collapses everything
    CHECK(quotient_by_level(z21, 1)->trivial());

    // Z_{3,1} = Z8 quotients to Z_{2,1} = Z4 at j = 3
    CHECK(*quotient_by_level(make_canonical(3, 1), 3) == *make_canonical(2, 1));

    CHECK_THROWS_AS(quotient_by_level(z21, 5), std::invalid_argument);
}

TEST_CASE("quotient of canonical drops one step") {
    // pi_{k-1}^{(ell)}: Z_{k,ell} -> Z_{k-1,ell}, defined for ell <= k-1; at
    // ell = k the level-k subgroup is everything and the quotient collapses
    for (int k = 2; k <= 5; ++k) {
        for (int ell = 1; ell <= k - 1; ++ell)
            CHECK(*quotient_by_level(make_canonical(k, ell), k) == *make_canonical(k - 1, ell));
        CHECK(quotient_by_level(make_canonical(k, k), k)->trivial());
    }
}

TEST_CASE("2-homogeneity predicate") {
    CHECK(make_d1(2)->is_2homogeneous());
    CHECK_FALSE(make_d1(3)->is_2homogeneous());
    CHECK_FALSE(make_d1(4)->is_2homogeneous());
    for (int k = 1; k <= 6; ++k)
        for (int ell = 1; ell <= k; ++ell) CHECK(make_canonical(k, ell)->is_2homogeneous());
}

TEST_CASE("level members") {
    GroupPtr z21 = make_canonical(2, 1);
    CHECK(z21->level_members(2) == std::vector<std::uint32_t>{0, 2});
    CHECK(z21->level_members(0).size() == 4);

    GroupPtr p = product(make_canonical(2, 1), make_canonical(2, 2));
    CHECK(p->level_members(2).size() == 4);  // {0,2} x {0,1}
    for (auto idx : p->level_members(2)) {
        GroupElement e = p->element_at(idx);
        CHECK(e[0] % 2 == 0);
    }
    CHECK_THROWS_AS(z21->level_members(-1), std::out_of_range);
}

TEST_CASE("group arithmetic round trips") {
    for (const auto& [name, z] : oracles::corpus()) {
        CAPTURE(name);
        for (std::uint32_t a = 0; a < z->order(); ++a) {
            CHECK(z->index_of(z->element_at(a)) == a);
            CHECK(z->add(a, z->neg(a)) == 0);
            for (std::uint32_t b = 0; b < z->order(); ++b)
                CHECK(z->add(a, b) == z->add(b, a));
        }
    }
}

TEST_CASE("constructor rejects malformed filtrations") {
    CHECK_THROWS_AS(make_group({4}, 1, {{1}, {2}, {4}}), std::invalid_argument);  // Z_(1) != Z
    CHECK_THROWS_AS(make_group({4}, 1, {{1}, {1}, {2}}), std::invalid_argument);  // tail not 0
    CHECK_THROWS_AS(make_group({6}, 1, {{1}, {1}, {6}}), std::invalid_argument);  // 6 not prime power
    CHECK_THROWS_AS(make_group({4}, 2, {{1}, {1}, {3}, {4}}), std::invalid_argument);  // 3 | 4 fails
}

TEST_SUITE_END();
