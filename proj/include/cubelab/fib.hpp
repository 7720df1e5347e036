#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cubelab/budget.hpp"
#include "cubelab/cubes.hpp"
#include "cubelab/group.hpp"

namespace cubelab {

// Dense map between two finite filtered groups, table indexed by domain
// element index.
struct GroupNilspaceMap {
    GroupPtr domain;
    GroupPtr codomain;
    std::vector<std::uint32_t> table;

    void validate() const;
    std::uint32_t operator()(std::uint32_t x) const { return table[x]; }
};

GroupNilspaceMap identity_map(const GroupPtr& z);
// Projection Z -> Z/Z_(j) (the canonical fibration pi).
GroupNilspaceMap quotient_projection(const GroupPtr& z, int j);
GroupNilspaceMap compose(const GroupNilspaceMap& outer, const GroupNilspaceMap& inner);

// Cube-composition morphism test: phi.q is a cube of the codomain for every
// q in C^n(domain), n <= nmax. Dimensions whose cube group exceeds the budget
// fall back to the difference-condition characterization of polynomial maps
// (exact, deterministic; cross-validated against this route in the tests).
struct MorphismCheck {
    bool ok = true;
    std::vector<int> cube_checked_dims;
    bool used_difference_route = false;
};
MorphismCheck is_morphism(const GroupNilspaceMap& phi, int nmax = -1,
                          std::uint64_t budget = kDefaultBudget);

// Difference conditions alone: for every multiset of steps h_j in Z_(i_j)
// with sum of levels t <= deg(codomain)+1, the iterated difference of phi
// lands in Y_(t).
bool is_morphism_differences(const GroupNilspaceMap& phi);

// |image of phi on C^n(domain)| == |C^n(codomain)| for every n <= nmax.
bool is_cube_surjective(const GroupNilspaceMap& phi, int nmax,
                        std::uint64_t budget = kDefaultBudget);

// Fibration test via the coset conditions: phi surjective and, for every
// level n and point x, phi(x + X_(n)) covers phi(x) + Y_(n).
bool is_fibration(const GroupNilspaceMap& phi, int nmax = -1);

// Definitional route: every corner completion downstairs lifts. Exhaustive
// over corners of dimension <= nmax; budget-guarded.
bool is_fibration_corner_route(const GroupNilspaceMap& phi, int nmax,
                               std::uint64_t budget = kDefaultBudget);

// All morphisms domain -> codomain, by depth-first assignment of the value
// table with difference-condition pruning; every candidate is confirmed with
// is_morphism before being returned.
std::vector<GroupNilspaceMap> enumerate_group_morphisms(const GroupPtr& domain,
                                                        const GroupPtr& codomain,
                                                        std::uint64_t budget = kDefaultBudget);

// Explicit fibration from a finite truncation of the universal 2-homogeneous
// group onto z (z a product of canonical blocks), verified before returning.
struct HFibration {
    int k = 0;
    std::vector<int> widths;
    GroupNilspaceMap map;
};
std::optional<HFibration> search_h_fibration(const GroupPtr& z,
                                             std::uint64_t budget = kDefaultBudget);

}  // namespace cubelab
