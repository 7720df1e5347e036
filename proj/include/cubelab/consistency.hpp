#pragma once

#include <cstdint>
#include <vector>

#include "cubelab/group.hpp"
#include "cubelab/measures.hpp"
#include "cubelab/poly.hpp"

namespace cubelab {

// The subgroup of Z^m of value tuples achievable by evaluating morphisms
// hom(D_1(F_2^{s-1}), Z) at the m forms: generated by monomial evaluations,
// reduced to a Howell-style echelon over the prime-power moduli for O(m)
// membership tests.
class ConsistencySubgroup {
public:
    ConsistencySubgroup(GroupPtr target, LinearFormSystem forms);

    const GroupPtr& target() const { return target_; }
    const LinearFormSystem& forms() const { return forms_; }
    std::size_t num_forms() const { return forms_.forms.size(); }

    // Unreduced monomial generators, one m-tuple of group elements each.
    const std::vector<std::vector<GroupElement>>& generators() const { return generators_; }

    bool contains(const std::vector<GroupElement>& tuple) const;

    // Reduced pivot columns in the lifted ring Z/p^E, for reporting.
    struct Pivot {
        std::size_t row;
        std::uint32_t valuation;
        std::vector<std::uint64_t> column;
    };
    const std::vector<Pivot>& pivots() const { return pivots_; }

    BigInt subgroup_order() const;

private:
    GroupPtr target_;
    LinearFormSystem forms_;
    std::vector<std::vector<GroupElement>> generators_;

    std::uint32_t prime_ = 2;
    std::uint32_t max_exp_ = 0;            // E
    std::vector<std::uint32_t> pos_exp_;   // exponent of each flattened position
    std::vector<Pivot> pivots_;

    std::vector<std::uint64_t> lift(const std::vector<GroupElement>& tuple) const;
    void reduce(std::vector<std::vector<std::uint64_t>> cols);
};

// Membership of b in the consistency subgroup for the calibrated target
// Z_{k, ell(k,r)}. Values are residues in that target group.
bool is_consistent(const std::vector<std::uint32_t>& b, const LinearFormSystem& forms, int k,
                   int r, const DepthConvention& conv);

}  // namespace cubelab
