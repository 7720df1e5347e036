#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace cubelab {

// Element of a product of cyclic groups, one residue per coordinate.
using GroupElement = std::vector<std::uint32_t>;

class FilteredGroup;
using GroupPtr = std::shared_ptr<const FilteredGroup>;

// A finite abelian group prod_j Z/q_j with a non-increasing subgroup
// filtration Z = Z_(0) = Z_(1) >= Z_(2) >= ... >= Z_(degree+1) = {0}.
// Each level is stored by per-coordinate multipliers: Z_(i) = prod_j c[i][j]*Z/q_j.
// Immutable after construction; elements are addressed both as residue vectors
// and as dense indices 0..order-1 (mixed radix, coordinate 0 fastest).
class FilteredGroup {
public:
    FilteredGroup(std::vector<std::uint32_t> moduli, int degree,
                  std::vector<std::vector<std::uint32_t>> multipliers);

    const std::vector<std::uint32_t>& moduli() const { return moduli_; }
    int degree() const { return degree_; }
    std::size_t coords() const { return moduli_.size(); }
    std::uint64_t order() const { return order_; }
    bool trivial() const { return order_ == 1; }

    // Multiplier of coordinate j at level i; levels beyond degree+1 are trivial.
    std::uint32_t multiplier(int level, std::size_t j) const;
    // |Z_(i)|
    std::uint64_t level_order(int level) const;

    // Dense index <-> residues.
    std::uint32_t index_of(const GroupElement& e) const;
    GroupElement element_at(std::uint32_t idx) const;

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return add_[a * order_ + b]; }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add_[a * order_ + neg_[b]]; }
    std::uint32_t neg(std::uint32_t a) const { return neg_[a]; }
    std::uint32_t zero() const { return 0; }

    bool in_level(std::uint32_t idx, int level) const {
        if (level <= 1) return true;
        if (level > degree_) return idx == 0;
        return level_mask_[level][idx];
    }
    // Elements of Z_(i), ascending by index.
    const std::vector<std::uint32_t>& level_members(int level) const;

    bool is_2homogeneous() const;

    bool operator==(const FilteredGroup& o) const {
        return moduli_ == o.moduli_ && degree_ == o.degree_ && mult_ == o.mult_;
    }
    bool operator!=(const FilteredGroup& o) const { return !(*this == o); }

    std::string describe() const;

private:
    std::vector<std::uint32_t> moduli_;
    int degree_ = 0;
    // Rows 0..degree_+1.
    std::vector<std::vector<std::uint32_t>> mult_;

    std::uint64_t order_ = 1;
    std::vector<std::uint32_t> add_;
    std::vector<std::uint32_t> neg_;
    std::vector<std::vector<bool>> level_mask_;        // per level 0..degree+1
    std::vector<std::vector<std::uint32_t>> level_elems_;
    std::vector<std::uint32_t> trivial_level_;         // {0}, for levels past degree

    void build_caches();
};

GroupPtr make_group(std::vector<std::uint32_t> moduli, int degree,
                    std::vector<std::vector<std::uint32_t>> multipliers);

// The basic 2-homogeneous block Z_{k,l} (p = 2): cyclic of order 2^(k-l+1),
// full up to level l, then index doubling per level.
GroupPtr make_canonical(int k, int ell);

// Degree-k, finite-width truncation of the universal group: the product
// prod_{l=1..k} Z_{k,l}^{w_l} with the product filtration.
GroupPtr make_h_truncation(int k, const std::vector<int>& widths);

GroupPtr make_trivial_group();

// Z/q with the degree-d filtration of D_d (full through level d, then trivial).
GroupPtr make_d1(std::uint32_t q, int deg = 1);

GroupPtr product(const GroupPtr& a, const GroupPtr& b);

// Z / Z_(j) with the induced filtration; degree j-1.
GroupPtr quotient_by_level(const GroupPtr& z, int j);

}  // namespace cubelab
