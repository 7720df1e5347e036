#include "cubelab/group.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cubelab {

namespace {

bool is_prime_power(std::uint32_t q) {
    if (q < 2) return false;
    std::uint32_t p = 2;
    while (p * p <= q && q % p != 0) ++p;
    if (p * p > q) return true;  // q prime
    while (q % p == 0) q /= p;
    return q == 1;
}

}  // namespace

FilteredGroup::FilteredGroup(std::vector<std::uint32_t> moduli, int degree,
                             std::vector<std::vector<std::uint32_t>> multipliers)
    : moduli_(std::move(moduli)), degree_(degree), mult_(std::move(multipliers)) {
    if (degree_ < 0) throw std::invalid_argument("degree must be >= 0");
    for (auto q : moduli_)
        if (!is_prime_power(q)) throw std::invalid_argument("modulus must be a prime power");
    if (mult_.size() != static_cast<std::size_t>(degree_) + 2)
        throw std::invalid_argument("multiplier matrix must have degree+2 rows");
    const std::size_t m = moduli_.size();
    for (auto& row : mult_)
        if (row.size() != m) throw std::invalid_argument("multiplier row width mismatch");
    for (std::size_t j = 0; j < m; ++j) {
        if (mult_[0][j] != 1 || mult_[1][j] != 1)
            throw std::invalid_argument("Z_(0) and Z_(1) must be the full group");
        for (int i = 0; i <= degree_ + 1; ++i) {
            if (mult_[i][j] == 0 || moduli_[j] % mult_[i][j] != 0)
                throw std::invalid_argument("level multiplier must divide the modulus");
            if (i > 0 && mult_[i][j] % mult_[i - 1][j] != 0)
                throw std::invalid_argument("filtration must be non-increasing");
        }
        if (mult_[degree_ + 1][j] != moduli_[j])
            throw std::invalid_argument("Z_(degree+1) must be trivial");
    }
    build_caches();
}

void FilteredGroup::build_caches() {
    order_ = 1;
    for (auto q : moduli_) order_ *= q;
    if (order_ > (1u << 20))
        throw std::invalid_argument("group too large for dense tables");

    const std::size_t m = moduli_.size();
    const std::uint32_t n = static_cast<std::uint32_t>(order_);

    neg_.resize(n);
    add_.resize(static_cast<std::size_t>(n) * n);
    // Mixed-radix walk; coordinate 0 is the fastest digit.
    std::vector<std::uint32_t> ea(m, 0);
    for (std::uint32_t a = 0; a < n; ++a) {
        std::vector<std::uint32_t> eneg(m);
        for (std::size_t j = 0; j < m; ++j) eneg[j] = (moduli_[j] - ea[j]) % moduli_[j];
        neg_[a] = index_of(eneg);
        std::vector<std::uint32_t> eb(m, 0);
        for (std::uint32_t b = 0; b < n; ++b) {
            std::uint32_t idx = 0, stride = 1;
            for (std::size_t j = 0; j < m; ++j) {
                idx += ((ea[j] + eb[j]) % moduli_[j]) * stride;
                stride *= moduli_[j];
            }
            add_[static_cast<std::size_t>(a) * n + b] = idx;
            for (std::size_t j = 0; j < m; ++j) {
                if (++eb[j] < moduli_[j]) break;
                eb[j] = 0;
            }
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (++ea[j] < moduli_[j]) break;
            ea[j] = 0;
        }
    }

    level_mask_.assign(degree_ + 2, std::vector<bool>(n, false));
    level_elems_.assign(degree_ + 2, {});
    for (int i = 0; i <= degree_ + 1; ++i) {
        for (std::uint32_t a = 0; a < n; ++a) {
            GroupElement e = element_at(a);
            bool in = true;
            for (std::size_t j = 0; j < m && in; ++j) in = (e[j] % mult_[i][j] == 0);
            level_mask_[i][a] = in;
            if (in) level_elems_[i].push_back(a);
        }
    }
    trivial_level_ = {0};
}

std::uint32_t FilteredGroup::multiplier(int level, std::size_t j) const {
    if (level < 0) throw std::out_of_range("level");
    if (level > degree_ + 1) return moduli_[j];
    return mult_[level][j];
}

std::uint64_t FilteredGroup::level_order(int level) const {
    if (level > degree_) return 1;
    std::uint64_t r = 1;
    for (std::size_t j = 0; j < moduli_.size(); ++j) r *= moduli_[j] / mult_[level][j];
    return r;
}

std::uint32_t FilteredGroup::index_of(const GroupElement& e) const {
    if (e.size() != moduli_.size()) throw std::invalid_argument("element width mismatch");
    std::uint32_t idx = 0, stride = 1;
    for (std::size_t j = 0; j < moduli_.size(); ++j) {
        idx += (e[j] % moduli_[j]) * stride;
        stride *= moduli_[j];
    }
    return idx;
}

GroupElement FilteredGroup::element_at(std::uint32_t idx) const {
    GroupElement e(moduli_.size());
    for (std::size_t j = 0; j < moduli_.size(); ++j) {
        e[j] = idx % moduli_[j];
        idx /= moduli_[j];
    }
    return e;
}

const std::vector<std::uint32_t>& FilteredGroup::level_members(int level) const {
    if (level < 0) throw std::out_of_range("level");
    if (level > degree_ + 1) return trivial_level_;
    return level_elems_[level];
}

bool FilteredGroup::is_2homogeneous() const {
    // 2g in Z_(i+1) for every g in Z_(i): per coordinate, c[i+1][j] divides
    // 2*c[i][j], or doubling already annihilates the level generator.
    for (int i = 0; i <= degree_; ++i) {
        for (std::size_t j = 0; j < moduli_.size(); ++j) {
            std::uint64_t doubled = 2ull * mult_[i][j];
            std::uint32_t next = multiplier(i + 1, j);
            if (doubled % moduli_[j] == 0) continue;
            if (doubled % next != 0) return false;
        }
    }
    return true;
}

std::string FilteredGroup::describe() const {
    std::ostringstream os;
    os << "Z(";
    for (std::size_t j = 0; j < moduli_.size(); ++j) os << (j ? "x" : "") << moduli_[j];
    os << ") deg " << degree_;
    return os.str();
}

namespace {

// Drop size-1 coordinates and trailing trivial filtration levels.
GroupPtr normalized(std::vector<std::uint32_t> moduli, int degree,
                    std::vector<std::vector<std::uint32_t>> mult) {
    std::vector<std::uint32_t> nm;
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < moduli.size(); ++j)
        if (moduli[j] > 1) {
            nm.push_back(moduli[j]);
            keep.push_back(j);
        }
    // least d with Z_(d+1) trivial
    int d = degree;
    auto level_trivial = [&](int i) {
        for (std::size_t j : keep)
            if (mult[i][j] != moduli[j]) return false;
        return true;
    };
    while (d > 0 && level_trivial(d)) --d;
    std::vector<std::vector<std::uint32_t>> nmult(d + 2);
    for (int i = 0; i <= d + 1; ++i) {
        for (std::size_t j : keep)
            nmult[i].push_back(i <= degree + 1 ? mult[i][j] : moduli[j]);
        if (i == d + 1)
            for (std::size_t t = 0; t < keep.size(); ++t) nmult[i][t] = nm[t];
    }
    return std::make_shared<FilteredGroup>(std::move(nm), d, std::move(nmult));
}

}  // namespace

GroupPtr make_group(std::vector<std::uint32_t> moduli, int degree,
                    std::vector<std::vector<std::uint32_t>> multipliers) {
    return std::make_shared<FilteredGroup>(std::move(moduli), degree, std::move(multipliers));
}

GroupPtr make_canonical(int k, int ell) {
    if (ell < 1 || ell > k) throw std::invalid_argument("make_canonical: need 1 <= ell <= k");
    std::uint32_t q = 1u << (k - ell + 1);
    std::vector<std::vector<std::uint32_t>> mult(k + 2, {1});
    for (int i = ell + 1; i <= k + 1; ++i)
        mult[i][0] = std::min<std::uint64_t>(q, 1ull << (i - ell));
    return make_group({q}, k, std::move(mult));
}

GroupPtr make_h_truncation(int k, const std::vector<int>& widths) {
    if (k < 1) throw std::invalid_argument("make_h_truncation: k >= 1");
    if (widths.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("make_h_truncation: need one width per ell in [1..k]");
    GroupPtr acc = make_trivial_group();
    for (int ell = 1; ell <= k; ++ell) {
        if (widths[ell - 1] < 0) throw std::invalid_argument("width must be >= 0");
        for (int t = 0; t < widths[ell - 1]; ++t) acc = product(acc, make_canonical(k, ell));
    }
    return acc;
}

GroupPtr make_trivial_group() {
    return make_group({}, 0, {{}, {}});
}

GroupPtr make_d1(std::uint32_t q, int deg) {
    if (deg < 1) throw std::invalid_argument("make_d1: degree >= 1");
    std::vector<std::vector<std::uint32_t>> mult(deg + 2, {1});
    mult[deg + 1][0] = q;
    return make_group({q}, deg, std::move(mult));
}

GroupPtr product(const GroupPtr& a, const GroupPtr& b) {
    std::vector<std::uint32_t> moduli = a->moduli();
    moduli.insert(moduli.end(), b->moduli().begin(), b->moduli().end());
    int d = std::max(a->degree(), b->degree());
    std::vector<std::vector<std::uint32_t>> mult(d + 2);
    for (int i = 0; i <= d + 1; ++i) {
        for (std::size_t j = 0; j < a->coords(); ++j)
            mult[i].push_back(i == d + 1 ? a->moduli()[j] : a->multiplier(i, j));
        for (std::size_t j = 0; j < b->coords(); ++j)
            mult[i].push_back(i == d + 1 ? b->moduli()[j] : b->multiplier(i, j));
    }
    return normalized(std::move(moduli), d, std::move(mult));
}

GroupPtr quotient_by_level(const GroupPtr& z, int j) {
    if (j < 1 || j > z->degree() + 1) throw std::invalid_argument("quotient_by_level: bad level");
    std::vector<std::uint32_t> moduli(z->coords());
    for (std::size_t t = 0; t < z->coords(); ++t) moduli[t] = z->multiplier(j, t);
    int d = j - 1;
    std::vector<std::vector<std::uint32_t>> mult(d + 2);
    for (int i = 0; i <= d + 1; ++i)
        for (std::size_t t = 0; t < z->coords(); ++t)
            mult[i].push_back(std::min(z->multiplier(i, t), moduli[t]));
    return normalized(std::move(moduli), d, std::move(mult));
}

}  // namespace cubelab
