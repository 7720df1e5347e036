#include "cubelab/consistency.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace cubelab {

namespace {

std::uint32_t prime_of(std::uint32_t q) {
    std::uint32_t p = 2;
    while (q % p != 0) ++p;
    return p;
}

std::uint32_t exponent_of(std::uint32_t q, std::uint32_t p) {
    std::uint32_t e = 0;
    while (q > 1) {
        q /= p;
        ++e;
    }
    return e;
}

std::uint32_t val_p(std::uint64_t x, std::uint32_t p, std::uint32_t cap) {
    if (x == 0) return cap;
    std::uint32_t v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

std::uint64_t pow_u64(std::uint64_t b, std::uint32_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// Inverse of a unit mod p^E.
std::uint64_t unit_inverse(std::uint64_t u, std::uint64_t mod) {
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(mod), newr = static_cast<std::int64_t>(u % mod);
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::swap(t = t - q * newt, newt);
        std::swap(r = r - q * newr, newr);
    }
    if (r != 1) throw std::logic_error("unit_inverse: not a unit");
    return static_cast<std::uint64_t>((t % static_cast<std::int64_t>(mod) + mod) %
                                      static_cast<std::int64_t>(mod));
}

}  // namespace

ConsistencySubgroup::ConsistencySubgroup(GroupPtr target, LinearFormSystem forms)
    : target_(std::move(target)), forms_(std::move(forms)) {
    forms_.validate();
    if (!target_->is_2homogeneous())
        throw std::invalid_argument("consistency subgroup: target must be 2-homogeneous");
    const std::size_t m = forms_.forms.size();
    const std::size_t zc = target_->coords();

    if (zc > 0) {
        prime_ = prime_of(target_->moduli()[0]);
        for (auto q : target_->moduli())
            if (prime_of(q) != prime_)
                throw std::invalid_argument("consistency subgroup: mixed primes unsupported");
    }
    pos_exp_.resize(m * zc);
    max_exp_ = 0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < zc; ++j) {
            pos_exp_[i * zc + j] = exponent_of(target_->moduli()[j], prime_);
            max_exp_ = std::max(max_exp_, pos_exp_[i * zc + j]);
        }

    // Monomial generators: for S subset of [s-1] and each cyclic component j,
    // the evaluation tuple of v -> c*e_j * prod_{t in S} v_t at the forms.
    const int s1 = forms_.k;
    for (std::uint32_t s = 0; s < (1u << s1); ++s) {
        int level = std::popcount(s);
        for (std::size_t j = 0; j < zc; ++j) {
            std::uint32_t c = target_->multiplier(level, j);
            if (c == target_->moduli()[j]) continue;  // trivial component at this level
            std::vector<GroupElement> tuple(m, GroupElement(zc, 0));
            for (std::size_t i = 0; i < m; ++i)
                if ((s & forms_.forms[i]) == s) tuple[i][j] = c;
            generators_.push_back(std::move(tuple));
        }
    }

    std::vector<std::vector<std::uint64_t>> cols;
    for (const auto& g : generators_) cols.push_back(lift(g));
    reduce(std::move(cols));
}

std::vector<std::uint64_t> ConsistencySubgroup::lift(
    const std::vector<GroupElement>& tuple) const {
    const std::size_t m = forms_.forms.size();
    const std::size_t zc = target_->coords();
    if (tuple.size() != m) throw std::invalid_argument("consistency: tuple arity mismatch");
    std::vector<std::uint64_t> v(m * zc);
    for (std::size_t i = 0; i < m; ++i) {
        if (tuple[i].size() != zc) throw std::invalid_argument("consistency: element width");
        for (std::size_t j = 0; j < zc; ++j) {
            std::size_t pos = i * zc + j;
            v[pos] = static_cast<std::uint64_t>(tuple[i][j] % target_->moduli()[j]) *
                     pow_u64(prime_, max_exp_ - pos_exp_[pos]);
        }
    }
    return v;
}

void ConsistencySubgroup::reduce(std::vector<std::vector<std::uint64_t>> cols) {
    const std::uint64_t mod = pow_u64(prime_, max_exp_);
    const std::size_t rows = pos_exp_.size();
    if (mod == 1 || rows == 0) return;
    for (std::size_t r = 0; r < rows; ++r) {
        // pick the column with the smallest p-valuation at row r
        std::size_t best = cols.size();
        std::uint32_t bestv = max_exp_;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            std::uint32_t v = val_p(cols[c][r], prime_, max_exp_);
            if (v < bestv) {
                bestv = v;
                best = c;
            }
        }
        if (best == cols.size()) continue;  // row already clear
        std::vector<std::uint64_t> pivot = cols[best];
        cols.erase(cols.begin() + best);
        // scale by the unit so the pivot entry becomes exactly p^v
        std::uint64_t pv = pow_u64(prime_, bestv);
        std::uint64_t unit = (pivot[r] / pv) % mod;
        std::uint64_t inv = unit_inverse(unit, mod);
        for (auto& x : pivot) x = (x * inv) % mod;
        // clear row r in the remaining columns
        for (auto& col : cols) {
            if (col[r] == 0) continue;
            std::uint64_t factor = col[r] / pv;
            for (std::size_t i = 0; i < rows; ++i)
                col[i] = (col[i] + (mod - (pivot[i] * factor) % mod)) % mod;
        }
        // the annihilator multiple of the pivot stays in play for later rows
        if (bestv > 0) {
            std::uint64_t ann = pow_u64(prime_, max_exp_ - bestv);
            std::vector<std::uint64_t> extra(rows);
            for (std::size_t i = 0; i < rows; ++i) extra[i] = (pivot[i] * ann) % mod;
            if (std::any_of(extra.begin(), extra.end(), [](std::uint64_t x) { return x != 0; }))
                cols.push_back(std::move(extra));
        }
        pivots_.push_back({r, bestv, std::move(pivot)});
    }
}

bool ConsistencySubgroup::contains(const std::vector<GroupElement>& tuple) const {
    std::vector<std::uint64_t> v = lift(tuple);
    const std::uint64_t mod = pow_u64(prime_, max_exp_);
    if (mod == 1) return true;
    for (const auto& piv : pivots_) {
        std::uint64_t x = v[piv.row];
        if (x == 0) continue;
        std::uint64_t pv = pow_u64(prime_, piv.valuation);
        if (x % pv != 0) return false;
        std::uint64_t factor = x / pv;
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = (v[i] + (mod - (piv.column[i] * factor) % mod)) % mod;
    }
    return std::all_of(v.begin(), v.end(), [](std::uint64_t x) { return x == 0; });
}

BigInt ConsistencySubgroup::subgroup_order() const {
    // Each pivot at valuation v contributes p^(E_row - v) elements along its row.
    BigInt order = 1;
    for (const auto& piv : pivots_) {
        std::uint32_t e_row = max_exp_;  // rows live in the lifted ring
        (void)e_row;
        BigInt contrib;
        mpz_ui_pow_ui(contrib.get_mpz_t(), prime_, max_exp_ - piv.valuation);
        order *= contrib;
    }
    return order;
}

bool is_consistent(const std::vector<std::uint32_t>& b, const LinearFormSystem& forms, int k,
                   int r, const DepthConvention& conv) {
    auto ell = conv.ell_for(k, r);
    if (!ell) throw std::invalid_argument("is_consistent: (k,r) outside the calibrated table");
    GroupPtr target = make_canonical(k, *ell);
    if (b.size() != forms.forms.size())
        throw std::invalid_argument("is_consistent: tuple arity mismatch");
    std::vector<GroupElement> tuple;
    for (auto x : b) {
        if (x >= target->moduli()[0])
            throw std::invalid_argument("is_consistent: value not representable in the target");
        tuple.push_back({x});
    }
    ConsistencySubgroup sub(target, forms);
    return sub.contains(tuple);
}

}  // namespace cubelab
