#include "cubelab/poly.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace cubelab {

namespace {

std::uint32_t val2(std::uint32_t x, int cap) {
    if (x == 0) return cap;
    return std::countr_zero(x);
}

}  // namespace

bool NonClassicalPoly::zero() const {
    return std::all_of(table.begin(), table.end(), [](std::uint32_t t) { return t == 0; });
}

NonClassicalPoly poly_from_table(int n, int D, std::vector<std::uint32_t> table) {
    if (n < 0 || D < 0 || D > 20) throw std::invalid_argument("poly: bad arity or denominator");
    if (table.size() != (1u << n)) throw std::invalid_argument("poly: table size mismatch");
    for (auto& t : table) t &= (1u << D) - 1;
    return NonClassicalPoly{n, D, std::move(table)};
}

NonClassicalPoly derivative(const NonClassicalPoly& p, std::uint32_t h) {
    NonClassicalPoly d{p.n, p.D, std::vector<std::uint32_t>(p.table.size())};
    const std::uint32_t mod = p.modulus();
    for (std::uint32_t x = 0; x < p.table.size(); ++x)
        d.table[x] = (p.table[x ^ h] + mod - p.table[x]) % mod;
    return d;
}

NonClassicalPoly normalized(const NonClassicalPoly& p) {
    NonClassicalPoly q = p;
    const std::uint32_t mod = p.modulus();
    const std::uint32_t c = p.table[0];
    for (auto& t : q.table) t = (t + mod - c) % mod;
    return q;
}

namespace {

int degree_rec(const NonClassicalPoly& p) {
    if (p.zero()) return -1;
    int best = -1;
    for (int i = 0; i < p.n; ++i)
        best = std::max(best, degree_rec(derivative(p, 1u << i)));
    return 1 + best;
}

}  // namespace

int degree_of(const NonClassicalPoly& p) {
    return std::max(0, degree_rec(p));
}

int degree_of_all_directions(const NonClassicalPoly& p) {
    // least d such that every (d+1)-tuple of directions annihilates P
    std::vector<NonClassicalPoly> layer{p};
    int d = 0;
    while (true) {
        bool all_zero = std::all_of(layer.begin(), layer.end(),
                                    [](const NonClassicalPoly& q) { return q.zero(); });
        if (all_zero) return std::max(0, d - 1);
        std::vector<NonClassicalPoly> next;
        for (const auto& q : layer)
            for (std::uint32_t h = 0; h < (1u << p.n); ++h) next.push_back(derivative(q, h));
        layer = std::move(next);
        ++d;
        if (d > p.n + p.D + 2) throw std::logic_error("degree oracle runaway");
    }
}

int denominator_level(const NonClassicalPoly& p) {
    int minval = p.D;
    for (auto t : p.table) minval = std::min<int>(minval, val2(t, p.D));
    return p.D - minval;
}

std::vector<std::uint32_t> poly_coeffs(const NonClassicalPoly& p) {
    const std::uint32_t mod = p.modulus();
    std::vector<std::uint32_t> w(p.table.size());
    for (std::uint32_t s = 0; s < w.size(); ++s) {
        std::uint64_t acc = 0;
        int bits_s = std::popcount(s);
        std::uint32_t t = s;
        while (true) {
            if ((bits_s - std::popcount(t)) & 1)
                acc += mod - p.table[t];
            else
                acc += p.table[t];
            if (t == 0) break;
            t = (t - 1) & s;
        }
        w[s] = acc % mod;
    }
    return w;
}

NonClassicalPoly poly_from_coeffs(int n, int D, const std::vector<std::uint32_t>& coeffs) {
    if (coeffs.size() != (1u << n)) throw std::invalid_argument("poly: coeff size mismatch");
    const std::uint32_t mod = 1u << D;
    NonClassicalPoly p{n, D, std::vector<std::uint32_t>(coeffs.size(), 0)};
    for (std::uint32_t v = 0; v < coeffs.size(); ++v) {
        std::uint64_t acc = 0;
        std::uint32_t s = v;
        while (true) {
            acc += coeffs[s] % mod;
            if (s == 0) break;
            s = (s - 1) & v;
        }
        p.table[v] = acc % mod;
    }
    return p;
}

bool is_morphism_into(const NonClassicalPoly& p, const GroupPtr& z) {
    if (z->coords() != 1) throw std::invalid_argument("is_morphism_into: single-factor target");
    std::uint32_t q = z->moduli()[0];
    if ((q & (q - 1)) != 0 || q > p.modulus() || p.modulus() % q != 0)
        throw std::invalid_argument("is_morphism_into: incompatible denominators");
    const std::uint32_t scale = p.modulus() / q;  // Z embeds as scale*Z_{2^D}
    auto w = poly_coeffs(p);
    for (std::uint32_t s = 0; s < w.size(); ++s) {
        std::uint64_t required = static_cast<std::uint64_t>(scale) *
                                 z->multiplier(std::popcount(s), 0);
        if (w[s] % required != 0) return false;
    }
    return true;
}

int DepthConvention::depth_of(const NonClassicalPoly& p) const {
    return std::max(0, denominator_level(p) - rho);
}

std::optional<int> DepthConvention::ell_for(int k, int r) const {
    auto it = ell.find({k, r});
    if (it == ell.end()) return std::nullopt;
    return it->second;
}

std::vector<NonClassicalPoly> enumerate_polys(int n, int D, int max_deg, int max_level) {
    std::vector<NonClassicalPoly> out;
    const std::uint64_t mod = 1u << D;
    const std::uint32_t sz = 1u << n;
    std::vector<std::uint32_t> table(sz, 0);
    // table[0] is pinned to 0
    std::uint64_t count = 1;
    for (std::uint32_t i = 1; i < sz; ++i) count *= mod;
    for (std::uint64_t code = 0; code < count; ++code) {
        std::uint64_t c = code;
        for (std::uint32_t i = 1; i < sz; ++i) {
            table[i] = c % mod;
            c /= mod;
        }
        NonClassicalPoly p{n, D, table};
        if (denominator_level(p) > max_level) continue;
        if (degree_of(p) > max_deg && !p.zero()) continue;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<NonClassicalPoly> enumerate_morphism_tables(int n, int D, const GroupPtr& z) {
    if (z->coords() != 1) throw std::invalid_argument("single-factor target expected");
    std::uint32_t q = z->moduli()[0];
    if ((1u << D) % q != 0) throw std::invalid_argument("incompatible denominators");
    const std::uint32_t scale = (1u << D) / q;
    const std::uint32_t sz = 1u << n;
    // odometer over coefficient slots; slot S ranges over scale * Z_(|S|),
    // the empty slot pinned to 0 (P(0) = 0 <=> w_empty = 0)
    std::vector<std::vector<std::uint32_t>> choices(sz);
    choices[0] = {0};
    for (std::uint32_t s = 1; s < sz; ++s) {
        std::uint32_t c = z->multiplier(std::popcount(s), 0);
        for (std::uint32_t x = 0; x < q / c; ++x) choices[s].push_back(scale * c * x);
    }
    std::vector<NonClassicalPoly> out;
    std::vector<std::size_t> pos(sz, 0);
    std::vector<std::uint32_t> w(sz, 0);
    while (true) {
        for (std::uint32_t s = 0; s < sz; ++s) w[s] = choices[s][pos[s]];
        out.push_back(poly_from_coeffs(n, D, w));
        std::uint32_t s = 0;
        for (; s < sz; ++s) {
            if (++pos[s] < choices[s].size()) break;
            pos[s] = 0;
        }
        if (s == sz) break;
    }
    return out;
}

DepthConvention calibrate_depth_convention(int kmax, int nmax) {
    // For each candidate offset rho (depth r <=> image in (1/2^(r+rho))Z/Z),
    // demand a total pairing (k, r) -> ell with polynomial class = hom class,
    // exhaustively over all n <= nmax. No consistent offset is a hard error.
    for (int rho = 1; rho >= 0; --rho) {
        DepthConvention conv;
        conv.rho = rho;
        bool ok = true;
        for (int k = 1; k <= kmax && ok; ++k) {
            const int D = k;  // largest target is Z_{k,1}, order 2^k
            for (int r = 0;; ++r) {
                int j = r + rho;
                if (j > D) break;
                // match against each candidate target
                std::optional<int> found;
                for (int ell = 1; ell <= k; ++ell) {
                    bool match = true;
                    for (int n = 1; n <= nmax && match; ++n) {
                        auto polys = enumerate_polys(n, D, k, j);
                        auto homs = enumerate_morphism_tables(n, D, make_canonical(k, ell));
                        auto key = [](std::vector<NonClassicalPoly> v) {
                            std::vector<std::vector<std::uint32_t>> t;
                            for (auto& p : v) t.push_back(p.table);
                            std::sort(t.begin(), t.end());
                            return t;
                        };
                        match = key(std::move(polys)) == key(std::move(homs));
                    }
                    if (match) {
                        found = ell;
                        break;
                    }
                }
                if (!found) {
                    // only polynomial classes that are genuinely achievable
                    // must pair up; an empty or duplicate class ends the scan
                    bool class_new = true;
                    auto polys = enumerate_polys(1, D, k, j);
                    if (j > 0) {
                        auto prev = enumerate_polys(1, D, k, j - 1);
                        class_new = polys.size() != prev.size();
                    }
                    if (class_new) ok = false;
                    break;
                }
                conv.ell[{k, r}] = *found;
            }
        }
        if (ok && !conv.ell.empty()) return conv;
    }
    throw std::runtime_error(
        "calibrate_depth_convention: no consistent depth convention found");
}

}  // namespace cubelab
