#include "cubelab/cubes.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cubelab {

bool CubeCoeffs::well_formed() const {
    if (coeff.size() != (1u << k)) return false;
    for (std::uint32_t s = 0; s < coeff.size(); ++s)
        if (!group->in_level(coeff[s], std::popcount(s))) return false;
    return true;
}

void evaluate_into(const FilteredGroup& g, int k, const std::uint32_t* coeff,
                   std::uint32_t* values) {
    for (std::uint32_t v = 0; v < (1u << k); ++v) {
        std::uint32_t acc = 0;
        // sum over S subset of v
        std::uint32_t s = v;
        while (true) {
            acc = g.add(acc, coeff[s]);
            if (s == 0) break;
            s = (s - 1) & v;
        }
        values[v] = acc;
    }
}

bool is_cube_values(const FilteredGroup& g, int k, const std::uint32_t* values) {
    // coefficient route: Moebius-invert and check levels
    for (std::uint32_t s = 0; s < (1u << k); ++s) {
        int bits_s = std::popcount(s);
        if (bits_s == 0) continue;
        std::uint32_t acc = 0;
        std::uint32_t t = s;
        while (true) {
            if ((bits_s - std::popcount(t)) & 1)
                acc = g.sub(acc, values[t]);
            else
                acc = g.add(acc, values[t]);
            if (t == 0) break;
            t = (t - 1) & s;
        }
        if (!g.in_level(acc, bits_s)) return false;
    }
    return true;
}

CubePoint evaluate(const CubeCoeffs& c) {
    CubePoint q{c.k, c.group, std::vector<std::uint32_t>(1u << c.k, 0)};
    evaluate_into(*c.group, c.k, c.coeff.data(), q.values.data());
    return q;
}

CubeCoeffs coeffs_from_cube(const CubePoint& q) {
    const auto& g = *q.group;
    CubeCoeffs c{q.k, q.group, std::vector<std::uint32_t>(1u << q.k, 0)};
    for (std::uint32_t s = 0; s < c.coeff.size(); ++s) {
        // z_S = sum_{T subset S} (-1)^{|S\T|} q(1_T), computed with genuine
        // subtraction so odd-order groups work.
        std::uint32_t acc = 0;
        std::uint32_t t = s;
        int bits_s = std::popcount(s);
        while (true) {
            std::uint32_t term = q.values[t];
            if ((bits_s - std::popcount(t)) & 1)
                acc = g.sub(acc, term);
            else
                acc = g.add(acc, term);
            if (t == 0) break;
            t = (t - 1) & s;
        }
        c.coeff[s] = acc;
    }
    return c;
}

bool is_cube(const CubePoint& q) {
    const auto& g = *q.group;
    const std::uint32_t n = 1u << q.k;
    // Faces: free set S, fixed bits z on the complement. sigma over the face
    // must land in Z_(|S|).
    for (std::uint32_t s = 0; s < n; ++s) {
        int dim = std::popcount(s);
        if (dim == 0) continue;  // Z_(0) = Z, nothing to check
        std::uint32_t comp = ~s & (n - 1);
        for (std::uint32_t z = comp;; z = (z - 1) & comp) {
            std::uint32_t acc = 0;
            std::uint32_t t = s;
            while (true) {
                if (std::popcount(t) & 1)
                    acc = g.sub(acc, q.values[z | t]);
                else
                    acc = g.add(acc, q.values[z | t]);
                if (t == 0) break;
                t = (t - 1) & s;
            }
            if (!g.in_level(acc, dim)) return false;
            if (z == 0) break;
        }
    }
    return true;
}

bool is_cube_coeff_route(const CubePoint& q) {
    return coeffs_from_cube(q).well_formed();
}

std::uint32_t apply_morphism_vertex(const CubeMorphism& phi, std::uint32_t v) {
    std::uint32_t out = 0;
    for (std::size_t j = 0; j < phi.size(); ++j) {
        std::uint32_t bit;
        switch (phi[j].kind) {
            case MorphCoord::Zero: bit = 0; break;
            case MorphCoord::One: bit = 1; break;
            case MorphCoord::Var: bit = (v >> (phi[j].var - 1)) & 1; break;
            default: bit = 1 ^ ((v >> (phi[j].var - 1)) & 1); break;
        }
        out |= bit << j;
    }
    return out;
}

CubePoint restrict_cube(const CubePoint& q, const CubeMorphism& phi, int m) {
    if (phi.size() != static_cast<std::size_t>(q.k))
        throw std::invalid_argument("restrict: morphism must have one entry per target coordinate");
    for (const auto& mc : phi)
        if ((mc.kind == MorphCoord::Var || mc.kind == MorphCoord::NegVar) &&
            (mc.var < 1 || mc.var > m))
            throw std::invalid_argument("restrict: variable index out of range");
    CubePoint r{m, q.group, std::vector<std::uint32_t>(1u << m)};
    for (std::uint32_t v = 0; v < r.values.size(); ++v)
        r.values[v] = q.values[apply_morphism_vertex(phi, v)];
    return r;
}

std::vector<CubeMorphism> enumerate_morphisms_mk(int m, int k, bool injective_only) {
    std::vector<MorphCoord> choices;
    choices.push_back({MorphCoord::Zero, 0});
    choices.push_back({MorphCoord::One, 0});
    for (int i = 1; i <= m; ++i) {
        choices.push_back({MorphCoord::Var, i});
        choices.push_back({MorphCoord::NegVar, i});
    }
    std::vector<CubeMorphism> out;
    CubeMorphism cur(k);
    std::function<void(int)> rec = [&](int j) {
        if (j == k) {
            if (injective_only) {
                std::vector<bool> seen(1u << k, false);
                for (std::uint32_t v = 0; v < (1u << m); ++v) {
                    std::uint32_t w = apply_morphism_vertex(cur, v);
                    if (seen[w]) return;
                    seen[w] = true;
                }
            }
            out.push_back(cur);
            return;
        }
        for (const auto& c : choices) {
            cur[j] = c;
            rec(j + 1);
        }
    };
    rec(0);
    return out;
}

namespace {

// Forced top value from sigma_k(q) = 0 once the rest of the cube is fixed:
// (-1)^k q(1^k) = - sum_{v != 1^k} (-1)^{|v|} q(v).
std::uint32_t forced_top(const FilteredGroup& g, const std::vector<std::uint32_t>& values, int k) {
    std::uint32_t top = (1u << k) - 1;
    std::uint32_t acc = 0;
    for (std::uint32_t v = 0; v < top; ++v) {
        if (std::popcount(v) & 1)
            acc = g.sub(acc, values[v]);
        else
            acc = g.add(acc, values[v]);
    }
    // sign of the top term is (-1)^k
    return (k & 1) ? acc : g.neg(acc);
}

void check_faces_avoiding(const CubePoint& partial, std::uint32_t missing) {
    const auto& g = *partial.group;
    const std::uint32_t n = 1u << partial.k;
    for (std::uint32_t s = 0; s < n; ++s) {
        int dim = std::popcount(s);
        if (dim == 0) continue;
        std::uint32_t comp = ~s & (n - 1);
        for (std::uint32_t z = comp;; z = (z - 1) & comp) {
            // the face {z|t : t subset S} contains the missing vertex iff
            // missing agrees with z outside S
            bool contains_missing = ((missing & comp) == z);
            if (!contains_missing) {
                std::uint32_t acc = 0;
                std::uint32_t t = s;
                while (true) {
                    if (std::popcount(t) & 1)
                        acc = g.sub(acc, partial.values[z | t]);
                    else
                        acc = g.add(acc, partial.values[z | t]);
                    if (t == 0) break;
                    t = (t - 1) & s;
                }
                if (!g.in_level(acc, dim))
                    throw std::invalid_argument("complete_corner: invalid corner (face fails)");
            }
            if (z == 0) break;
        }
    }
}

}  // namespace

CubePoint complete_corner(const CubePoint& partial, std::uint32_t missing) {
    const auto& g = *partial.group;
    const int k = partial.k;
    if (k < g.degree() + 1)
        throw std::invalid_argument(
            "complete_corner: completion not unique below degree+1 (use count_completions)");
    if (missing >= (1u << k)) throw std::invalid_argument("complete_corner: bad vertex");
    check_faces_avoiding(partial, missing);

    // Reflect coordinates so the missing vertex becomes the top one, force the
    // value there, reflect back.
    std::uint32_t flip = ~missing & ((1u << k) - 1);
    std::vector<std::uint32_t> reflected(1u << k);
    for (std::uint32_t v = 0; v < (1u << k); ++v) reflected[v ^ flip] = partial.values[v];
    std::uint32_t val = forced_top(g, reflected, k);

    CubePoint out = partial;
    out.values[missing] = val;
    if (!is_cube(out)) throw std::invalid_argument("complete_corner: invalid corner");
    return out;
}

int count_completions(const CubePoint& partial, std::uint32_t missing) {
    CubePoint probe = partial;
    int count = 0;
    for (std::uint32_t x = 0; x < partial.group->order(); ++x) {
        probe.values[missing] = x;
        if (is_cube(probe)) ++count;
    }
    return count;
}

BigInt cube_count(const GroupPtr& z, int n) {
    if (n < 0) throw std::invalid_argument("cube_count: n >= 0");
    // prod_s |Z_(s)|^C(n,s)
    BigInt total = 1;
    BigInt binom = 1;
    for (int s = 0; s <= n; ++s) {
        BigInt level(static_cast<unsigned long>(z->level_order(s)));
        BigInt pw;
        mpz_pow_ui(pw.get_mpz_t(), level.get_mpz_t(), binom.get_ui());
        total *= pw;
        binom = binom * (n - s) / (s + 1);
    }
    return total;
}

CubeCoeffs sample_cube(const GroupPtr& z, int k, RngStream& rng) {
    CubeCoeffs c{k, z, std::vector<std::uint32_t>(1u << k)};
    for (std::uint32_t s = 0; s < c.coeff.size(); ++s) {
        const auto& members = z->level_members(std::popcount(s));
        c.coeff[s] = members[rng.next_below(members.size())];
    }
    return c;
}

std::uint64_t top_slot_size(const GroupPtr& z, int k) {
    return z->level_members(k).size();
}

void for_each_cube_shard(const GroupPtr& z, int k, std::uint64_t budget, std::uint64_t lo,
                         std::uint64_t hi, const std::function<void(const CubeCoeffs&)>& fn) {
    BigInt total = cube_count(z, k);
    if (total > BigInt(static_cast<unsigned long>(budget)))
        throw BudgetExceeded("for_each_cube", total.fits_ulong_p() ? total.get_ui() : ~0ull,
                             budget);
    const std::uint32_t slots = 1u << k;
    CubeCoeffs c{k, z, std::vector<std::uint32_t>(slots, 0)};
    std::vector<std::size_t> pos(slots, 0);
    std::vector<const std::vector<std::uint32_t>*> members(slots);
    for (std::uint32_t s = 0; s < slots; ++s) {
        members[s] = &z->level_members(std::popcount(s));
        c.coeff[s] = (*members[s])[0];
    }
    const std::uint32_t top = slots - 1;
    for (std::uint64_t t = lo; t < hi; ++t) {
        c.coeff[top] = (*members[top])[t];
        std::fill(pos.begin(), pos.end(), 0);
        for (std::uint32_t s = 0; s < top; ++s) c.coeff[s] = (*members[s])[0];
        while (true) {
            fn(c);
            std::uint32_t s = 0;
            for (; s < top; ++s) {
                if (++pos[s] < members[s]->size()) {
                    c.coeff[s] = (*members[s])[pos[s]];
                    break;
                }
                pos[s] = 0;
                c.coeff[s] = (*members[s])[0];
            }
            if (s == top) break;
        }
    }
}

void for_each_cube(const GroupPtr& z, int k, std::uint64_t budget,
                   const std::function<void(const CubeCoeffs&)>& fn) {
    for_each_cube_shard(z, k, budget, 0, top_slot_size(z, k), fn);
}

std::uint64_t pack_table(const CubePoint& q) {
    if (q.values.size() > 8 || q.group->order() > 256)
        throw std::invalid_argument("pack_table: table too wide to pack");
    std::uint64_t packed = 0;
    for (std::size_t v = 0; v < q.values.size(); ++v)
        packed |= static_cast<std::uint64_t>(q.values[v]) << (8 * v);
    return packed;
}

CubePoint unpack_table(const GroupPtr& z, int k, std::uint64_t packed) {
    CubePoint q{k, z, std::vector<std::uint32_t>(1u << k)};
    for (std::size_t v = 0; v < q.values.size(); ++v)
        q.values[v] = static_cast<std::uint32_t>((packed >> (8 * v)) & 0xff);
    return q;
}

namespace {

std::vector<std::uint64_t> cube_tables_range(const GroupPtr& z, int k, std::uint64_t lo,
                                             std::uint64_t hi) {
    // Enumerate coefficient tuples with the top slot split across workers.
    std::vector<std::uint64_t> out;
    const std::uint32_t slots = 1u << k;
    std::vector<const std::vector<std::uint32_t>*> members(slots);
    for (std::uint32_t s = 0; s < slots; ++s) members[s] = &z->level_members(std::popcount(s));

    CubeCoeffs c{k, z, std::vector<std::uint32_t>(slots, 0)};
    std::vector<std::size_t> pos(slots, 0);
    for (std::uint32_t s = 0; s + 1 < slots; ++s) c.coeff[s] = (*members[s])[0];
    for (std::uint64_t t = lo; t < hi; ++t) {
        c.coeff[slots - 1] = (*members[slots - 1])[t];
        // inner odometer over the remaining slots
        std::fill(pos.begin(), pos.end(), 0);
        for (std::uint32_t s = 0; s + 1 < slots; ++s) c.coeff[s] = (*members[s])[0];
        while (true) {
            CubePoint q = evaluate(c);
            out.push_back(pack_table(q));
            std::uint32_t s = 0;
            for (; s + 1 < slots; ++s) {
                if (++pos[s] < members[s]->size()) {
                    c.coeff[s] = (*members[s])[pos[s]];
                    break;
                }
                pos[s] = 0;
                c.coeff[s] = (*members[s])[0];
            }
            if (s + 1 == slots) break;
        }
    }
    return out;
}

}  // namespace

std::vector<std::uint64_t> cube_table_set(const GroupPtr& z, int k, std::uint64_t budget,
                                          bool parallel) {
    BigInt total = cube_count(z, k);
    if (total > BigInt(static_cast<unsigned long>(budget)))
        throw BudgetExceeded("cube_table_set", total.fits_ulong_p() ? total.get_ui() : ~0ull,
                             budget);
    const std::uint64_t top = z->level_members(k).size();
    std::vector<std::uint64_t> out;
    if (!parallel) {
        out = cube_tables_range(z, k, 0, top);
    } else {
        int nthreads = 1;
#ifdef _OPENMP
        nthreads = omp_get_max_threads();
#endif
        std::vector<std::vector<std::uint64_t>> parts(nthreads);
#pragma omp parallel for schedule(static)
        for (int t = 0; t < nthreads; ++t) {
            std::uint64_t lo = top * t / nthreads;
            std::uint64_t hi = top * (t + 1) / nthreads;
            parts[t] = cube_tables_range(z, k, lo, hi);
        }
        for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// DFS over vertex values in bitmask order; when vertex w gets a value, every
// face whose top vertex is w (free set S subset of w, fixed bits w\S) is
// complete and gets its alternating sum checked.
void membership_dfs(const FilteredGroup& g, int k, std::vector<std::uint32_t>& values,
                    std::uint32_t w, std::vector<std::uint64_t>& out) {
    const std::uint32_t n = 1u << k;
    if (w == n) {
        std::uint64_t packed = 0;
        for (std::uint32_t v = 0; v < n; ++v)
            packed |= static_cast<std::uint64_t>(values[v]) << (8 * v);
        out.push_back(packed);
        return;
    }
    for (std::uint32_t x = 0; x < g.order(); ++x) {
        values[w] = x;
        bool ok = true;
        for (std::uint32_t s = w; ok && s > 0; s = (s - 1) & w) {
            int dim = std::popcount(s);
            std::uint32_t z = w & ~s;
            std::uint32_t acc = 0;
            std::uint32_t t = s;
            while (true) {
                if (std::popcount(t) & 1)
                    acc = g.sub(acc, values[z | t]);
                else
                    acc = g.add(acc, values[z | t]);
                if (t == 0) break;
                t = (t - 1) & s;
            }
            ok = g.in_level(acc, dim);
        }
        if (ok) membership_dfs(g, k, values, w + 1, out);
    }
}

}  // namespace

std::vector<std::uint64_t> cube_table_set_by_membership(const GroupPtr& z, int k, bool parallel) {
    if (z->order() > 256 || k > 3)
        throw std::invalid_argument("cube_table_set_by_membership: out of packing range");
    const auto& g = *z;
    std::vector<std::uint64_t> out;
    if (!parallel || g.order() < 2) {
        std::vector<std::uint32_t> values(1u << k, 0);
        membership_dfs(g, k, values, 0, out);
    } else {
        const int n0 = static_cast<int>(g.order());
        std::vector<std::vector<std::uint64_t>> parts(n0);
#pragma omp parallel for schedule(dynamic)
        for (int x = 0; x < n0; ++x) {
            std::vector<std::uint32_t> values(1u << k, 0);
            values[0] = x;
            membership_dfs(g, k, values, 1, parts[x]);
        }
        for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace cubelab
