#include "cubelab/fib.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <stdexcept>
#include <unordered_set>

namespace cubelab {

void GroupNilspaceMap::validate() const {
    if (!domain || !codomain) throw std::invalid_argument("map: missing group");
    if (table.size() != domain->order()) throw std::invalid_argument("map: table size mismatch");
    for (auto y : table)
        if (y >= codomain->order()) throw std::invalid_argument("map: value out of range");
}

GroupNilspaceMap identity_map(const GroupPtr& z) {
    GroupNilspaceMap m{z, z, {}};
    m.table.resize(z->order());
    for (std::uint32_t x = 0; x < z->order(); ++x) m.table[x] = x;
    return m;
}

GroupNilspaceMap quotient_projection(const GroupPtr& z, int j) {
    GroupPtr q = quotient_by_level(z, j);
    // coordinates kept by the quotient are those with a nontrivial multiplier
    std::vector<std::size_t> kept;
    std::vector<std::uint32_t> newmod;
    for (std::size_t t = 0; t < z->coords(); ++t)
        if (z->multiplier(j, t) > 1) {
            kept.push_back(t);
            newmod.push_back(z->multiplier(j, t));
        }
    GroupNilspaceMap m{z, q, {}};
    m.table.resize(z->order());
    for (std::uint32_t x = 0; x < z->order(); ++x) {
        GroupElement e = z->element_at(x);
        GroupElement qe(kept.size());
        for (std::size_t i = 0; i < kept.size(); ++i) qe[i] = e[kept[i]] % newmod[i];
        m.table[x] = q->index_of(qe);
    }
    return m;
}

GroupNilspaceMap compose(const GroupNilspaceMap& outer, const GroupNilspaceMap& inner) {
    if (*outer.domain != *inner.codomain) throw std::invalid_argument("compose: domain mismatch");
    GroupNilspaceMap m{inner.domain, outer.codomain, {}};
    m.table.resize(inner.table.size());
    for (std::size_t x = 0; x < inner.table.size(); ++x) m.table[x] = outer.table[inner.table[x]];
    return m;
}

namespace {

// One linear condition: sum of sign*phi(point) must land in Y_(level).
struct DiffCondition {
    std::vector<std::pair<std::uint32_t, bool>> terms;  // (point, negate)
    int level;
    std::uint32_t max_point;
};

// Iterated-difference conditions over multisets of nonzero steps with level
// budget capped at deg(codomain)+1. Steps are (level, element) pairs taken
// non-increasing to cut symmetric duplicates.
std::vector<DiffCondition> build_conditions(const FilteredGroup& x, int level_cap) {
    std::vector<DiffCondition> out;
    std::vector<std::pair<int, std::uint32_t>> steps;

    auto emit = [&]() {
        const int s = static_cast<int>(steps.size());
        int total = 0;
        for (auto& [lv, h] : steps) total += lv;
        for (std::uint32_t base = 0; base < x.order(); ++base) {
            DiffCondition cond;
            cond.level = total;
            cond.max_point = 0;
            for (std::uint32_t t = 0; t < (1u << s); ++t) {
                std::uint32_t pt = base;
                for (int j = 0; j < s; ++j)
                    if ((t >> j) & 1) pt = x.add(pt, steps[j].second);
                bool negate = ((s - std::popcount(t)) & 1) != 0;
                cond.terms.push_back({pt, negate});
                cond.max_point = std::max(cond.max_point, pt);
            }
            out.push_back(std::move(cond));
        }
    };

    // choose multisets of steps, levels non-increasing, elements non-decreasing
    // within a level
    std::function<void(int, std::uint32_t, int)> rec = [&](int max_level, std::uint32_t min_elem,
                                                           int remaining) {
        if (!steps.empty()) emit();
        if (remaining <= 0) return;
        for (int lv = std::min(max_level, remaining); lv >= 1; --lv) {
            const auto& members = x.level_members(lv);
            for (auto h : members) {
                if (h == 0) continue;
                if (!steps.empty() && steps.back().first == lv && h < min_elem) continue;
                steps.push_back({lv, h});
                rec(lv, h, remaining - lv);
                steps.pop_back();
            }
        }
    };
    rec(level_cap, 0, level_cap);
    return out;
}

bool condition_holds(const FilteredGroup& y, const std::vector<std::uint32_t>& table,
                     const DiffCondition& c) {
    std::uint32_t acc = 0;
    for (const auto& [pt, neg] : c.terms)
        acc = neg ? y.sub(acc, table[pt]) : y.add(acc, table[pt]);
    return y.in_level(acc, c.level);
}

}  // namespace

bool is_morphism_differences(const GroupNilspaceMap& phi) {
    phi.validate();
    auto conds = build_conditions(*phi.domain, phi.codomain->degree() + 1);
    for (const auto& c : conds)
        if (!condition_holds(*phi.codomain, phi.table, c)) return false;
    return true;
}

MorphismCheck is_morphism(const GroupNilspaceMap& phi, int nmax, std::uint64_t budget) {
    phi.validate();
    if (nmax < 0) nmax = std::max(phi.domain->degree(), phi.codomain->degree()) + 1;
    MorphismCheck res;
    for (int n = 1; n <= nmax; ++n) {
        BigInt cubes = cube_count(phi.domain, n);
        if (cubes > BigInt(static_cast<unsigned long>(budget))) {
            res.used_difference_route = true;
            continue;
        }
        bool ok = true;
        std::vector<std::uint32_t> q(1u << n), img(1u << n);
        for_each_cube(phi.domain, n, budget, [&](const CubeCoeffs& c) {
            if (!ok) return;
            evaluate_into(*phi.domain, n, c.coeff.data(), q.data());
            for (std::size_t v = 0; v < q.size(); ++v) img[v] = phi.table[q[v]];
            if (!is_cube_values(*phi.codomain, n, img.data())) ok = false;
        });
        res.cube_checked_dims.push_back(n);
        if (!ok) {
            res.ok = false;
            return res;
        }
    }
    if (res.used_difference_route && !is_morphism_differences(phi)) res.ok = false;
    return res;
}

namespace {

std::uint64_t pack_wide(const std::vector<std::uint32_t>& vals, std::uint64_t order) {
    // <= 16 vertices at <= 16 values, or <= 8 vertices at <= 256 values
    std::uint64_t packed = 0;
    if (order <= 16 && vals.size() <= 16) {
        for (std::size_t i = 0; i < vals.size(); ++i)
            packed |= static_cast<std::uint64_t>(vals[i]) << (4 * i);
    } else if (order <= 256 && vals.size() <= 8) {
        for (std::size_t i = 0; i < vals.size(); ++i)
            packed |= static_cast<std::uint64_t>(vals[i]) << (8 * i);
    } else {
        throw std::invalid_argument("cube image too wide to pack");
    }
    return packed;
}

}  // namespace

bool is_cube_surjective(const GroupNilspaceMap& phi, int nmax, std::uint64_t budget) {
    phi.validate();
    for (int n = 0; n <= nmax; ++n) {
        BigInt want = cube_count(phi.codomain, n);
        std::unordered_set<std::uint64_t> image;
        std::vector<std::uint32_t> q(1u << n), img(1u << n);
        for_each_cube(phi.domain, n, budget, [&](const CubeCoeffs& c) {
            evaluate_into(*phi.domain, n, c.coeff.data(), q.data());
            for (std::size_t v = 0; v < img.size(); ++v) img[v] = phi.table[q[v]];
            image.insert(pack_wide(img, phi.codomain->order()));
        });
        if (BigInt(static_cast<unsigned long>(image.size())) != want) return false;
    }
    return true;
}

bool is_fibration(const GroupNilspaceMap& phi, int nmax) {
    phi.validate();
    const auto& x = *phi.domain;
    const auto& y = *phi.codomain;
    if (nmax < 0) nmax = std::max(x.degree(), y.degree()) + 1;
    // n = 0: surjectivity
    std::vector<bool> hit(y.order(), false);
    for (auto v : phi.table) hit[v] = true;
    if (!std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) return false;
    // n >= 1: phi(x0 + X_(n)) must cover phi(x0) + Y_(n)
    for (int n = 1; n <= nmax; ++n) {
        const auto& xlev = x.level_members(std::min(n, x.degree() + 1));
        const auto& ylev = y.level_members(std::min(n, y.degree() + 1));
        for (std::uint32_t x0 = 0; x0 < x.order(); ++x0) {
            std::vector<bool> seen(y.order(), false);
            for (auto z : xlev) seen[phi.table[x.add(x0, z)]] = true;
            std::uint32_t fx = phi.table[x0];
            for (auto w : ylev)
                if (!seen[y.add(fx, w)]) return false;
        }
    }
    return true;
}

bool is_fibration_corner_route(const GroupNilspaceMap& phi, int nmax, std::uint64_t budget) {
    phi.validate();
    const auto& x = *phi.domain;
    const auto& y = *phi.codomain;
    // n = 0
    std::vector<bool> hit(y.order(), false);
    for (auto v : phi.table) hit[v] = true;
    if (!std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) return false;

    for (int n = 1; n <= nmax; ++n) {
        // one canonical completion per corner: cubes with top coefficient 0
        BigInt corners = cube_count(phi.domain, n) / BigInt(static_cast<unsigned long>(
                             x.level_order(std::min(n, x.degree() + 1))));
        if (corners * BigInt(static_cast<unsigned long>(y.level_order(std::min(n, y.degree() + 1)))) >
            BigInt(static_cast<unsigned long>(budget)))
            throw BudgetExceeded("is_fibration_corner_route", ~0ull, budget);
        const std::uint32_t top = (1u << n) - 1;
        bool ok = true;
        for_each_cube(phi.domain, n, budget, [&](const CubeCoeffs& c) {
            if (!ok || c.coeff[top] != 0) return;  // canonical corner representative
            CubePoint q = evaluate(c);
            std::uint32_t x_top = q.values[top];
            // downstairs completions of the projected corner
            std::uint32_t y_base = phi.table[x_top];
            for (auto w : y.level_members(std::min(n, y.degree() + 1))) {
                std::uint32_t target = y.add(y_base, w);
                bool lifted = false;
                for (auto z : x.level_members(std::min(n, x.degree() + 1)))
                    if (phi.table[x.add(x_top, z)] == target) {
                        lifted = true;
                        break;
                    }
                if (!lifted) {
                    ok = false;
                    return;
                }
            }
        });
        if (!ok) return false;
    }
    return true;
}

std::vector<GroupNilspaceMap> enumerate_group_morphisms(const GroupPtr& domain,
                                                        const GroupPtr& codomain,
                                                        std::uint64_t budget) {
    const auto& x = *domain;
    const auto& y = *codomain;
    auto conds = build_conditions(x, y.degree() + 1);
    // bucket conditions by the last table slot they touch
    std::vector<std::vector<const DiffCondition*>> by_max(x.order());
    for (const auto& c : conds) by_max[c.max_point].push_back(&c);

    std::vector<std::vector<std::uint32_t>> candidates;
    std::vector<std::uint32_t> table(x.order(), 0);
    std::function<void(std::uint32_t)> dfs = [&](std::uint32_t pos) {
        if (pos == x.order()) {
            candidates.push_back(table);
            return;
        }
        for (std::uint32_t v = 0; v < y.order(); ++v) {
            table[pos] = v;
            bool ok = true;
            for (const auto* c : by_max[pos])
                if (!condition_holds(y, table, *c)) {
                    ok = false;
                    break;
                }
            if (ok) dfs(pos + 1);
        }
    };
    dfs(0);

    // candidates satisfy every difference condition; confirm each against the
    // cube-composition definition
    std::vector<char> confirmed(candidates.size(), 0);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        GroupNilspaceMap phi{domain, codomain, candidates[i]};
        confirmed[i] = is_morphism(phi, -1, budget).ok ? 1 : 0;
    }
    std::vector<GroupNilspaceMap> out;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (confirmed[i]) out.push_back(GroupNilspaceMap{domain, codomain, candidates[i]});
    return out;
}

std::optional<HFibration> search_h_fibration(const GroupPtr& z, std::uint64_t budget) {
    // Decompose z into canonical columns (k_j, l_j); the truncation at
    // k = max k_j quotients factor-wise onto z.
    const std::size_t m = z->coords();
    std::vector<int> kj(m), lj(m);
    for (std::size_t j = 0; j < m; ++j) {
        std::uint32_t q = z->moduli()[j];
        if ((q & (q - 1)) != 0) return std::nullopt;  // not a 2-group
        int ell = 0;
        for (int i = 0; i <= z->degree() + 1; ++i)
            if (z->multiplier(i, j) == 1) ell = i;
        int e = std::countr_zero(q);
        int k = ell + e - 1;
        // confirm the column really is the canonical one
        for (int i = 0; i <= z->degree() + 1; ++i) {
            std::uint64_t expect = i <= ell ? 1 : std::min<std::uint64_t>(q, 1ull << (i - ell));
            if (z->multiplier(i, j) != expect) return std::nullopt;
        }
        kj[j] = k;
        lj[j] = ell;
    }
    int k = 1;
    for (std::size_t j = 0; j < m; ++j) k = std::max(k, kj[j]);
    std::vector<int> widths(k, 0);
    for (std::size_t j = 0; j < m; ++j) widths[lj[j] - 1]++;

    GroupPtr h = make_h_truncation(k, widths);

    // h's coordinates come out grouped by ell ascending; match each to a z
    // coordinate with the same ell.
    std::vector<std::size_t> z_coord_for_h;
    for (int ell = 1; ell <= k; ++ell)
        for (std::size_t j = 0; j < m; ++j)
            if (lj[j] == ell) z_coord_for_h.push_back(j);

    GroupNilspaceMap phi{h, z, {}};
    phi.table.resize(h->order());
    for (std::uint32_t xh = 0; xh < h->order(); ++xh) {
        GroupElement eh = h->element_at(xh);
        GroupElement ez(m);
        for (std::size_t hj = 0; hj < eh.size(); ++hj) {
            std::size_t j = z_coord_for_h[hj];
            ez[j] = eh[hj] % z->moduli()[j];
        }
        phi.table[xh] = z->index_of(ez);
    }
    if (!is_morphism(phi, -1, budget).ok || !is_fibration(phi)) return std::nullopt;
    return HFibration{k, widths, std::move(phi)};
}

}  // namespace cubelab
