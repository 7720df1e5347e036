#include "cubelab/exch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>

namespace cubelab {

std::vector<std::uint32_t> Face::vertices() const {
    std::vector<std::uint32_t> out;
    std::uint32_t s = free_mask;
    std::uint32_t t = 0;
    while (true) {
        out.push_back(fixed_bits | t);
        if (t == s) break;
        t = (t - s) & s;  // next subset of s in increasing order
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Face> all_faces(int k) {
    std::vector<Face> out;
    const std::uint32_t n = 1u << k;
    for (std::uint32_t s = 0; s < n; ++s) {
        std::uint32_t comp = ~s & (n - 1);
        std::uint32_t z = 0;
        while (true) {
            out.push_back(Face{k, s, z});
            if (z == comp) break;
            z = (z - comp) & comp;
        }
    }
    return out;
}

bool faces_disjoint(const Face& a, const Face& b) {
    std::uint32_t outside = ~(a.free_mask | b.free_mask) & ((1u << a.k) - 1);
    return ((a.fixed_bits ^ b.fixed_bits) & outside) != 0;
}

bool faces_independent(const Face& a, const Face& b) {
    return (a.free_mask & b.free_mask) == 0 && faces_disjoint(a, b);
}

void WindowDistribution::validate() const {
    if (dist.tuple_len != (1 << k))
        throw std::invalid_argument("window distribution: tuple length must be 2^k");
    if (dist.is_exact()) {
        Rational sum(0);
        for (const auto& [o, p] : dist.exact) {
            if (p < 0) throw std::invalid_argument("window distribution: negative weight");
            sum += p;
        }
        if (sum != 1) throw std::invalid_argument("window distribution: weights must sum to 1");
    } else {
        double sum = 0;
        for (const auto& [o, p] : dist.estimated) {
            if (p < 0) throw std::invalid_argument("window distribution: negative weight");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("window distribution: weights must sum to 1");
    }
}

WindowDistribution uniform_cube_window(const GroupPtr& z, int k, std::uint64_t budget) {
    LimitObject lim = dirac_identity_limit(z);
    // For the uniform window we only need cube-respecting evaluation at the
    // window's own vertices, which holds for any Z; bypass the 2-homogeneity
    // gate of zeta_marginal by tallying cubes directly.
    WindowDistribution w;
    w.k = k;
    w.dist.mode = FiniteDistribution::Mode::Exact;
    w.dist.tuple_len = 1 << k;
    w.dist.alphabet = lim.alphabet;
    BigInt total = cube_count(z, k);
    std::map<Outcome, std::uint64_t> counts;
    for_each_cube(z, k, budget, [&](const CubeCoeffs& c) {
        CubePoint q = evaluate(c);
        Outcome o(q.values.begin(), q.values.end());
        ++counts[o];
    });
    for (const auto& [o, c] : counts) {
        Rational p(BigInt(static_cast<unsigned long>(c)), total);
        p.canonicalize();
        w.dist.exact[o] = p;
    }
    return w;
}

FiniteDistribution pushforward_by_vertex_map(const FiniteDistribution& d,
                                             const std::vector<int>& sigma) {
    return d.pull_positions(sigma);
}

std::vector<AffineGenerator> affine_generators(int k) {
    std::vector<AffineGenerator> gens;
    for (int i = 0; i < k; ++i) {
        AffineMap t = identity_affine(k);
        t.shift = 1u << i;
        gens.push_back({"translate e" + std::to_string(i + 1), t});
    }
    if (k >= 2) {
        AffineMap tv = identity_affine(k);
        // v1 -> v1 + v2: basis vector e2 now also feeds coordinate 1
        tv.cols[1] ^= 1u;
        gens.push_back({"transvection v1+=v2", tv});
        AffineMap cyc = identity_affine(k);
        for (int i = 0; i < k; ++i) cyc.cols[i] = 1u << ((i + 1) % k);
        gens.push_back({"cyclic shift", cyc});
    }
    return gens;
}

std::vector<std::vector<int>> generate_affine_group(int k) {
    const std::uint32_t n = 1u << k;
    auto table_of = [&](const AffineMap& t) {
        std::vector<int> tab(n);
        for (std::uint32_t v = 0; v < n; ++v) tab[v] = static_cast<int>(t.apply(v));
        return tab;
    };
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> frontier;
    std::vector<int> id(n);
    for (std::uint32_t v = 0; v < n; ++v) id[v] = static_cast<int>(v);
    seen.insert(id);
    frontier.push_back(id);
    auto gens = affine_generators(k);
    while (!frontier.empty()) {
        std::vector<std::vector<int>> next;
        for (const auto& g : frontier) {
            for (const auto& gen : gens) {
                auto gt = table_of(gen.map);
                std::vector<int> comp(n);
                for (std::uint32_t v = 0; v < n; ++v) comp[v] = g[gt[v]];
                if (seen.insert(comp).second) next.push_back(comp);
            }
        }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

namespace {

double mc_threshold(const FiniteDistribution& d) {
    std::uint64_t n = d.sample_count ? d.sample_count : 1;
    return 4.0 / std::sqrt(static_cast<double>(n));
}

void record(ExchReport& rep, const FiniteDistribution& base, const FiniteDistribution& moved,
            const std::string& name) {
    TvResult tv = tv_distance(base, moved);
    bool equal;
    if (base.is_exact() && moved.is_exact()) {
        equal = (base == moved);
    } else {
        rep.statistical = true;
        equal = tv.value <= mc_threshold(base);
    }
    if (!equal) {
        rep.pass = false;
        rep.witnesses.push_back({name, tv});
    }
}

}  // namespace

ExchReport check_affine_exchangeable(const WindowDistribution& d) {
    d.validate();
    ExchReport rep;
    const std::uint32_t n = 1u << d.k;
    for (const auto& gen : affine_generators(d.k)) {
        std::vector<int> sigma(n);
        for (std::uint32_t v = 0; v < n; ++v) sigma[v] = static_cast<int>(gen.map.apply(v));
        record(rep, d.dist, pushforward_by_vertex_map(d.dist, sigma), gen.name);
    }
    return rep;
}

ExchReport check_cubic_exchangeable(const WindowDistribution& d, int m) {
    d.validate();
    if (m > d.k) throw std::invalid_argument("check_cubic_exchangeable: m > k");
    ExchReport rep;
    auto morphs = enumerate_morphisms_mk(m, d.k, /*injective_only=*/true);
    std::vector<FiniteDistribution> projected;
    std::vector<std::string> names;
    for (const auto& phi : morphs) {
        std::vector<int> sigma(1u << m);
        for (std::uint32_t v = 0; v < (1u << m); ++v)
            sigma[v] = static_cast<int>(apply_morphism_vertex(phi, v));
        projected.push_back(pushforward_by_vertex_map(d.dist, sigma));
        std::string nm = "phi(";
        for (std::uint32_t v = 0; v < (1u << m); ++v)
            nm += (v ? "," : "") + std::to_string(sigma[v]);
        names.push_back(nm + ")");
    }
    for (std::size_t i = 1; i < projected.size(); ++i)
        record(rep, projected[0], projected[i], names[i]);
    return rep;
}

ExchReport check_independence_property(const WindowDistribution& d) {
    d.validate();
    ExchReport rep;
    auto faces = all_faces(d.k);
    for (std::size_t i = 0; i < faces.size(); ++i) {
        for (std::size_t j = 0; j < faces.size(); ++j) {
            if (i == j || !faces_independent(faces[i], faces[j])) continue;
            auto v1 = faces[i].vertices();
            auto v2 = faces[j].vertices();
            std::vector<int> joint_pos;
            for (auto v : v1) joint_pos.push_back(static_cast<int>(v));
            for (auto v : v2) joint_pos.push_back(static_cast<int>(v));
            FiniteDistribution joint = d.dist.marginal(joint_pos);
            FiniteDistribution m1 = d.dist.marginal(std::vector<int>(v1.begin(), v1.end()));
            FiniteDistribution m2 = d.dist.marginal(std::vector<int>(v2.begin(), v2.end()));
            // product measure on the concatenated positions
            FiniteDistribution prod;
            prod.mode = joint.mode;
            prod.tuple_len = joint.tuple_len;
            prod.alphabet = joint.alphabet;
            if (joint.is_exact()) {
                for (const auto& [o1, p1] : m1.exact)
                    for (const auto& [o2, p2] : m2.exact) {
                        Outcome o = o1;
                        o.insert(o.end(), o2.begin(), o2.end());
                        prod.exact[o] = p1 * p2;
                    }
            } else {
                for (const auto& [o1, p1] : m1.estimated)
                    for (const auto& [o2, p2] : m2.estimated) {
                        Outcome o = o1;
                        o.insert(o.end(), o2.begin(), o2.end());
                        prod.estimated[o] = p1 * p2;
                    }
                prod.sample_count = d.dist.sample_count;
            }
            std::string name = "faces S=" + std::to_string(faces[i].free_mask) + "/z=" +
                               std::to_string(faces[i].fixed_bits) + " and S=" +
                               std::to_string(faces[j].free_mask) + "/z=" +
                               std::to_string(faces[j].fixed_bits);
            record(rep, joint, prod, name);
        }
    }
    return rep;
}

}  // namespace cubelab
