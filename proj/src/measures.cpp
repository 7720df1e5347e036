#include "cubelab/measures.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cubelab {

void LinearFormSystem::validate() const {
    if (k < 0 || k > 20) throw std::invalid_argument("form system: bad ambient k");
    std::set<std::uint32_t> seen;
    for (auto f : forms) {
        if (f >= (1u << k)) throw std::invalid_argument("form system: form does not fit in k bits");
        if (!seen.insert(f).second) throw std::invalid_argument("form system: duplicate form");
    }
}

LinearFormSystem full_window(int k) {
    LinearFormSystem l;
    l.k = k;
    for (std::uint32_t v = 0; v < (1u << k); ++v) l.forms.push_back(v);
    return l;
}

LinearFormSystem lift_to_affine(const LinearFormSystem& l) {
    LinearFormSystem out;
    out.k = l.k + 1;
    for (auto f : l.forms) out.forms.push_back((f << 1) | 1u);
    return out;
}

void FunctionTable::validate() const {
    if (n < 0 || n > 20) throw std::invalid_argument("function table: bad arity");
    if (alphabet.empty()) throw std::invalid_argument("function table: empty alphabet");
    if (values.size() != (1u << n)) throw std::invalid_argument("function table: size mismatch");
    for (auto v : values)
        if (v >= alphabet.size()) throw std::invalid_argument("function table: label out of range");
}

FunctionTable lift_function(const FunctionTable& f) {
    FunctionTable g;
    g.n = f.n + 1;
    g.alphabet = f.alphabet;
    g.values.resize(2 * f.values.size());
    for (std::size_t x = 0; x < g.values.size(); ++x) g.values[x] = f.values[x & (f.values.size() - 1)];
    return g;
}

Rational FiniteDistribution::exact_prob(const Outcome& o) const {
    auto it = exact.find(o);
    return it == exact.end() ? Rational(0) : it->second;
}

double FiniteDistribution::prob(const Outcome& o) const {
    if (is_exact()) return rational_to_double(exact_prob(o));
    auto it = estimated.find(o);
    return it == estimated.end() ? 0.0 : it->second;
}

bool FiniteDistribution::operator==(const FiniteDistribution& o) const {
    return mode == o.mode && tuple_len == o.tuple_len && alphabet == o.alphabet &&
           exact == o.exact && estimated == o.estimated;
}

FiniteDistribution FiniteDistribution::marginal(const std::vector<int>& positions) const {
    FiniteDistribution out;
    out.mode = mode;
    out.tuple_len = static_cast<int>(positions.size());
    out.alphabet = alphabet;
    out.sample_count = sample_count;
    out.seed = seed;
    for (int p : positions)
        if (p < 0 || p >= tuple_len) throw std::invalid_argument("marginal: bad position");
    auto shrink = [&](const Outcome& o) {
        Outcome s(positions.size());
        for (std::size_t i = 0; i < positions.size(); ++i) s[i] = o[positions[i]];
        return s;
    };
    if (is_exact())
        for (const auto& [o, p] : exact) out.exact[shrink(o)] += p;
    else
        for (const auto& [o, p] : estimated) out.estimated[shrink(o)] += p;
    return out;
}

FiniteDistribution FiniteDistribution::pull_positions(const std::vector<int>& source) const {
    return marginal(source);
}

FiniteDistribution dirac(const std::vector<std::string>& alphabet, const Outcome& o) {
    FiniteDistribution d;
    d.mode = FiniteDistribution::Mode::Exact;
    d.tuple_len = static_cast<int>(o.size());
    d.alphabet = alphabet;
    d.exact[o] = 1;
    return d;
}

TvResult tv_distance(const FiniteDistribution& a, const FiniteDistribution& b) {
    if (!a.same_space(b)) throw std::invalid_argument("tv_distance: mismatched outcome spaces");
    TvResult r;
    if (a.is_exact() && b.is_exact()) {
        Rational acc(0);
        std::set<Outcome> keys;
        for (const auto& [o, _] : a.exact) keys.insert(o);
        for (const auto& [o, _] : b.exact) keys.insert(o);
        for (const auto& o : keys) acc += abs(a.exact_prob(o) - b.exact_prob(o));
        acc /= 2;
        r.exact = acc;
        r.value = rational_to_double(acc);
        return r;
    }
    r.mixed_mode = a.is_exact() != b.is_exact();
    double acc = 0.0;
    std::set<Outcome> keys;
    if (a.is_exact())
        for (const auto& [o, _] : a.exact) keys.insert(o);
    else
        for (const auto& [o, _] : a.estimated) keys.insert(o);
    if (b.is_exact())
        for (const auto& [o, _] : b.exact) keys.insert(o);
    else
        for (const auto& [o, _] : b.estimated) keys.insert(o);
    for (const auto& o : keys) acc += std::abs(a.prob(o) - b.prob(o));
    r.value = acc / 2;
    return r;
}

void LimitObject::validate() const {
    if (!z) throw std::invalid_argument("limit object: missing group");
    if (!z->is_2homogeneous())
        throw std::invalid_argument("limit object: group must be 2-homogeneous");
    if (m.size() != z->order()) throw std::invalid_argument("limit object: m table size mismatch");
    for (const auto& row : m) {
        if (row.size() != alphabet.size())
            throw std::invalid_argument("limit object: m row width mismatch");
        Rational sum(0);
        for (const auto& p : row) {
            if (p < 0) throw std::invalid_argument("limit object: negative probability");
            sum += p;
        }
        if (sum != 1) throw std::invalid_argument("limit object: m row must sum to 1");
    }
}

bool LimitObject::dirac_valued() const {
    for (const auto& row : m)
        if (std::count(row.begin(), row.end(), Rational(1)) != 1) return false;
    return true;
}

LimitObject dirac_identity_limit(const GroupPtr& z) {
    LimitObject lim;
    lim.z = z;
    for (std::uint32_t x = 0; x < z->order(); ++x) {
        GroupElement e = z->element_at(x);
        std::string name;
        for (std::size_t j = 0; j < e.size(); ++j) name += (j ? ":" : "") + std::to_string(e[j]);
        if (e.empty()) name = "0";
        lim.alphabet.push_back(name);
    }
    lim.m.assign(z->order(), std::vector<Rational>(z->order(), Rational(0)));
    for (std::uint32_t x = 0; x < z->order(); ++x) lim.m[x][x] = 1;
    return lim;
}

LimitObject dirac_mod_limit(const GroupPtr& z, std::uint32_t modulus) {
    if (z->coords() != 1) throw std::invalid_argument("dirac_mod_limit: single-factor group");
    LimitObject lim;
    lim.z = z;
    for (std::uint32_t b = 0; b < modulus; ++b) lim.alphabet.push_back(std::to_string(b));
    lim.m.assign(z->order(), std::vector<Rational>(modulus, Rational(0)));
    for (std::uint32_t x = 0; x < z->order(); ++x) lim.m[x][z->element_at(x)[0] % modulus] = 1;
    return lim;
}

namespace {

using CountMap = std::map<Outcome, std::uint64_t>;

// Exact tally over all (a_0,...,a_k) in (F_2^n)^(k+1). Iteration index packs
// the tuple as consecutive n-bit chunks.
CountMap tally_range(const FunctionTable& f, const LinearFormSystem& l, std::uint64_t lo,
                     std::uint64_t hi) {
    CountMap counts;
    const int n = f.n;
    const std::uint32_t mask = (1u << n) - 1;
    Outcome o(l.forms.size());
    for (std::uint64_t it = lo; it < hi; ++it) {
        const std::uint32_t a0 = static_cast<std::uint32_t>(it & mask);
        for (std::size_t fi = 0; fi < l.forms.size(); ++fi) {
            std::uint32_t x = a0;
            std::uint32_t form = l.forms[fi];
            while (form) {
                int i = std::countr_zero(form);
                form &= form - 1;
                x ^= static_cast<std::uint32_t>((it >> (n * (i + 1))) & mask);
            }
            o[fi] = f.values[x];
        }
        ++counts[o];
    }
    return counts;
}

void merge_counts(CountMap& into, const CountMap& from) {
    for (const auto& [o, c] : from) into[o] += c;
}

}  // namespace

FiniteDistribution sample_measure(const FunctionTable& f, const LinearFormSystem& l,
                                  const SampleSpec& spec) {
    f.validate();
    l.validate();
    if (l.forms.empty()) throw std::invalid_argument("sample_measure: empty form system");

    FiniteDistribution out;
    out.tuple_len = static_cast<int>(l.forms.size());
    out.alphabet = f.alphabet;

    const int bits = f.n * (l.k + 1);
    if (spec.exact) {
        if (bits >= 63) throw BudgetExceeded("sample_measure", ~0ull, spec.budget);
        const std::uint64_t total = 1ull << bits;
        check_budget("sample_measure", total, spec.budget);
        CountMap counts;
        if (!spec.parallel_exact) {
            counts = tally_range(f, l, 0, total);
        } else {
            int nthreads = 1;
#ifdef _OPENMP
            nthreads = omp_get_max_threads();
#endif
            std::vector<CountMap> parts(nthreads);
#pragma omp parallel for schedule(static)
            for (int t = 0; t < nthreads; ++t)
                parts[t] = tally_range(f, l, total * t / nthreads, total * (t + 1) / nthreads);
            for (const auto& p : parts) merge_counts(counts, p);
        }
        out.mode = FiniteDistribution::Mode::Exact;
        for (const auto& [o, c] : counts)
            out.exact[o] = Rational(static_cast<unsigned long>(c)) /
                           Rational(static_cast<unsigned long>(total));
        return out;
    }

    // Monte Carlo: shards split the draw range and the seed stream.
    out.mode = FiniteDistribution::Mode::Estimated;
    out.sample_count = spec.n_samples;
    out.seed = spec.seed;
    const int jobs = std::max(1, spec.jobs);
    std::vector<CountMap> parts(jobs);
    const std::uint32_t mask = (1u << f.n) - 1;
#pragma omp parallel for schedule(static) if (jobs > 1)
    for (int j = 0; j < jobs; ++j) {
        RngStream rng(spec.seed, static_cast<std::uint64_t>(j));
        std::uint64_t lo = spec.n_samples * j / jobs, hi = spec.n_samples * (j + 1) / jobs;
        Outcome o(l.forms.size());
        std::vector<std::uint32_t> a(l.k + 1);
        for (std::uint64_t s = lo; s < hi; ++s) {
            for (int i = 0; i <= l.k; ++i) a[i] = static_cast<std::uint32_t>(rng.next_u64()) & mask;
            for (std::size_t fi = 0; fi < l.forms.size(); ++fi) {
                std::uint32_t x = a[0];
                std::uint32_t form = l.forms[fi];
                while (form) {
                    int i = std::countr_zero(form);
                    form &= form - 1;
                    x ^= a[i + 1];
                }
                o[fi] = f.values[x];
            }
            ++parts[j][o];
        }
    }
    CountMap counts;
    for (const auto& p : parts) merge_counts(counts, p);
    for (const auto& [o, c] : counts)
        out.estimated[o] = static_cast<double>(c) / static_cast<double>(spec.n_samples);
    return out;
}

namespace {

// Evaluate a coefficient cube at one form vertex: q(L) = sum_{S subset L} z_S.
inline std::uint32_t eval_at(const FilteredGroup& g, const std::vector<std::uint32_t>& coeff,
                             std::uint32_t l) {
    std::uint32_t acc = 0;
    std::uint32_t s = l;
    while (true) {
        acc = g.add(acc, coeff[s]);
        if (s == 0) break;
        s = (s - 1) & l;
    }
    return acc;
}

}  // namespace

FiniteDistribution zeta_marginal(const LimitObject& lim, const LinearFormSystem& l,
                                 const SampleSpec& spec) {
    lim.validate();
    l.validate();
    if (l.forms.empty()) throw std::invalid_argument("zeta_marginal: empty form system");
    const auto& g = *lim.z;
    const std::size_t nf = l.forms.size();
    const std::size_t nb = lim.alphabet.size();

    FiniteDistribution out;
    out.tuple_len = static_cast<int>(nf);
    out.alphabet = lim.alphabet;

    if (spec.exact) {
        BigInt cubes = cube_count(lim.z, l.k);
        BigInt work = cubes * static_cast<unsigned long>(nf);
        if (work > BigInt(static_cast<unsigned long>(spec.budget)))
            throw BudgetExceeded("zeta_marginal", work.fits_ulong_p() ? work.get_ui() : ~0ull,
                                 spec.budget);
        out.mode = FiniteDistribution::Mode::Exact;
        const int jobs = std::max(1, spec.jobs);
        const std::uint64_t top = top_slot_size(lim.z, l.k);
        const bool dirac = lim.dirac_valued();
        if (dirac) {
            // outcome is a function of the cube; tally counts per shard
            std::vector<std::uint8_t> label_of(g.order());
            for (std::uint32_t x = 0; x < g.order(); ++x)
                label_of[x] = static_cast<std::uint8_t>(
                    std::find(lim.m[x].begin(), lim.m[x].end(), Rational(1)) - lim.m[x].begin());
            std::vector<CountMap> parts(jobs);
#pragma omp parallel for schedule(static) if (jobs > 1)
            for (int j = 0; j < jobs; ++j) {
                Outcome o(nf);
                for_each_cube_shard(lim.z, l.k, spec.budget, top * j / jobs,
                                    top * (j + 1) / jobs, [&](const CubeCoeffs& c) {
                                        for (std::size_t fi = 0; fi < nf; ++fi)
                                            o[fi] = label_of[eval_at(g, c.coeff, l.forms[fi])];
                                        ++parts[j][o];
                                    });
            }
            CountMap counts;
            for (const auto& p : parts) merge_counts(counts, p);
            Rational total(cubes);
            for (const auto& [o2, c] : counts)
                out.exact[o2] = Rational(static_cast<unsigned long>(c)) / total;
            return out;
        }
        // General m: accumulate the product distribution per cube with a
        // common-denominator integer tensor.
        BigInt den(1);
        for (const auto& row : lim.m)
            for (const auto& p : row) den = lcm(den, BigInt(p.get_den()));
        std::vector<std::vector<std::uint64_t>> num(g.order(),
                                                    std::vector<std::uint64_t>(nb));
        for (std::uint32_t x = 0; x < g.order(); ++x)
            for (std::size_t b = 0; b < nb; ++b) {
                Rational scaled = lim.m[x][b] * Rational(den);
                num[x][b] = scaled.get_num().get_ui();
            }
        std::uint64_t cells = 1;
        for (std::size_t fi = 0; fi < nf; ++fi) {
            cells *= nb;
            if (cells > (1u << 24)) throw BudgetExceeded("zeta_marginal joint", cells, 1u << 24);
        }
        std::vector<BigInt> acc(cells, BigInt(0));
        const bool fits_u64 = mpz_sizeinbase(den.get_mpz_t(), 2) * nf <= 58;
        std::vector<std::vector<BigInt>> acc_parts(jobs, std::vector<BigInt>(cells, BigInt(0)));
#pragma omp parallel for schedule(static) if (jobs > 1)
        for (int j = 0; j < jobs; ++j) {
            auto& local = acc_parts[j];
            std::uint64_t lo = top * j / jobs, hi = top * (j + 1) / jobs;
            if (fits_u64) {
                std::vector<std::uint64_t> tensor(cells);
                for_each_cube_shard(lim.z, l.k, spec.budget, lo, hi, [&](const CubeCoeffs& c) {
                    // tensor[o] = prod_f num[q(L_f)][o_f], built incrementally
                    tensor[0] = 1;
                    std::uint64_t width = 1;
                    for (std::size_t fi = 0; fi < nf; ++fi) {
                        const auto& row = num[eval_at(g, c.coeff, l.forms[fi])];
                        for (std::size_t idx = width; idx-- > 0;) {
                            std::uint64_t base = tensor[idx];
                            for (std::size_t b = 0; b < nb; ++b)
                                tensor[idx * nb + b] = base * row[b];
                        }
                        width *= nb;
                    }
                    for (std::uint64_t idx = 0; idx < cells; ++idx)
                        if (tensor[idx]) local[idx] += static_cast<unsigned long>(tensor[idx]);
                });
            } else {
                std::vector<BigInt> tensor(cells);
                for_each_cube_shard(lim.z, l.k, spec.budget, lo, hi, [&](const CubeCoeffs& c) {
                    tensor[0] = 1;
                    std::uint64_t width = 1;
                    for (std::size_t fi = 0; fi < nf; ++fi) {
                        const auto& row = num[eval_at(g, c.coeff, l.forms[fi])];
                        for (std::size_t idx = width; idx-- > 0;) {
                            BigInt base = tensor[idx];
                            for (std::size_t b = 0; b < nb; ++b)
                                tensor[idx * nb + b] = base * static_cast<unsigned long>(row[b]);
                        }
                        width *= nb;
                    }
                    for (std::uint64_t idx = 0; idx < cells; ++idx)
                        if (tensor[idx] != 0) local[idx] += tensor[idx];
                });
            }
        }
        for (int j = 0; j < jobs; ++j)
            for (std::uint64_t idx = 0; idx < cells; ++idx) acc[idx] += acc_parts[j][idx];
        BigInt denk;
        mpz_pow_ui(denk.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(nf));
        BigInt total = cubes * denk;
        for (std::uint64_t idx = 0; idx < cells; ++idx) {
            if (acc[idx] == 0) continue;
            Outcome o(nf);
            std::uint64_t rest = idx;
            for (std::size_t fi = nf; fi-- > 0;) {
                o[fi] = static_cast<std::uint8_t>(rest % nb);
                rest /= nb;
            }
            Rational p(acc[idx], total);
            p.canonicalize();
            out.exact[o] = p;
        }
        return out;
    }

    // Monte Carlo
    out.mode = FiniteDistribution::Mode::Estimated;
    out.sample_count = spec.n_samples;
    out.seed = spec.seed;
    const int jobs = std::max(1, spec.jobs);
    std::vector<CountMap> parts(jobs);
    std::vector<std::vector<double>> cdf(g.order(), std::vector<double>(nb));
    for (std::uint32_t x = 0; x < g.order(); ++x) {
        double run = 0;
        for (std::size_t b = 0; b < nb; ++b) {
            run += rational_to_double(lim.m[x][b]);
            cdf[x][b] = run;
        }
    }
#pragma omp parallel for schedule(static) if (jobs > 1)
    for (int j = 0; j < jobs; ++j) {
        RngStream rng(spec.seed, static_cast<std::uint64_t>(j));
        std::uint64_t lo = spec.n_samples * j / jobs, hi = spec.n_samples * (j + 1) / jobs;
        Outcome o(nf);
        for (std::uint64_t s = lo; s < hi; ++s) {
            CubeCoeffs c = sample_cube(lim.z, l.k, rng);
            for (std::size_t fi = 0; fi < nf; ++fi) {
                std::uint32_t x = eval_at(g, c.coeff, l.forms[fi]);
                double u = static_cast<double>(rng.next_u64() >> 11) * 0x1.0p-53;
                std::size_t b = 0;
                while (b + 1 < nb && u >= cdf[x][b]) ++b;
                o[fi] = static_cast<std::uint8_t>(b);
            }
            ++parts[j][o];
        }
    }
    CountMap counts;
    for (const auto& p : parts) merge_counts(counts, p);
    for (const auto& [o, c] : counts)
        out.estimated[o] = static_cast<double>(c) / static_cast<double>(spec.n_samples);
    return out;
}

bool AffineMap::invertible() const {
    // Gaussian elimination on the linear part.
    std::vector<std::uint32_t> rows = cols;
    int rank = 0;
    for (int bit = 0; bit < k; ++bit) {
        int pivot = -1;
        for (int r = rank; r < k; ++r)
            if ((rows[r] >> bit) & 1) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int r = 0; r < k; ++r)
            if (r != rank && ((rows[r] >> bit) & 1)) rows[r] ^= rows[rank];
        ++rank;
    }
    return rank == k;
}

AffineMap identity_affine(int k) {
    AffineMap t;
    t.k = k;
    for (int i = 0; i < k; ++i) t.cols.push_back(1u << i);
    return t;
}

AffineMap random_invertible_affine(int k, RngStream& rng) {
    while (true) {
        AffineMap t;
        t.k = k;
        for (int i = 0; i < k; ++i)
            t.cols.push_back(static_cast<std::uint32_t>(rng.next_below(1u << k)));
        t.shift = static_cast<std::uint32_t>(rng.next_below(1u << k));
        if (t.invertible()) return t;
    }
}

bool affine_relabel_invariance(const FunctionTable& f, const LinearFormSystem& l,
                               const AffineMap& t, const SampleSpec& spec) {
    if (!t.invertible()) throw std::invalid_argument("affine_relabel_invariance: T not invertible");
    if (!spec.exact)
        throw std::invalid_argument("affine_relabel_invariance: exact mode required");
    LinearFormSystem tl;
    tl.k = l.k;
    for (auto form : l.forms) tl.forms.push_back(t.apply(form));
    FiniteDistribution d1 = sample_measure(f, l, spec);
    FiniteDistribution d2 = sample_measure(f, tl, spec);
    // positions line up already: form i of tl is the image of form i of l
    return d1 == d2;
}

ConvergenceReport convergence_report(const std::vector<FunctionTable>& fs,
                                     const std::vector<LinearFormSystem>& systems,
                                     const SampleSpec& spec, const LimitObject* reference) {
    ConvergenceReport rep;
    rep.has_reference = reference != nullptr;
    for (const auto& l : systems) {
        ConvergenceRow row;
        row.system = l;
        std::vector<FiniteDistribution> ds;
        for (const auto& f : fs) ds.push_back(sample_measure(f, l, spec));
        for (std::size_t i = 0; i + 1 < ds.size(); ++i)
            row.consecutive.push_back(tv_distance(ds[i], ds[i + 1]));
        if (reference) {
            FiniteDistribution zm = zeta_marginal(*reference, l, exact_spec(spec.budget));
            for (const auto& d : ds) row.against_reference.push_back(tv_distance(d, zm));
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace cubelab
