#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cubelab/budget.hpp"
#include "cubelab/cubes.hpp"
#include "cubelab/group.hpp"
#include "cubelab/rational.hpp"
#include "cubelab/rng.hpp"

namespace cubelab {

// Ordered system of distinct linear forms, one bitmask per form (bit i-1 is
// the coefficient of a_i).
struct LinearFormSystem {
    int k = 0;
    std::vector<std::uint32_t> forms;

    void validate() const;
};

// All of F_2^k in ascending bitmask order (the full window).
LinearFormSystem full_window(int k);

// Every form gets a 1 prefixed (new coefficient a_0); ambient grows by one.
LinearFormSystem lift_to_affine(const LinearFormSystem& l);

struct FunctionTable {
    int n = 0;
    std::vector<std::string> alphabet;
    std::vector<std::uint8_t> values;  // size 2^n, label indices

    void validate() const;
};

// Same table on n+1 variables, ignoring the new coordinate.
FunctionTable lift_function(const FunctionTable& f);

using Outcome = std::vector<std::uint8_t>;

struct FiniteDistribution {
    enum class Mode { Exact, Estimated };

    Mode mode = Mode::Exact;
    int tuple_len = 0;
    std::vector<std::string> alphabet;
    std::map<Outcome, Rational> exact;
    std::map<Outcome, double> estimated;
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;

    bool is_exact() const { return mode == Mode::Exact; }
    Rational exact_prob(const Outcome& o) const;
    double prob(const Outcome& o) const;
    bool same_space(const FiniteDistribution& o) const {
        return tuple_len == o.tuple_len && alphabet == o.alphabet;
    }
    bool operator==(const FiniteDistribution& o) const;

    // Keep only the chosen positions, in the given order.
    FiniteDistribution marginal(const std::vector<int>& positions) const;
    // outcome'[i] = outcome[source[i]] (source a function on positions).
    FiniteDistribution pull_positions(const std::vector<int>& source) const;
};

FiniteDistribution dirac(const std::vector<std::string>& alphabet, const Outcome& o);

struct TvResult {
    std::optional<Rational> exact;
    double value = 0.0;
    bool mixed_mode = false;  // exact coerced to float
};

TvResult tv_distance(const FiniteDistribution& a, const FiniteDistribution& b);

// A 2-homogeneous group together with a label distribution per element.
struct LimitObject {
    GroupPtr z;
    std::vector<std::string> alphabet;
    std::vector<std::vector<Rational>> m;  // m[element index][label] = prob

    void validate() const;
    bool dirac_valued() const;
};

LimitObject dirac_identity_limit(const GroupPtr& z);
LimitObject dirac_mod_limit(const GroupPtr& z, std::uint32_t modulus);

struct SampleSpec {
    bool exact = true;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::uint64_t budget = kDefaultBudget;
    bool parallel_exact = false;  // omp kernel instead of the serial reference
};

inline SampleSpec exact_spec(std::uint64_t budget = default_budget(), int jobs = 1) {
    SampleSpec s;
    s.exact = true;
    s.budget = budget;
    s.jobs = jobs;
    s.parallel_exact = jobs > 1;
    return s;
}

inline SampleSpec mc_spec(std::uint64_t n, std::uint64_t seed, int jobs = 1) {
    SampleSpec s;
    s.exact = false;
    s.n_samples = n;
    s.seed = seed;
    s.jobs = jobs;
    return s;
}

// mu_{L,f}: distribution of (f(A(L)))_{L in system} for a uniform affine map
// A(L) = a_0 + sum_i L_i a_i over F_2^n.
FiniteDistribution sample_measure(const FunctionTable& f, const LinearFormSystem& l,
                                  const SampleSpec& spec);

// zeta marginal: average over uniform cubes q in C^k(Z) of the product
// distribution over (m(q(L)))_{L in system}. Z must be 2-homogeneous.
FiniteDistribution zeta_marginal(const LimitObject& lim, const LinearFormSystem& l,
                                 const SampleSpec& spec);

struct AffineMap {
    int k = 0;
    std::vector<std::uint32_t> cols;  // column images of basis vectors
    std::uint32_t shift = 0;

    std::uint32_t apply(std::uint32_t v) const {
        std::uint32_t out = shift;
        for (int i = 0; i < k; ++i)
            if ((v >> i) & 1) out ^= cols[i];
        return out;
    }
    bool invertible() const;
};

AffineMap identity_affine(int k);
AffineMap random_invertible_affine(int k, RngStream& rng);

// Exact-mode check that mu_{T.L, f} relabeled along the form bijection equals
// mu_{L,f}. A finite-level theorem; false signals an implementation bug.
bool affine_relabel_invariance(const FunctionTable& f, const LinearFormSystem& l,
                               const AffineMap& t, const SampleSpec& spec);

struct ConvergenceRow {
    LinearFormSystem system;
    std::vector<TvResult> consecutive;          // d(mu_i, mu_{i+1})
    std::vector<TvResult> against_reference;    // d(mu_i, zeta marginal), optional
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;  // one per form system
    bool has_reference = false;
};

ConvergenceReport convergence_report(const std::vector<FunctionTable>& fs,
                                     const std::vector<LinearFormSystem>& systems,
                                     const SampleSpec& spec,
                                     const LimitObject* reference = nullptr);

}  // namespace cubelab
