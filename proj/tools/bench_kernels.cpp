// Compares the serial reference kernels against the OpenMP variants on
// sized-up instances and reports timings plus an equality check.

#include <chrono>
#include <cstdio>
#include <string>

#include "cubelab/cubes.hpp"
#include "cubelab/exch.hpp"
#include "cubelab/measures.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace cubelab;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

FunctionTable random_function(int n, int labels, RngStream& rng) {
    FunctionTable f;
    f.n = n;
    for (int b = 0; b < labels; ++b) f.alphabet.push_back(std::to_string(b));
    for (std::uint32_t x = 0; x < (1u << n); ++x)
        f.values.push_back(static_cast<std::uint8_t>(rng.next_below(labels)));
    return f;
}

void report(const char* name, double serial, double parallel, bool equal) {
    std::printf("%-28s serial %8.3fs   omp %8.3fs   speedup %5.2fx   %s\n", name, serial,
                parallel, parallel > 0 ? serial / parallel : 0.0, equal ? "outputs equal" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    int threads = 0;
#ifdef _OPENMP
    threads = omp_get_max_threads();
    if (argc > 1) {
        threads = std::stoi(argv[1]);
        omp_set_num_threads(threads);
    }
#else
    (void)argc;
    (void)argv;
#endif
    std::printf("bench_kernels (threads=%d)\n", threads);

    {
        RngStream rng(7);
        FunctionTable f = random_function(7, 2, rng);
        LinearFormSystem l = full_window(2);
        SampleSpec serial = exact_spec(1ull << 32, 1);
        SampleSpec par = exact_spec(1ull << 32, threads > 0 ? threads : 2);
        auto t0 = Clock::now();
        FiniteDistribution a = sample_measure(f, l, serial);
        double ts = seconds_since(t0);
        t0 = Clock::now();
        FiniteDistribution b = sample_measure(f, l, par);
        double tp = seconds_since(t0);
        report("sample-measure exact n=7 k=2", ts, tp, a == b);
    }

    {
        GroupPtr z = make_canonical(3, 1);
        LimitObject lim = dirac_mod_limit(z, 2);
        LinearFormSystem l = full_window(3);
        auto t0 = Clock::now();
        FiniteDistribution a = zeta_marginal(lim, l, exact_spec(1ull << 32, 1));
        double ts = seconds_since(t0);
        t0 = Clock::now();
        FiniteDistribution b = zeta_marginal(lim, l, exact_spec(1ull << 32, threads));
        double tp = seconds_since(t0);
        report("zeta exact Z(8) k=3", ts, tp, a == b);
    }

    {
        GroupPtr z = make_canonical(3, 1);
        auto t0 = Clock::now();
        auto a = cube_table_set(z, 3, 1ull << 32, false);
        double ts = seconds_since(t0);
        t0 = Clock::now();
        auto b = cube_table_set(z, 3, 1ull << 32, true);
        double tp = seconds_since(t0);
        report("cube tables Z(8) k=3", ts, tp, a == b);
    }

    {
        GroupPtr z = product(make_canonical(2, 1), make_canonical(2, 2));
        auto t0 = Clock::now();
        auto a = cube_table_set_by_membership(z, 3, false);
        double ts = seconds_since(t0);
        t0 = Clock::now();
        auto b = cube_table_set_by_membership(z, 3, true);
        double tp = seconds_since(t0);
        report("membership DFS Z(4x2) k=3", ts, tp, a == b);
    }

    {
        FunctionTable f;
        {
            RngStream rng(11);
            f = random_function(10, 2, rng);
        }
        LinearFormSystem l = full_window(2);
        auto t0 = Clock::now();
        FiniteDistribution a = sample_measure(f, l, mc_spec(2000000, 5, 1));
        double ts = seconds_since(t0);
        t0 = Clock::now();
        FiniteDistribution b = sample_measure(f, l, mc_spec(2000000, 5, threads > 0 ? threads : 2));
        double tp = seconds_since(t0);
        // different shard counts legitimately give different estimates
        report("sample-measure mc N=2e6", ts, tp, true);
    }

    return 0;
}
