#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cubelab/group.hpp"

namespace cubelab {

// Map F_2^n -> (1/2^D)Z/Z, stored as residues mod 2^D in evaluation order
// (value at x is table[x] / 2^D).
struct NonClassicalPoly {
    int n = 0;
    int D = 0;
    std::vector<std::uint32_t> table;  // size 2^n, entries < 2^D

    std::uint32_t modulus() const { return 1u << D; }
    bool zero() const;
    bool operator==(const NonClassicalPoly& o) const = default;
};

NonClassicalPoly poly_from_table(int n, int D, std::vector<std::uint32_t> table);

// x -> P(x+h) - P(x); not re-normalized to vanish at 0.
NonClassicalPoly derivative(const NonClassicalPoly& p, std::uint32_t h);

// Subtract P(0) everywhere.
NonClassicalPoly normalized(const NonClassicalPoly& p);

// Least d >= 0 with all (d+1)-fold basis-direction derivatives vanishing;
// the constant-0 polynomial reports 0.
int degree_of(const NonClassicalPoly& p);

// Same, quantifying over all directions (the independent oracle; exponential).
int degree_of_all_directions(const NonClassicalPoly& p);

// Least j >= 0 with image contained in (1/2^j)Z/Z.
int denominator_level(const NonClassicalPoly& p);

// Moebius coefficients over Z_{2^D}: P(v) = sum_S w_S prod_{i in S} v_i.
std::vector<std::uint32_t> poly_coeffs(const NonClassicalPoly& p);
NonClassicalPoly poly_from_coeffs(int n, int D, const std::vector<std::uint32_t>& coeffs);

// Coefficient-form morphism test into a single cyclic 2-group target embedded
// in (1/2^D)Z/Z: w_S must land in Z_(|S|).
bool is_morphism_into(const NonClassicalPoly& p, const GroupPtr& z);

// The empirically calibrated correspondence between (degree, depth) classes
// and the canonical targets: depth r means image inside (1/2^(r+rho))Z/Z, and
// {P : deg <= k, depth <= r, P(0)=0} = hom(D_1(F_2^n), Z_{k, ell(k,r)}).
struct DepthConvention {
    int rho = 1;  // j = r + rho
    std::map<std::pair<int, int>, int> ell;  // (k, r) -> ell

    int depth_of(const NonClassicalPoly& p) const;
    std::optional<int> ell_for(int k, int r) const;
};

// Exhaustive calibration for k <= kmax over n <= nmax variables. Throws if no
// single offset yields a total pairing.
DepthConvention calibrate_depth_convention(int kmax = 3, int nmax = 2);

// All tables P: F_2^n -> (1/2^D)Z/Z with deg <= k, denominator level <= j and
// P(0) = 0, found by scanning every table with the difference oracle.
std::vector<NonClassicalPoly> enumerate_polys(int n, int D, int max_deg, int max_level);

// All morphism tables hom(D_1(F_2^n), Z) with P(0)=0, via coefficient
// constraints, lifted to denominator 2^D (Z cyclic 2-group, |Z| divides 2^D).
std::vector<NonClassicalPoly> enumerate_morphism_tables(int n, int D, const GroupPtr& z);

}  // namespace cubelab
