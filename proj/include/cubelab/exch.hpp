#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cubelab/measures.hpp"

namespace cubelab {

// Face of the window F_2^k: free coordinates S (bitmask), fixed bits z on the
// complement. Vertices are {v : v agrees with z outside S}.
struct Face {
    int k = 0;
    std::uint32_t free_mask = 0;
    std::uint32_t fixed_bits = 0;  // bits on the complement of free_mask

    std::vector<std::uint32_t> vertices() const;
    bool contains(std::uint32_t v) const {
        return (v & ~free_mask & ((1u << k) - 1)) == fixed_bits;
    }
};

std::vector<Face> all_faces(int k);
bool faces_disjoint(const Face& a, const Face& b);
bool faces_independent(const Face& a, const Face& b);

// Distribution over label tuples indexed by all of F_2^k (positions in
// ascending vertex order).
struct WindowDistribution {
    int k = 0;
    FiniteDistribution dist;

    void validate() const;
};

// Uniform measure on C^k(Z), labels = group elements.
WindowDistribution uniform_cube_window(const GroupPtr& z, int k, std::uint64_t budget);

// sigma as a table of source positions: out[v] = in[sigma[v]].
FiniteDistribution pushforward_by_vertex_map(const FiniteDistribution& d,
                                             const std::vector<int>& sigma);

struct ExchWitness {
    std::string transform;
    TvResult tv;
};

struct ExchReport {
    bool pass = true;
    bool statistical = false;  // Monte Carlo input, threshold-based verdict
    std::vector<ExchWitness> witnesses;
};

// Named generators of Aff(F_2^k): translations by basis vectors, the
// transvection v1 += v2, and the cyclic coordinate shift.
struct AffineGenerator {
    std::string name;
    AffineMap map;
};
std::vector<AffineGenerator> affine_generators(int k);

// Full group closure of the generators acting on vertices; used to validate
// that the generating set is correct at small k.
std::vector<std::vector<int>> generate_affine_group(int k);

ExchReport check_affine_exchangeable(const WindowDistribution& d);
ExchReport check_cubic_exchangeable(const WindowDistribution& d, int m);
ExchReport check_independence_property(const WindowDistribution& d);

}  // namespace cubelab
