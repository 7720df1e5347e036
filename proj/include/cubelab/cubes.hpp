#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cubelab/budget.hpp"
#include "cubelab/group.hpp"
#include "cubelab/rational.hpp"
#include "cubelab/rng.hpp"

namespace cubelab {

// Coefficient form of a Host-Kra cube: q(v) = sum_{S subset of supp(v)} z_S,
// one coefficient per subset mask, z_S constrained to Z_(|S|).
struct CubeCoeffs {
    int k = 0;
    GroupPtr group;
    std::vector<std::uint32_t> coeff;  // element index per subset mask, size 2^k

    bool well_formed() const;
};

// Vertex-table form: values indexed by vertex bitmask (bit i-1 of the index
// is coordinate v[i]). Any table is representable; membership is isCube.
struct CubePoint {
    int k = 0;
    GroupPtr group;
    std::vector<std::uint32_t> values;  // element index per vertex, size 2^k
};

CubePoint evaluate(const CubeCoeffs& c);

// Allocation-free variants for hot loops.
void evaluate_into(const FilteredGroup& g, int k, const std::uint32_t* coeff,
                   std::uint32_t* values);
bool is_cube_values(const FilteredGroup& g, int k, const std::uint32_t* values);

// Moebius inversion of evaluate; round-trips on every table. The result may
// violate the level constraints -- callers check well_formed separately.
CubeCoeffs coeffs_from_cube(const CubePoint& q);

// Alternating-sum membership: every face's signed sum lands in the level
// matching the face dimension.
bool is_cube(const CubePoint& q);

// Same predicate through the coefficient route (Moebius + level checks).
bool is_cube_coeff_route(const CubePoint& q);

// One per-coordinate entry of a discrete-cube morphism [m] -> [k].
struct MorphCoord {
    enum Kind { Zero, One, Var, NegVar } kind = Zero;
    int var = 0;  // 1-based input coordinate for Var/NegVar
};
using CubeMorphism = std::vector<MorphCoord>;  // one entry per output coordinate

std::uint32_t apply_morphism_vertex(const CubeMorphism& phi, std::uint32_t v);
CubePoint restrict_cube(const CubePoint& q, const CubeMorphism& phi, int m);

// All discrete-cube morphisms [m] -> [k]; optionally injective ones only.
std::vector<CubeMorphism> enumerate_morphisms_mk(int m, int k, bool injective_only);

// Unique completion at the missing vertex; requires k >= degree+1 and a valid
// corner. missing is a vertex bitmask.
CubePoint complete_corner(const CubePoint& partial, std::uint32_t missing);

// Exhaustive count of values completing the corner (any k).
int count_completions(const CubePoint& partial, std::uint32_t missing);

BigInt cube_count(const GroupPtr& z, int n);

CubeCoeffs sample_cube(const GroupPtr& z, int k, RngStream& rng);

// Iterate all members of C^k(Z_*) in coefficient form. Throws BudgetExceeded
// if the cube group is larger than the budget.
void for_each_cube(const GroupPtr& z, int k, std::uint64_t budget,
                   const std::function<void(const CubeCoeffs&)>& fn);

// Shard of the same enumeration: only top-slot positions in [lo, hi).
// top_slot_size reports the shardable range.
std::uint64_t top_slot_size(const GroupPtr& z, int k);
void for_each_cube_shard(const GroupPtr& z, int k, std::uint64_t budget, std::uint64_t lo,
                         std::uint64_t hi, const std::function<void(const CubeCoeffs&)>& fn);

// Vertex tables of all cubes, packed 8 bits per vertex (order <= 256, k <= 3
// by packing; checked). Sorted ascending. The omp flag switches between the
// serial reference and the parallel kernel; both produce identical output.
std::vector<std::uint64_t> cube_table_set(const GroupPtr& z, int k, std::uint64_t budget,
                                          bool parallel = false);

// Same set computed from the alternating-sum definition alone, by depth-first
// assignment of vertex values with face checks (no coefficient machinery).
std::vector<std::uint64_t> cube_table_set_by_membership(const GroupPtr& z, int k,
                                                        bool parallel = false);

std::uint64_t pack_table(const CubePoint& q);
CubePoint unpack_table(const GroupPtr& z, int k, std::uint64_t packed);

}  // namespace cubelab
