#pragma once

#include <json.hpp>

#include "cubelab/consistency.hpp"
#include "cubelab/exch.hpp"
#include "cubelab/fib.hpp"
#include "cubelab/group.hpp"
#include "cubelab/measures.hpp"
#include "cubelab/poly.hpp"

namespace cubelab {

using Json = nlohmann::ordered_json;

Json group_to_json(const GroupPtr& z);
// Accepts the explicit form and the {"canonical":...} / {"h_trunc":...}
// shorthands.
GroupPtr group_from_json(const Json& j);

Json cube_point_to_json(const CubePoint& q);
// missing_vertex (if any) is encoded as a null entry in "values".
CubePoint cube_point_from_json(const Json& j, const GroupPtr& z,
                               std::optional<std::uint32_t>* missing_vertex = nullptr);
Json cube_coeffs_to_json(const CubeCoeffs& c);
CubeCoeffs cube_coeffs_from_json(const Json& j, const GroupPtr& z);

Json forms_to_json(const LinearFormSystem& l);
LinearFormSystem forms_from_json(const Json& j);

Json function_to_json(const FunctionTable& f);
FunctionTable function_from_json(const Json& j);

Json distribution_to_json(const FiniteDistribution& d);
FiniteDistribution distribution_from_json(const Json& j);

Json limit_object_to_json(const LimitObject& lim);
LimitObject limit_object_from_json(const Json& j);

Json window_to_json(const WindowDistribution& w);
WindowDistribution window_from_json(const Json& j);

Json exch_report_to_json(const ExchReport& r);

Json map_to_json(const GroupNilspaceMap& m);
GroupNilspaceMap map_from_json(const Json& j, const GroupPtr& domain, const GroupPtr& codomain);

Json poly_to_json(const NonClassicalPoly& p);
NonClassicalPoly poly_from_json(const Json& j);

Json tv_to_json(const TvResult& tv);
Json depth_convention_to_json(const DepthConvention& c);

}  // namespace cubelab
