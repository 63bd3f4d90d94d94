#pragma once

#include <nlohmann/json.hpp>

#include "bldg/building.hpp"
#include "bldg/cone.hpp"
#include "bldg/nerve.hpp"
#include "bldg/rtree.hpp"

namespace bldg {

/// Rational serialization: "p/q" (or "p" for integers).
Rat rat_from_string(const std::string& s);
std::string rat_to_string(const Rat& r);

/// Incidence geometry schema:
/// {"points":[ids],"lines":[[point ids]],"gonality":m}
struct GeometrySpec {
  std::vector<int> points;
  std::vector<std::vector<int>> lines;
  int gonality = 0;
};

GeometrySpec geometry_from_json(const nlohmann::json& j);
nlohmann::json geometry_to_json(const GeometrySpec& g);
Building building_from_geometry(const GeometrySpec& g);

/// Tree schema: {"vertices":[ids],"edges":[[u,v,"p/q"]],"ends":[leaf ids]}
TreeSpec tree_spec_from_json(const nlohmann::json& j);
nlohmann::json tree_to_json(const MetricTree& t);

/// Tree point schema: {"vertex":id} or {"edge":[u,v],"offset":"p/q"}
/// (vertex ids are the original spec ids).
TreePoint tree_point_from_json(const MetricTree& t, const nlohmann::json& j);
nlohmann::json tree_point_to_json(const MetricTree& t, const TreePoint& p);

/// Cone point schema:
/// {"carrier":{"chamber":id,"cotype":[i]},"coords":[floats],"radius":float}
ConePoint cone_point_from_json(const Building& b, const nlohmann::json& j);
nlohmann::json cone_point_to_json(const ConePoint& p);

/// Nerve schema: {"apartments":n,"families":[[labels]]}
Nerve nerve_from_json(const nlohmann::json& j);
nlohmann::json nerve_to_json(const Nerve& n);

}  // namespace bldg
