#include "bldg/json_io.hpp"

#include <stdexcept>

namespace bldg {

using nlohmann::json;

Rat rat_from_string(const std::string& s) {
  std::size_t slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat{std::stoll(s)};
    long long num = std::stoll(s.substr(0, slash));
    long long den = std::stoll(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat{num, den};
  } catch (const std::exception&) {
    throw std::invalid_argument("json: bad rational '" + s + "'");
  }
}

std::string rat_to_string(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

GeometrySpec geometry_from_json(const json& j) {
  if (!j.is_object() || !j.contains("points") || !j.contains("lines") || !j.contains("gonality"))
    throw std::invalid_argument("json: geometry needs points, lines and gonality");
  GeometrySpec g;
  g.points = j.at("points").get<std::vector<int>>();
  g.lines = j.at("lines").get<std::vector<std::vector<int>>>();
  g.gonality = j.at("gonality").get<int>();
  return g;
}

json geometry_to_json(const GeometrySpec& g) {
  return json{{"points", g.points}, {"lines", g.lines}, {"gonality", g.gonality}};
}

Building building_from_geometry(const GeometrySpec& g) {
  return building_from_incidence(g.points, g.lines, g.gonality);
}

TreeSpec tree_spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw std::invalid_argument("json: tree needs vertices and edges");
  TreeSpec spec;
  spec.vertices = j.at("vertices").get<std::vector<int>>();
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3)
      throw std::invalid_argument("json: tree edge must be [u,v,length]");
    Rat len = e[2].is_string() ? rat_from_string(e[2].get<std::string>())
                               : Rat{e[2].get<long long>()};
    spec.edges.push_back({e[0].get<int>(), e[1].get<int>(), len});
  }
  if (j.contains("ends")) spec.ends = j.at("ends").get<std::vector<int>>();
  return spec;
}

json tree_to_json(const MetricTree& t) {
  json j;
  std::vector<int> verts;
  for (int v = 0; v < t.num_vertices(); ++v) verts.push_back(t.id(v));
  j["vertices"] = verts;
  json edges = json::array();
  for (const auto& e : t.edges())
    edges.push_back(json::array({t.id(e.u), t.id(e.v), rat_to_string(e.length)}));
  j["edges"] = edges;
  std::vector<int> ends;
  for (int v = 0; v < t.num_vertices(); ++v)
    if (t.is_end(v)) ends.push_back(t.id(v));
  j["ends"] = ends;
  return j;
}

TreePoint tree_point_from_json(const MetricTree& t, const json& j) {
  if (j.is_object() && j.contains("vertex"))
    return TreePoint::at_vertex(t.index_of_id(j.at("vertex").get<int>()));
  if (j.is_object() && j.contains("edge") && j.contains("offset")) {
    int u = t.index_of_id(j.at("edge").at(0).get<int>());
    int v = t.index_of_id(j.at("edge").at(1).get<int>());
    int e = t.edge_between(u, v);
    if (e < 0) throw std::invalid_argument("json: tree point on a non-edge");
    Rat offset = rat_from_string(j.at("offset").get<std::string>());
    // Offsets are measured from the first listed endpoint.
    if (t.edges()[e].u != u) offset = t.edges()[e].length - offset;
    return edge_point(t, e, offset);
  }
  throw std::invalid_argument("json: tree point needs vertex or edge+offset");
}

json tree_point_to_json(const MetricTree& t, const TreePoint& p) {
  if (p.on_vertex()) return json{{"vertex", t.id(p.vertex)}};
  const auto& e = t.edges()[p.edge];
  return json{{"edge", json::array({t.id(e.u), t.id(e.v)})}, {"offset", rat_to_string(p.offset)}};
}

ConePoint cone_point_from_json(const Building& b, const json& j) {
  if (!j.is_object() || !j.contains("radius"))
    throw std::invalid_argument("json: cone point needs a radius");
  double radius = j.at("radius").get<double>();
  if (radius == 0) return ConePoint::apex();
  if (!j.contains("carrier") || !j.contains("coords"))
    throw std::invalid_argument("json: cone point needs carrier and coords");
  const auto& c = j.at("carrier");
  SimplexRef carrier;
  carrier.chamber = c.at("chamber").get<int>();
  carrier.cotype = c.at("cotype").get<std::vector<int>>();
  auto coords = j.at("coords").get<std::vector<double>>();
  if (carrier.chamber < 0 || carrier.chamber >= b.num_chambers())
    throw std::invalid_argument("json: cone point chamber out of range");
  return make_cone_point(b, RealizedPoint{make_simplex(b, carrier.chamber, carrier.cotype),
                                          std::move(coords)},
                         radius);
}

json cone_point_to_json(const ConePoint& p) {
  json j;
  j["radius"] = p.radius;
  if (p.is_apex()) {
    j["carrier"] = json{{"chamber", 0}, {"cotype", json::array()}};
    j["coords"] = json::array();
    return j;
  }
  j["carrier"] = json{{"chamber", p.point.carrier.chamber}, {"cotype", p.point.carrier.cotype}};
  j["coords"] = p.point.coords;
  return j;
}

Nerve nerve_from_json(const json& j) {
  if (!j.is_object() || !j.contains("apartments") || !j.contains("families"))
    throw std::invalid_argument("json: nerve needs apartments and families");
  Nerve n;
  n.num_apartments = j.at("apartments").get<int>();
  n.families = j.at("families").get<std::vector<std::vector<int>>>();
  for (const auto& fam : n.families)
    for (int label : fam)
      if (label < 0 || label >= n.num_apartments)
        throw std::invalid_argument("json: nerve family label out of range");
  return n;
}

json nerve_to_json(const Nerve& n) {
  return json{{"apartments", n.num_apartments}, {"families", n.families}};
}

}  // namespace bldg
