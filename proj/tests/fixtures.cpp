#include "fixtures.hpp"
#include <algorithm>

namespace fixtures {

Geometry fano_geometry() {
  Geometry g;
  g.gonality = 3;
  for (int v = 1; v <= 7; ++v) g.points.push_back(v);
  for (int a = 1; a <= 7; ++a)
    for (int b = a + 1; b <= 7; ++b) {
      int c = a ^ b;
      if (c > b) g.lines.push_back({a, b, c});
    }
  return g;
}

Geometry gq22_geometry() {
  Geometry g;
  g.gonality = 4;
  auto pair_id = [](int a, int b) { return 10 * a + b; };  // a < b
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) g.points.push_back(pair_id(a, b));
  // Perfect matchings of {0..5}: 0 pairs with x, then match the rest.
  for (int x = 1; x < 6; ++x) {
    std::vector<int> rest;
    for (int v = 1; v < 6; ++v)
      if (v != x) rest.push_back(v);
    for (int k = 1; k < 4; ++k) {
      int a = rest[0], b = rest[k];
      std::vector<int> last;
      for (int v : rest)
        if (v != a && v != b) last.push_back(v);
      g.lines.push_back({pair_id(0, x), pair_id(std::min(a, b), std::max(a, b)),
                         pair_id(last[0], last[1])});
    }
  }
  return g;
}

Geometry digon_geometry(int np, int nl) {
  Geometry g;
  g.gonality = 2;
  for (int p = 0; p < np; ++p) g.points.push_back(p);
  for (int l = 0; l < nl; ++l) g.lines.push_back(g.points);
  return g;
}

std::vector<std::pair<int, int>> flags_of(const Geometry& g) {
  std::vector<std::pair<int, int>> flags;  // (point position, line index)
  for (std::size_t pi = 0; pi < g.points.size(); ++pi)
    for (std::size_t li = 0; li < g.lines.size(); ++li)
      for (int pid : g.lines[li])
        if (pid == g.points[pi]) flags.emplace_back(static_cast<int>(pi), static_cast<int>(li));
  std::sort(flags.begin(), flags.end());
  for (auto& f : flags) f.first = g.points[f.first];
  return flags;
}

bldg::Building fano_building() {
  auto g = fano_geometry();
  return bldg::building_from_incidence(g.points, g.lines, g.gonality);
}

bldg::Building gq22_building() {
  auto g = gq22_geometry();
  return bldg::building_from_incidence(g.points, g.lines, g.gonality);
}

bldg::Building digon33_building() {
  auto g = digon_geometry(3, 3);
  return bldg::building_from_incidence(g.points, g.lines, g.gonality);
}

bldg::Building thin_hexagon() {
  return bldg::coxeter_complex(bldg::CoxeterSystem({{1, 3}, {3, 1}}));
}

bldg::MetricTree tripod(const bldg::Rat& a, const bldg::Rat& b, const bldg::Rat& c) {
  bldg::TreeSpec spec;
  spec.vertices = {0, 1, 2, 3};
  spec.edges = {{0, 1, a}, {0, 2, b}, {0, 3, c}};
  spec.ends = {1, 2, 3};
  return bldg::tree_from_spec(spec);
}

bldg::MetricTree regular_truncation(int degree, int depth) {
  bldg::TreeSpec spec;
  spec.vertices.push_back(0);
  std::vector<int> frontier{0};
  int next = 1;
  for (int level = 0; level < depth; ++level) {
    std::vector<int> created;
    for (int parent : frontier) {
      int kids = (level == 0) ? degree : degree - 1;
      for (int k = 0; k < kids; ++k) {
        spec.vertices.push_back(next);
        spec.edges.push_back({parent, next, bldg::Rat{1}});
        created.push_back(next);
        ++next;
      }
    }
    frontier = created;
  }
  spec.ends = frontier;
  return bldg::tree_from_spec(spec);
}

bldg::MetricTree h_tree() {
  bldg::TreeSpec spec;
  spec.vertices = {0, 1, 2, 3, 4, 5};
  spec.edges = {{0, 1, bldg::Rat{1}},
                {0, 2, bldg::Rat{1}},
                {0, 3, bldg::Rat{2}},
                {1, 4, bldg::Rat{1}},
                {1, 5, bldg::Rat{2}}};
  spec.ends = {2, 3, 4, 5};
  return bldg::tree_from_spec(spec);
}

}  // namespace fixtures
