#pragma once

#include <utility>
#include <vector>

#include "bldg/building.hpp"
#include "bldg/rtree.hpp"

namespace fixtures {

struct Geometry {
  std::vector<int> points;
  std::vector<std::vector<int>> lines;
  int gonality = 0;
};

/// PG(2,2): points are nonzero vectors of F_2^3 (ids 1..7), lines are the
/// zero-sum triples. 7 points, 7 lines, 3 points per line.
Geometry fano_geometry();

/// Generalized quadrangle of order (2,2): points are the 15 unordered pairs
/// from {0..5}, lines are the 15 perfect matchings of {0..5}, incidence is
/// containment.
Geometry gq22_geometry();

/// np points all incident with nl lines (a digon when np,nl >= 2).
Geometry digon_geometry(int np, int nl);

/// Flags of a geometry in the chamber order used by building_from_incidence:
/// sorted by (point position, line position). Entries are (point id, line index).
std::vector<std::pair<int, int>> flags_of(const Geometry& g);

bldg::Building fano_building();
bldg::Building gq22_building();
bldg::Building digon33_building();
bldg::Building thin_hexagon();  // coxeter_complex(A2)

/// Star with three arms of the given lengths; all leaves end-marked.
bldg::MetricTree tripod(const bldg::Rat& a, const bldg::Rat& b, const bldg::Rat& c);

/// Truncation of the regular tree: the root has `degree` children, every
/// other interior vertex has `degree - 1` children, all edges unit length,
/// `depth` levels, leaves end-marked.
bldg::MetricTree regular_truncation(int degree, int depth);

/// Two branch points at distance 1, each carrying arms of lengths 1 and 2;
/// the four leaves end-marked. Mixed arm lengths make it non-uniform.
bldg::MetricTree h_tree();

}  // namespace fixtures
