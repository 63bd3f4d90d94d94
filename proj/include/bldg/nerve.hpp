#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bldg/building.hpp"

namespace bldg {

/// Nerve of the apartment covering: apartment labels 0..n-1 plus the maximal
/// intersecting families (apartment sets sharing a vertex). A finite label
/// family has the finite intersection property iff it lies in one of these,
/// which makes the oracle monotone.
struct Nerve {
  int num_apartments = 0;
  std::vector<std::vector<int>> families;  // each sorted; list sorted

  bool intersects(const std::vector<int>& labels) const;
};

Nerve apartment_complex(const Building& b, std::size_t cap = 1000000);

/// All vertices (rank-1 residues) of a building, sorted.
std::vector<SimplexRef> building_vertices(const Building& b);

struct Reconstruction {
  Building building;
  /// families[v] is the apartment family of reconstructed vertex v.
  std::vector<std::vector<int>> families;
  std::vector<std::vector<int>> chamber_vertices;  // clique per chamber, sorted
  std::vector<int> vertex_type;
};

/// Rebuild a thick building from its nerve: vertices are the maximal
/// families, adjacency by the containment criterion, chambers are the
/// maximal cliques, types recovered by propagation. Throws when the nerve
/// does not come from a thick building of rank >= 2 per factor.
Reconstruction reconstruct_building(const Nerve& n);

struct RoundTripReport {
  bool isomorphic = false;
  bool type_preserving = false;
  /// vertex_map[k] = reconstructed vertex index for building_vertices(b)[k].
  std::vector<int> vertex_map;
  std::string failure;
};

/// Reconstruct from apartment_complex(b) and match against b through the
/// natural dictionary (source vertex -> its apartment family).
RoundTripReport verify_round_trip(const Building& b, std::size_t cap = 1000000);

}  // namespace bldg
