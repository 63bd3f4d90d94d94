#pragma once

#include <vector>

#include "bldg/building.hpp"

namespace bldg {

/// A path in the opposition graph of panels together with the induced
/// bijection Res(front) -> Res(back). domain is sorted; image[k] is the
/// image of domain[k].
struct Projectivity {
  std::vector<SimplexRef> path;
  std::vector<int> domain;
  std::vector<int> image;

  int parity() const { return static_cast<int>(path.size() - 1) % 2; }
  bool even() const { return parity() == 0; }
  int apply(int chamber) const;
};

/// The gate bijection Res(a) -> Res(b) for opposite panels.
Projectivity perspectivity(const Building& b, const SimplexRef& from, const SimplexRef& to);
/// Composition along a path with consecutive entries opposite.
Projectivity compose_path(const Building& b, const std::vector<SimplexRef>& path);

/// The explicit even projectivity of Res(r) fixing a and mapping b to b',
/// built from two perspectivity detours through chambers outside an
/// apartment. Pre: thick building, type of r not isolated, a,b,b' distinct
/// chambers of Res(r).
Projectivity knarr_projectivity(const Building& bu, const SimplexRef& r, int a, int b, int b2);

struct PanelGroupReport {
  SimplexRef panel;
  int residue_size = 0;
  int max_path_len = 0;
  long long group_order = 0;
  long long even_order = 0;     // subgroup generated by even closed paths
  bool transitive = false;
  bool two_transitive = false;  // of the full group found
  std::vector<std::vector<int>> generators;  // one-line notation over Res(r) indices
};

/// Permutation group generated by all closed projectivities at r of length
/// at most max_path_len (even, >= 2), with the even subgroup and the
/// transitivity degree on Res(r).
PanelGroupReport projectivity_group(const Building& b, const SimplexRef& r, int max_path_len,
                                    std::size_t closure_cap = 2000000);

/// The union of all apartments containing the opposite panels a and b,
/// with the pair-of-residue-chambers <-> apartment correspondence.
struct BetweenBuilding {
  SimplexRef a, b;
  std::vector<int> chambers;  // sorted
  std::vector<Apartment> apartments;
  std::vector<std::pair<int, int>> pairs;  // pairs[k] spans apartments[k]
};
BetweenBuilding between_building(const Building& bu, const SimplexRef& a, const SimplexRef& b);

/// A chamber map defined on a subset of chambers.
struct PartialChamberMap {
  std::vector<int> domain;  // sorted
  std::vector<int> image;

  int apply(int chamber) const;
};

/// The unique isomorphism B(a,b) -> B(a,b') fixing the intersection:
/// c maps to the chamber with the same W-distances from proj_a(c) and from
/// proj_{b'}(proj_a(c)) as c has from proj_a(c) and proj_b(proj_a(c)).
PartialChamberMap slide_isomorphism(const Building& bu, const SimplexRef& a, const SimplexRef& b,
                                    const SimplexRef& b2);

}  // namespace bldg
