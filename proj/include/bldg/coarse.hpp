#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bldg/rtree.hpp"

namespace bldg {

/// Finite sample of a map between two metric trees: distinct source points
/// with their images.
struct SampledMap {
  std::vector<std::pair<TreePoint, TreePoint>> pairs;
};

/// Max of the two directed sup-inf distances between finite point sets.
Rat hausdorff_distance(const MetricTree& t, const std::vector<TreePoint>& u,
                       const std::vector<TreePoint>& v);

/// True iff every point of u is within r of v.
bool dominates(const MetricTree& t, const std::vector<TreePoint>& u,
               const std::vector<TreePoint>& v, const Rat& r);

/// Affine control d_Y <= c * d_X + d fitted over all sampled pairs: among
/// candidate slopes c >= 1 take the one minimizing d(c) + c * Dmax (Dmax the
/// largest sampled source distance), ties broken by least d, then least c.
struct ControlledFit {
  Rat c{1};
  Rat d{0};
  Rat max_source_distance{0};
  /// Sample index pairs violating the fitted bound (always empty: the fit is
  /// exact on finite samples; kept for report symmetry).
  std::vector<std::pair<int, int>> violations;
};

ControlledFit controlled_fit(const MetricTree& source, const MetricTree& target,
                             const SampledMap& f);

/// Result of matching the image of an apartment against the apartments of
/// the target tree by Hausdorff distance between finite vertex samples.
struct MatchReport {
  TreeApartment best;
  Rat distance{0};
  bool margin_infinite = false;  // the target has a single apartment
  Rat runner_up{0};              // smallest distance of a non-tied apartment
  std::vector<TreeApartment> ties;  // all minimizers, enumeration order
};

/// Requires the samples to cover the vertex set of `a`; compares the images
/// of a's vertices with the vertex sets of all apartments of t2.
MatchReport morse_match(const MetricTree& t1, const MetricTree& t2, const SampledMap& f,
                        const TreeApartment& a);

/// Induced map on ends of a bijection between the apartment sets (indices
/// into all_apartments of either tree): succeeds iff "share an end" is
/// preserved in both directions, and then returns the end bijection.
struct EndMapReport {
  bool success = false;
  /// Pairs (end of t1, end of t2), ascending in the first coordinate.
  std::vector<std::pair<int, int>> end_map;
  /// On failure: indices of two t1-apartments witnessing the inconsistency.
  std::pair<int, int> certificate{-1, -1};
  std::string failure;
};

EndMapReport induced_end_map(const MetricTree& t1, const MetricTree& t2,
                             const std::vector<int>& apartment_map);

}  // namespace bldg
