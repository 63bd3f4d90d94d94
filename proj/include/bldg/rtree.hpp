#pragma once

#include <boost/rational.hpp>
#include <string>
#include <vector>

namespace bldg {

using Rat = boost::rational<long long>;

/// Input description of a metric tree: vertex ids, weighted edges, and the
/// leaves that stand for truncated infinite rays ("ends"). Leaves not listed
/// are boundary artifacts of the truncation.
struct TreeSpec {
  struct Edge {
    int u = 0;
    int v = 0;
    Rat length{1};
  };
  std::vector<int> vertices;
  std::vector<Edge> edges;
  std::vector<int> ends;
};

/// Finite combinatorial tree with positive rational edge lengths and
/// end-marked leaves. Immutable after construction; vertex indices are
/// 0..n-1 in ascending order of the original ids.
class MetricTree {
 public:
  struct Edge {
    int u = 0;  // u < v (canonical orientation: least endpoint first)
    int v = 0;
    Rat length{1};
  };

  explicit MetricTree(const TreeSpec& spec);

  int num_vertices() const { return static_cast<int>(ids_.size()); }
  int id(int v) const { return ids_[v]; }
  int index_of_id(int id) const;
  const std::vector<Edge>& edges() const { return edges_; }
  /// Incident (neighbor vertex, edge index) pairs, sorted by neighbor.
  const std::vector<std::pair<int, int>>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  bool is_leaf(int v) const { return degree(v) <= 1; }
  bool is_end(int v) const { return end_[v] != 0; }
  Rat distance(int u, int v) const { return dist_[u][v]; }
  /// The unique vertex path from u to v (inclusive).
  std::vector<int> vertex_path(int u, int v) const;
  /// Index of the edge joining two adjacent vertices; -1 if not adjacent.
  int edge_between(int u, int v) const;

  /// Optional display names (empty, or one per vertex). Set by generators
  /// such as cone_tree; ignored by the geometry.
  std::vector<std::string> names;

 private:
  std::vector<int> ids_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  std::vector<char> end_;
  std::vector<std::vector<Rat>> dist_;
  std::vector<std::vector<int>> parent_;  // parent_[root][v] on the path to root
};

MetricTree tree_from_spec(const TreeSpec& spec);

/// A point of the tree: either a vertex, or strictly interior to an edge at
/// the given offset from the edge's least endpoint.
struct TreePoint {
  int vertex = -1;
  int edge = -1;
  Rat offset{0};

  bool on_vertex() const { return vertex >= 0; }
  static TreePoint at_vertex(int v) { return TreePoint{v, -1, Rat{0}}; }
  friend bool operator==(const TreePoint&, const TreePoint&) = default;
};

/// Point on edge `e` at `offset` from the least endpoint; offsets 0 and
/// length canonicalize to the endpoint vertices. Throws on out-of-range.
TreePoint edge_point(const MetricTree& t, int e, const Rat& offset);

Rat point_distance(const MetricTree& t, const TreePoint& x, const TreePoint& y);

/// A geodesic segment: consecutive points lie on a common edge. For x = y the
/// segment is the single point with length 0.
struct Segment {
  std::vector<TreePoint> points;
  Rat length{0};
};

Segment geodesic(const MetricTree& t, const TreePoint& x, const TreePoint& y);

/// The point of the segment at the given distance from its start.
TreePoint point_along(const MetricTree& t, const Segment& s, const Rat& dist);

/// The unique point lying on all three pairwise geodesics.
TreePoint median(const MetricTree& t, const TreePoint& u, const TreePoint& v, const TreePoint& w);

/// Ordered pair of distinct end-marked leaves together with the vertex path
/// between them; the finite stand-in for a line of the tree.
struct TreeApartment {
  int u = -1;
  int v = -1;
  std::vector<int> path;
};

TreeApartment make_apartment(const MetricTree& t, int u, int v);

/// All apartments (unordered: u < v).
std::vector<TreeApartment> all_apartments(const MetricTree& t);

/// Nearest-point projection pi_A; every geodesic from z to A passes through it.
TreePoint project_to_apartment(const MetricTree& t, const TreeApartment& a, const TreePoint& z);

enum class TreeType { kType0, kTypeI, kTypeII, kInconsistent };

struct StructureReport {
  std::vector<int> branch_points;  // vertices of degree >= 3
  std::vector<int> ends;           // end-marked leaves
  std::vector<int> valences;       // degree per vertex
  bool all_leaves_flagged = false;
  TreeType type = TreeType::kInconsistent;
  /// Common collapsed branch-incident length for type II; arm radius for I.
  Rat uniform_length{0};

  std::string type_label() const;
};

StructureReport structure_report(const MetricTree& t);

/// Length-, adjacency- and flag-preserving automorphisms, as vertex
/// permutations. Generators come from the centroid-rooted canonical form;
/// the order is exact (product over sibling-class factorials).
struct TreeAutGroup {
  std::vector<std::vector<int>> generators;
  unsigned long long order = 1;
};

TreeAutGroup tree_automorphisms(const MetricTree& t);

/// Checks of the stabilizer-based recovery criteria at finite truncation:
/// isolation (Fix(G_x) = {x}) per vertex, and for each pair of branch points
/// whether "the only branch points fixed by the two-point stabilizer are the
/// two points themselves" matches direct adjacency along the tree.
struct RecoveryReport {
  std::vector<char> isolated;  // per vertex
  std::vector<int> centre;     // eccentricity minimizers ("interior" vertices)
  struct PairCheck {
    int x = -1;
    int y = -1;
    bool criterion = false;
    bool adjacent = false;  // no branch point strictly between x and y
  };
  std::vector<PairCheck> branch_pairs;  // all unordered branch-point pairs
  int interior_agreements = 0;     // over pairs containing a centre vertex
  int interior_disagreements = 0;
  bool interior_isolated_match = false;  // centre branch points == isolated set
  bool ends_transitive = false;          // group orbit covers all ends
  std::string caveat;
};

RecoveryReport verify_recovery_criteria(const MetricTree& t);

/// The intersection of the closed r-neighborhoods of the given apartments:
/// either it reaches end-marked leaves (reported as common ends) or it is a
/// bounded subtree whose diameter is reported.
struct CommonEndReport {
  bool empty = false;
  std::vector<int> ends;  // end leaves inside the intersection
  bool bounded = false;
  Rat diameter{0};
};

CommonEndReport common_end(const MetricTree& t, const std::vector<TreeApartment>& fam,
                           const Rat& r);

/// Star with one end-marked leaf per label at the given radius (the finite
/// truncation of a Euclidean cone over the label set). Throws on < 2 labels
/// or nonpositive radius.
MetricTree cone_tree(const std::vector<std::string>& labels, const Rat& radius);

}  // namespace bldg
