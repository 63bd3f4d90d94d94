#include "bldg/rtree.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace bldg {

namespace {

unsigned long long mul_checked(unsigned long long a, unsigned long long b) {
  if (b != 0 && a > std::numeric_limits<unsigned long long>::max() / b)
    throw std::runtime_error("tree: automorphism order overflow");
  return a * b;
}

}  // namespace

MetricTree::MetricTree(const TreeSpec& spec) {
  if (spec.vertices.empty()) throw std::invalid_argument("tree: no vertices");
  ids_ = spec.vertices;
  std::sort(ids_.begin(), ids_.end());
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
    throw std::invalid_argument("tree: duplicate vertex id");
  const int n = static_cast<int>(ids_.size());
  auto index = [&](int id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) throw std::invalid_argument("tree: unknown vertex id");
    return static_cast<int>(it - ids_.begin());
  };

  adj_.assign(n, {});
  std::set<std::pair<int, int>> seen_edges;
  for (const auto& e : spec.edges) {
    if (e.length <= Rat{0}) throw std::invalid_argument("tree: nonpositive edge length");
    int u = index(e.u), v = index(e.v);
    if (u == v) throw std::invalid_argument("tree: cycle in edge set");
    if (u > v) std::swap(u, v);
    if (!seen_edges.insert({u, v}).second) throw std::invalid_argument("tree: cycle in edge set");
    edges_.push_back(Edge{u, v, e.length});
  }
  if (static_cast<int>(edges_.size()) >= n) throw std::invalid_argument("tree: cycle in edge set");
  for (int k = 0; k < static_cast<int>(edges_.size()); ++k) {
    adj_[edges_[k].u].push_back({edges_[k].v, k});
    adj_[edges_[k].v].push_back({edges_[k].u, k});
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());

  // Connectivity; with |E| = n-1 this also certifies acyclicity.
  if (static_cast<int>(edges_.size()) != n - 1)
    throw std::invalid_argument("tree: disconnected vertex set");
  std::vector<int> stack{0};
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int p = stack.back();
    stack.pop_back();
    for (auto [q, e] : adj_[p])
      if (!seen[q]) {
        seen[q] = 1;
        ++reached;
        stack.push_back(q);
      }
  }
  if (reached != n) throw std::invalid_argument("tree: cycle in edge set");

  end_.assign(n, 0);
  for (int id : spec.ends) {
    int v = index(id);
    if (degree(v) > 1) throw std::invalid_argument("tree: end flag on non-leaf vertex");
    end_[v] = 1;
  }

  dist_.assign(n, std::vector<Rat>(n, Rat{0}));
  parent_.assign(n, std::vector<int>(n, -1));
  for (int root = 0; root < n; ++root) {
    std::vector<int> order{root};
    std::vector<char> vis(n, 0);
    vis[root] = 1;
    for (std::size_t k = 0; k < order.size(); ++k) {
      int p = order[k];
      for (auto [q, e] : adj_[p])
        if (!vis[q]) {
          vis[q] = 1;
          parent_[root][q] = p;
          dist_[root][q] = dist_[root][p] + edges_[e].length;
          order.push_back(q);
        }
    }
  }
}

int MetricTree::index_of_id(int id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) throw std::invalid_argument("tree: unknown vertex id");
  return static_cast<int>(it - ids_.begin());
}

std::vector<int> MetricTree::vertex_path(int u, int v) const {
  std::vector<int> path{v};
  while (path.back() != u) path.push_back(parent_[u][path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

int MetricTree::edge_between(int u, int v) const {
  for (auto [q, e] : adj_[u])
    if (q == v) return e;
  return -1;
}

MetricTree tree_from_spec(const TreeSpec& spec) { return MetricTree(spec); }

TreePoint edge_point(const MetricTree& t, int e, const Rat& offset) {
  if (e < 0 || e >= static_cast<int>(t.edges().size()))
    throw std::invalid_argument("tree: bad edge index");
  const auto& edge = t.edges()[e];
  if (offset < Rat{0} || offset > edge.length)
    throw std::invalid_argument("tree: edge offset out of range");
  if (offset == Rat{0}) return TreePoint::at_vertex(edge.u);
  if (offset == edge.length) return TreePoint::at_vertex(edge.v);
  return TreePoint{-1, e, offset};
}

Rat point_distance(const MetricTree& t, const TreePoint& x, const TreePoint& y) {
  if (x == y) return Rat{0};
  if (!x.on_vertex() && !y.on_vertex() && x.edge == y.edge) {
    Rat d = x.offset - y.offset;
    return d < Rat{0} ? -d : d;
  }
  auto anchors = [&](const TreePoint& p) -> std::vector<std::pair<int, Rat>> {
    if (p.on_vertex()) return {{p.vertex, Rat{0}}};
    const auto& e = t.edges()[p.edge];
    return {{e.u, p.offset}, {e.v, e.length - p.offset}};
  };
  bool first = true;
  Rat best{0};
  for (const auto& [a, da] : anchors(x))
    for (const auto& [b, db] : anchors(y)) {
      Rat d = da + t.distance(a, b) + db;
      if (first || d < best) best = d;
      first = false;
    }
  return best;
}

Segment geodesic(const MetricTree& t, const TreePoint& x, const TreePoint& y) {
  Segment s;
  if (x == y) {
    s.points = {x};
    return s;
  }
  s.length = point_distance(t, x, y);
  if (!x.on_vertex() && !y.on_vertex() && x.edge == y.edge) {
    s.points = {x, y};
    return s;
  }
  auto exit_vertex = [&](const TreePoint& p, const TreePoint& other) {
    if (p.on_vertex()) return p.vertex;
    const auto& e = t.edges()[p.edge];
    Rat du = p.offset + point_distance(t, TreePoint::at_vertex(e.u), other);
    Rat dv = (e.length - p.offset) + point_distance(t, TreePoint::at_vertex(e.v), other);
    return du <= dv ? e.u : e.v;
  };
  int a = exit_vertex(x, y), b = exit_vertex(y, x);
  if (!x.on_vertex()) s.points.push_back(x);
  for (int v : t.vertex_path(a, b)) s.points.push_back(TreePoint::at_vertex(v));
  if (!y.on_vertex()) s.points.push_back(y);
  return s;
}

TreePoint point_along(const MetricTree& t, const Segment& s, const Rat& dist) {
  if (dist < Rat{0} || dist > s.length) throw std::invalid_argument("tree: distance off segment");
  if (s.points.empty()) throw std::invalid_argument("tree: empty segment");
  if (dist == Rat{0}) return s.points.front();
  Rat walked{0};
  for (std::size_t k = 0; k + 1 < s.points.size(); ++k) {
    const TreePoint& p = s.points[k];
    const TreePoint& q = s.points[k + 1];
    Rat step = point_distance(t, p, q);
    if (walked + step < dist) {
      walked += step;
      continue;
    }
    // The target lies between p and q; both sit on one edge.
    int e = (!p.on_vertex()) ? p.edge
            : (!q.on_vertex()) ? q.edge
                               : t.edge_between(p.vertex, q.vertex);
    const auto& edge = t.edges()[e];
    auto off = [&](const TreePoint& z) {
      if (!z.on_vertex()) return z.offset;
      return z.vertex == edge.u ? Rat{0} : edge.length;
    };
    Rat op = off(p), oq = off(q);
    Rat want = dist - walked;
    Rat target = op + (oq > op ? want : -want);
    return edge_point(t, e, target);
  }
  return s.points.back();
}

TreePoint median(const MetricTree& t, const TreePoint& u, const TreePoint& v, const TreePoint& w) {
  Rat duv = point_distance(t, u, v);
  Rat duw = point_distance(t, u, w);
  Rat dvw = point_distance(t, v, w);
  Rat along = (duv + duw - dvw) / 2;
  return point_along(t, geodesic(t, u, v), along);
}

TreeApartment make_apartment(const MetricTree& t, int u, int v) {
  if (u == v) throw std::invalid_argument("tree: apartment needs two distinct ends");
  if (!t.is_end(u) || !t.is_end(v))
    throw std::invalid_argument("tree: apartment ends must be end-marked leaves");
  return TreeApartment{u, v, t.vertex_path(u, v)};
}

std::vector<TreeApartment> all_apartments(const MetricTree& t) {
  std::vector<int> ends;
  for (int v = 0; v < t.num_vertices(); ++v)
    if (t.is_end(v)) ends.push_back(v);
  std::vector<TreeApartment> out;
  for (std::size_t i = 0; i < ends.size(); ++i)
    for (std::size_t j = i + 1; j < ends.size(); ++j)
      out.push_back(make_apartment(t, ends[i], ends[j]));
  return out;
}

TreePoint project_to_apartment(const MetricTree& t, const TreeApartment& a, const TreePoint& z) {
  return median(t, z, TreePoint::at_vertex(a.u), TreePoint::at_vertex(a.v));
}

std::string StructureReport::type_label() const {
  switch (type) {
    case TreeType::kType0:
      return "0";
    case TreeType::kTypeI:
      return "I";
    case TreeType::kTypeII:
      return "II-consistent";
    default:
      return "inconsistent";
  }
}

StructureReport structure_report(const MetricTree& t) {
  StructureReport rep;
  const int n = t.num_vertices();
  rep.valences.resize(n);
  rep.all_leaves_flagged = true;
  for (int v = 0; v < n; ++v) {
    rep.valences[v] = t.degree(v);
    if (t.degree(v) >= 3) rep.branch_points.push_back(v);
    if (t.is_end(v)) rep.ends.push_back(v);
    if (t.is_leaf(v) && !t.is_end(v)) rep.all_leaves_flagged = false;
  }
  if (rep.branch_points.empty()) {
    bool path_shape = std::count_if(rep.valences.begin(), rep.valences.end(),
                                    [](int d) { return d <= 1; }) == 2;
    rep.type = path_shape ? TreeType::kType0 : TreeType::kInconsistent;
    return rep;
  }

  // Collapse degree-2 chains: lengths of all branch-incident chains up to the
  // next branch point or leaf.
  std::vector<Rat> chain_lengths;
  for (int b : rep.branch_points) {
    for (auto [q, e] : t.neighbors(b)) {
      Rat len = t.edges()[e].length;
      int prev = b, cur = q;
      while (t.degree(cur) == 2) {
        for (auto [r2, e2] : t.neighbors(cur))
          if (r2 != prev) {
            len += t.edges()[e2].length;
            prev = cur;
            cur = r2;
            break;
          }
      }
      chain_lengths.push_back(len);
    }
  }
  bool uniform = std::all_of(chain_lengths.begin(), chain_lengths.end(),
                             [&](const Rat& l) { return l == chain_lengths.front(); });
  if (rep.branch_points.size() == 1) {
    rep.type = TreeType::kTypeI;
    if (uniform) rep.uniform_length = chain_lengths.front();
    return rep;
  }
  rep.type = uniform ? TreeType::kTypeII : TreeType::kInconsistent;
  if (uniform) rep.uniform_length = chain_lengths.front();
  return rep;
}

namespace {

// Canonical codes of rooted subtrees: equal code <=> isomorphic as rooted
// trees with edge lengths and end flags.
using CodeKey = std::pair<int, std::vector<std::pair<Rat, int>>>;
using CodeMap = std::map<CodeKey, int>;

struct Rooted {
  int root = 0;
  std::vector<int> parent;
  std::vector<int> order;  // parents before children
  std::vector<std::vector<int>> children;
  std::vector<Rat> up;
  std::vector<int> code;
};

Rooted root_at(const MetricTree& t, int root, CodeMap& codes) {
  const int n = t.num_vertices();
  Rooted r;
  r.root = root;
  r.parent.assign(n, -1);
  r.children.assign(n, {});
  r.up.assign(n, Rat{0});
  r.code.assign(n, 0);
  r.order = {root};
  std::vector<char> seen(n, 0);
  seen[root] = 1;
  for (std::size_t k = 0; k < r.order.size(); ++k) {
    int p = r.order[k];
    for (auto [q, e] : t.neighbors(p))
      if (!seen[q]) {
        seen[q] = 1;
        r.parent[q] = p;
        r.up[q] = t.edges()[e].length;
        r.children[p].push_back(q);
        r.order.push_back(q);
      }
  }
  for (auto it = r.order.rbegin(); it != r.order.rend(); ++it) {
    int p = *it;
    std::sort(r.children[p].begin(), r.children[p].end(), [&](int a, int b) {
      return std::make_tuple(r.up[a], r.code[a], a) < std::make_tuple(r.up[b], r.code[b], b);
    });
    CodeKey key{t.is_end(p) ? 1 : 0, {}};
    for (int q : r.children[p]) key.second.push_back({r.up[q], r.code[q]});
    auto [pos, inserted] = codes.try_emplace(key, static_cast<int>(codes.size()));
    r.code[p] = pos->second;
  }
  return r;
}

unsigned long long rooted_order(const Rooted& r) {
  unsigned long long order = 1;
  for (int p : r.order) {
    std::size_t k = 0;
    const auto& ch = r.children[p];
    while (k < ch.size()) {
      std::size_t j = k;
      while (j < ch.size() && r.up[ch[j]] == r.up[ch[k]] && r.code[ch[j]] == r.code[ch[k]]) ++j;
      for (std::size_t m = 2; m <= j - k; ++m) order = mul_checked(order, m);
      k = j;
    }
  }
  return order;
}

// Maps the subtree below `a` (in ra) onto the subtree below `b` (in rb)
// following the shared canonical child order; requires equal codes.
void map_subtrees(const Rooted& ra, int a, const Rooted& rb, int b, std::vector<int>& perm) {
  perm[a] = b;
  for (std::size_t k = 0; k < ra.children[a].size(); ++k)
    map_subtrees(ra, ra.children[a][k], rb, rb.children[b][k], perm);
}

void sibling_swap_generators(const Rooted& r, int n, std::vector<std::vector<int>>& gens) {
  for (int p : r.order) {
    const auto& ch = r.children[p];
    std::size_t k = 0;
    while (k < ch.size()) {
      std::size_t j = k;
      while (j < ch.size() && r.up[ch[j]] == r.up[ch[k]] && r.code[ch[j]] == r.code[ch[k]]) ++j;
      for (std::size_t m = k; m + 1 < j; ++m) {
        std::vector<int> perm(n);
        for (int v = 0; v < n; ++v) perm[v] = v;
        map_subtrees(r, ch[m], r, ch[m + 1], perm);
        map_subtrees(r, ch[m + 1], r, ch[m], perm);
        gens.push_back(std::move(perm));
      }
      k = j;
    }
  }
}

std::vector<int> centre_vertices(const MetricTree& t) {
  const int n = t.num_vertices();
  std::vector<Rat> ecc(n, Rat{0});
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u)
      if (t.distance(v, u) > ecc[v]) ecc[v] = t.distance(v, u);
  Rat best = *std::min_element(ecc.begin(), ecc.end());
  std::vector<int> centre;
  for (int v = 0; v < n; ++v)
    if (ecc[v] == best) centre.push_back(v);
  return centre;
}

// Vertices movable by the automorphisms fixing every vertex of `fixed`
// (a set closed under paths to the root): a vertex moves iff some vertex on
// its path from the root has an identically shaped sibling it may swap with.
std::vector<char> movable_under_stabilizer(const Rooted& r, const std::vector<char>& fixed) {
  const int n = static_cast<int>(r.parent.size());
  std::vector<char> mv(n, 0);
  for (int p : r.order) {
    std::map<std::pair<Rat, int>, int> cnt;
    for (int q : r.children[p])
      if (!fixed[q]) ++cnt[{r.up[q], r.code[q]}];
    for (int q : r.children[p]) {
      if (fixed[q])
        mv[q] = 0;
      else
        mv[q] = mv[p] || cnt[{r.up[q], r.code[q]}] >= 2;
    }
  }
  return mv;
}

}  // namespace

TreeAutGroup tree_automorphisms(const MetricTree& t) {
  TreeAutGroup g;
  const int n = t.num_vertices();
  if (n == 1) return g;
  CodeMap codes;
  auto centre = centre_vertices(t);
  Rooted r1 = root_at(t, centre.front(), codes);
  g.order = rooted_order(r1);
  sibling_swap_generators(r1, n, g.generators);
  if (centre.size() == 2) {
    // Automorphisms may also exchange the two centre halves.
    Rooted r2 = root_at(t, centre.back(), codes);
    if (r1.code[centre.back()] == r2.code[centre.front()]) {
      g.order = mul_checked(g.order, 2);
      std::vector<int> perm(n, -1);
      map_subtrees(r1, centre.back(), r2, centre.front(), perm);
      std::vector<std::pair<int, int>> half;
      for (int v = 0; v < n; ++v)
        if (perm[v] >= 0) half.push_back({v, perm[v]});
      for (auto [v, w] : half) perm[w] = v;
      g.generators.push_back(std::move(perm));
    }
  }
  return g;
}

RecoveryReport verify_recovery_criteria(const MetricTree& t) {
  RecoveryReport rep;
  const int n = t.num_vertices();
  rep.centre = centre_vertices(t);
  rep.isolated.assign(n, 0);

  std::vector<Rooted> rooted;
  rooted.reserve(n);
  CodeMap codes;
  for (int x = 0; x < n; ++x) rooted.push_back(root_at(t, x, codes));

  for (int x = 0; x < n; ++x) {
    std::vector<char> fixed(n, 0);
    fixed[x] = 1;
    auto mv = movable_under_stabilizer(rooted[x], fixed);
    rep.isolated[x] = std::count(mv.begin(), mv.end(), 0) == 1;
  }

  std::vector<int> branch;
  for (int v = 0; v < n; ++v)
    if (t.degree(v) >= 3) branch.push_back(v);
  auto is_centre = [&](int v) {
    return std::find(rep.centre.begin(), rep.centre.end(), v) != rep.centre.end();
  };

  for (std::size_t i = 0; i < branch.size(); ++i)
    for (std::size_t j = i + 1; j < branch.size(); ++j) {
      int x = branch[i], y = branch[j];
      auto path = t.vertex_path(x, y);
      std::vector<char> fixed(n, 0);
      for (int p : path) fixed[p] = 1;
      auto mv = movable_under_stabilizer(rooted[x], fixed);
      std::vector<int> fixed_branch;
      for (int b : branch)
        if (!mv[b]) fixed_branch.push_back(b);
      RecoveryReport::PairCheck pc;
      pc.x = x;
      pc.y = y;
      pc.criterion = fixed_branch == std::vector<int>{x, y};
      pc.adjacent = std::none_of(path.begin() + 1, path.end() - 1,
                                 [&](int p) { return t.degree(p) >= 3; });
      if (is_centre(x) || is_centre(y)) {
        if (pc.criterion == pc.adjacent)
          ++rep.interior_agreements;
        else
          ++rep.interior_disagreements;
      }
      rep.branch_pairs.push_back(pc);
    }

  std::vector<int> interior_branch;
  for (int v : rep.centre)
    if (t.degree(v) >= 3) interior_branch.push_back(v);
  std::vector<int> isolated_set;
  for (int v = 0; v < n; ++v)
    if (rep.isolated[v]) isolated_set.push_back(v);
  rep.interior_isolated_match = interior_branch == isolated_set;

  auto aut = tree_automorphisms(t);
  std::vector<int> ends;
  for (int v = 0; v < n; ++v)
    if (t.is_end(v)) ends.push_back(v);
  if (ends.size() <= 1) {
    rep.ends_transitive = true;
  } else {
    std::set<int> orbit{ends.front()};
    std::vector<int> stack{ends.front()};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const auto& gperm : aut.generators)
        if (orbit.insert(gperm[v]).second) stack.push_back(gperm[v]);
    }
    rep.ends_transitive =
        std::all_of(ends.begin(), ends.end(), [&](int e) { return orbit.count(e) > 0; });
  }
  rep.caveat =
      "criteria evaluated against the automorphism group of a finite truncation: "
      "every automorphism fixes the centre, so isolation and adjacency are only "
      "assessed at interior (centre) vertices; the underlying statements concern "
      "trees without boundary";
  return rep;
}

CommonEndReport common_end(const MetricTree& t, const std::vector<TreeApartment>& fam,
                           const Rat& r) {
  if (fam.empty()) throw std::invalid_argument("tree: empty apartment family");
  if (r < Rat{0}) throw std::invalid_argument("tree: negative radius");
  const int n = t.num_vertices();
  // d(v, A) per apartment; apartments contain whole edges, so vertex distances
  // suffice and each edge sees a linear restriction.
  std::vector<std::vector<Rat>> dist_to(fam.size(), std::vector<Rat>(n, Rat{0}));
  for (std::size_t a = 0; a < fam.size(); ++a)
    for (int v = 0; v < n; ++v) {
      Rat best = t.distance(v, fam[a].path.front());
      for (int p : fam[a].path)
        if (t.distance(v, p) < best) best = t.distance(v, p);
      dist_to[a][v] = best;
    }
  auto worst = [&](int v) {
    Rat w = dist_to[0][v];
    for (std::size_t a = 1; a < fam.size(); ++a)
      if (dist_to[a][v] > w) w = dist_to[a][v];
    return w;
  };

  CommonEndReport rep;
  std::vector<TreePoint> candidates;
  for (int v = 0; v < n; ++v)
    if (worst(v) <= r) {
      candidates.push_back(TreePoint::at_vertex(v));
      if (t.is_end(v)) rep.ends.push_back(v);
    }
  if (!rep.ends.empty()) return rep;

  for (int e = 0; e < static_cast<int>(t.edges().size()); ++e) {
    const auto& edge = t.edges()[e];
    Rat lo{0}, hi = edge.length;
    for (std::size_t a = 0; a < fam.size(); ++a) {
      Rat du = dist_to[a][edge.u], dv = dist_to[a][edge.v];
      if (du == Rat{0} && dv == Rat{0}) continue;  // edge inside the apartment
      if (dv > du) {
        // d = du + offset; need offset <= r - du.
        Rat bound = r - du;
        if (bound < hi) hi = bound;
      } else {
        // d = dv + (length - offset); need offset >= length - (r - dv).
        Rat bound = edge.length - (r - dv);
        if (bound > lo) lo = bound;
      }
    }
    if (lo > hi) continue;
    if (lo < Rat{0}) lo = Rat{0};
    if (hi > edge.length) hi = edge.length;
    candidates.push_back(edge_point(t, e, lo));
    candidates.push_back(edge_point(t, e, hi));
  }

  rep.bounded = true;
  if (candidates.empty()) {
    rep.empty = true;
    return rep;
  }
  for (std::size_t i = 0; i < candidates.size(); ++i)
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      Rat d = point_distance(t, candidates[i], candidates[j]);
      if (d > rep.diameter) rep.diameter = d;
    }
  return rep;
}

MetricTree cone_tree(const std::vector<std::string>& labels, const Rat& radius) {
  if (labels.size() < 2) throw std::invalid_argument("tree: cone needs at least 2 labels");
  if (radius <= Rat{0}) throw std::invalid_argument("tree: nonpositive edge length");
  TreeSpec spec;
  spec.vertices.push_back(0);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    int v = static_cast<int>(k) + 1;
    spec.vertices.push_back(v);
    spec.edges.push_back({0, v, radius});
    spec.ends.push_back(v);
  }
  MetricTree t(spec);
  t.names.resize(labels.size() + 1);
  t.names[0] = "*";
  for (std::size_t k = 0; k < labels.size(); ++k) t.names[k + 1] = labels[k];
  return t;
}

}  // namespace bldg
