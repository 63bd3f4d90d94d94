#include "bldg/projectivity.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bldg {
namespace {

int lookup(const std::vector<int>& domain, const std::vector<int>& image, int chamber) {
  auto it = std::lower_bound(domain.begin(), domain.end(), chamber);
  if (it == domain.end() || *it != chamber)
    throw std::invalid_argument("projectivity: chamber not in the domain residue");
  return image[it - domain.begin()];
}

// All panels of the building, grouped for opposition scans.
std::vector<SimplexRef> all_panels(const Building& b) {
  std::vector<SimplexRef> out;
  std::set<SimplexRef> seen;
  for (int i = 0; i < b.num_types(); ++i)
    for (const auto& block : b.panels(i)) {
      SimplexRef ref = make_simplex(b, block.front(), {i});
      if (seen.insert(ref).second) out.push_back(ref);
    }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

int Projectivity::apply(int chamber) const { return lookup(domain, image, chamber); }

int PartialChamberMap::apply(int chamber) const { return lookup(domain, image, chamber); }

Projectivity perspectivity(const Building& b, const SimplexRef& from, const SimplexRef& to) {
  if (!are_opposite(b, from, to)) throw std::invalid_argument("perspectivity: panels not opposite");
  Projectivity p;
  p.path = {from, to};
  p.domain = residue_chambers(b, from);
  for (int c : p.domain) p.image.push_back(project_chamber(b, to, c));
  return p;
}

Projectivity compose_path(const Building& b, const std::vector<SimplexRef>& path) {
  if (path.empty()) throw std::invalid_argument("compose_path: empty path");
  Projectivity p;
  p.path = {path.front()};
  p.domain = residue_chambers(b, path.front());
  p.image = p.domain;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    Projectivity step = perspectivity(b, path[k], path[k + 1]);
    for (int& c : p.image) c = step.apply(c);
    p.path.push_back(path[k + 1]);
  }
  return p;
}

namespace {

// One half of the explicit 2-transitivity construction: given the minimal
// gallery x -i- a -j- c -i- d, produce the panel t in a chamber e outside an
// apartment through the gallery, opposite both r and q = c cap d.
SimplexRef knarr_half(const Building& bu, const SimplexRef& r, const SimplexRef& q, int x, int a,
                      int c, int d, int j) {
  Apartment apt = apartment_containing(bu, x, d);
  if (!apt.contains(a) || !apt.contains(c))
    throw std::runtime_error("knarr: apartment misses the gallery (corrupt data)");
  SimplexRef p = make_simplex(bu, a, {j});
  SimplexRef s = antipode_simplex(bu, apt, p);
  int e = -1;
  for (int cand : residue_chambers(bu, s))
    if (!apt.contains(cand)) {
      e = cand;
      break;
    }
  if (e < 0) throw std::invalid_argument("knarr: building not thick at the opposite panel");
  // The unique panel of e opposite both r and q.
  SimplexRef t;
  bool found = false;
  for (int k = 0; k < bu.num_types(); ++k) {
    SimplexRef cand = make_simplex(bu, e, {k});
    if (are_opposite(bu, cand, r) && are_opposite(bu, cand, q)) {
      if (found) throw std::runtime_error("knarr: doubly opposite panel not unique");
      t = cand;
      found = true;
    }
  }
  if (!found) throw std::runtime_error("knarr: no panel of e opposite r and q");
  return t;
}

}  // namespace

Projectivity knarr_projectivity(const Building& bu, const SimplexRef& r, int a, int b, int b2) {
  if (r.cotype.size() != 1) throw std::invalid_argument("knarr: r is not a panel");
  const int i = r.cotype[0];
  if (bu.coxeter().is_isolated(i)) throw std::invalid_argument("knarr: panel type is isolated");
  if (a == b || a == b2 || b == b2) throw std::invalid_argument("knarr: chambers must be distinct");
  auto res = residue_chambers(bu, r);
  for (int c : {a, b, b2})
    if (!std::binary_search(res.begin(), res.end(), c))
      throw std::invalid_argument("knarr: chamber not in Res(r)");
  int j = -1;
  for (int k = 0; k < bu.num_types(); ++k)
    if (k != i && bu.coxeter().order(i, k) >= 3) {
      j = k;
      break;
    }
  if (j < 0) throw std::invalid_argument("knarr: panel type is isolated");
  // Nonstammering gallery b -i- a -j- c -i- d, least-id choices.
  int c = -1;
  for (int y : bu.panel_chambers(j, a))
    if (y != a) {
      c = y;
      break;
    }
  int d = -1;
  for (int y : bu.panel_chambers(i, c))
    if (y != c) {
      d = y;
      break;
    }
  SimplexRef q = make_simplex(bu, c, {i});
  SimplexRef t = knarr_half(bu, r, q, b, a, c, d, j);
  SimplexRef t2 = knarr_half(bu, r, q, b2, a, c, d, j);
  return compose_path(bu, {r, t, q, t2, r});
}

PanelGroupReport projectivity_group(const Building& b, const SimplexRef& r, int max_path_len,
                                    std::size_t closure_cap) {
  if (max_path_len < 2 || max_path_len % 2 != 0)
    throw std::invalid_argument("projectivity_group: path bound must be even and >= 2");
  PanelGroupReport rep;
  rep.panel = r;
  rep.max_path_len = max_path_len;
  auto domain = residue_chambers(b, r);
  const int n = static_cast<int>(domain.size());
  rep.residue_size = n;
  auto index_of = [&](int chamber) {
    return static_cast<int>(std::lower_bound(domain.begin(), domain.end(), chamber) - domain.begin());
  };

  // Opposition graph on panels, restricted to nodes reachable from r.
  auto panels = all_panels(b);
  std::map<SimplexRef, std::vector<SimplexRef>> opp;
  std::vector<SimplexRef> frontier{r};
  std::set<SimplexRef> seen{r};
  while (!frontier.empty()) {
    SimplexRef cur = frontier.back();
    frontier.pop_back();
    auto& nbrs = opp[cur];
    for (const auto& other : panels)
      if (are_opposite(b, cur, other)) {
        nbrs.push_back(other);
        if (seen.insert(other).second) frontier.push_back(other);
      }
  }

  // All closed paths from r of length <= max_path_len; record permutation
  // of Res(r) indices plus the parity of the shortest path realizing it.
  std::set<std::pair<std::vector<int>, int>> raw;
  std::vector<int> ident(n);
  for (int k = 0; k < n; ++k) ident[k] = k;
  struct Node {
    SimplexRef at;
    std::vector<int> chambers;  // image of domain under the path so far
    int len;
  };
  std::vector<Node> stack{{r, domain, 0}};
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (node.at == r && node.len > 0) {
      std::vector<int> perm(n);
      for (int k = 0; k < n; ++k) perm[k] = index_of(node.chambers[k]);
      raw.insert({perm, node.len % 2});
    }
    if (node.len == max_path_len) continue;
    for (const auto& next : opp.at(node.at)) {
      Projectivity step = perspectivity(b, node.at, next);
      Node child{next, node.chambers, node.len + 1};
      for (int& c : child.chambers) c = step.apply(c);
      stack.push_back(std::move(child));
    }
  }

  std::vector<std::vector<int>> gens, even_gens;
  for (const auto& [perm, parity] : raw) {
    if (perm != ident) gens.push_back(perm);
    if (parity == 0 && perm != ident) even_gens.push_back(perm);
  }
  rep.generators = gens;

  auto closure_order = [&](const std::vector<std::vector<int>>& generators) -> long long {
    std::set<std::vector<int>> group{ident};
    std::vector<std::vector<int>> todo{ident};
    while (!todo.empty()) {
      auto g = std::move(todo.back());
      todo.pop_back();
      for (const auto& h : generators) {
        std::vector<int> gh(n);
        for (int k = 0; k < n; ++k) gh[k] = h[g[k]];
        if (group.insert(gh).second) {
          if (group.size() > closure_cap) throw std::runtime_error("projectivity_group: closure cap exceeded");
          todo.push_back(std::move(gh));
        }
      }
    }
    return static_cast<long long>(group.size());
  };
  rep.group_order = closure_order(gens);
  rep.even_order = even_gens.empty() ? 1 : closure_order(even_gens);

  // Transitivity by direct orbit computation under the full closure.
  std::set<std::vector<int>> group{ident};
  std::vector<std::vector<int>> todo{ident};
  while (!todo.empty()) {
    auto g = std::move(todo.back());
    todo.pop_back();
    for (const auto& h : gens) {
      std::vector<int> gh(n);
      for (int k = 0; k < n; ++k) gh[k] = h[g[k]];
      if (group.insert(gh).second) todo.push_back(std::move(gh));
    }
  }
  std::set<int> orbit0;
  std::set<std::pair<int, int>> orbit01;
  for (const auto& g : group) {
    orbit0.insert(g[0]);
    if (n >= 2) orbit01.insert({g[0], g[1]});
  }
  rep.transitive = static_cast<int>(orbit0.size()) == n;
  rep.two_transitive =
      n >= 2 && static_cast<long long>(orbit01.size()) == static_cast<long long>(n) * (n - 1);
  return rep;
}

BetweenBuilding between_building(const Building& bu, const SimplexRef& a, const SimplexRef& b) {
  if (!are_opposite(bu, a, b)) throw std::invalid_argument("between_building: panels not opposite");
  BetweenBuilding out;
  out.a = a;
  out.b = b;
  auto res = residue_chambers(bu, a);
  std::set<int> chambers;
  for (std::size_t x = 0; x < res.size(); ++x)
    for (std::size_t y = x + 1; y < res.size(); ++y) {
      int c = res[x];
      int d2 = project_chamber(bu, b, res[y]);
      Apartment apt = hull_apartment(bu, c, d2);
      chambers.insert(apt.chambers.begin(), apt.chambers.end());
      out.apartments.push_back(std::move(apt));
      out.pairs.emplace_back(res[x], res[y]);
    }
  out.chambers.assign(chambers.begin(), chambers.end());
  return out;
}

PartialChamberMap slide_isomorphism(const Building& bu, const SimplexRef& a, const SimplexRef& b,
                                    const SimplexRef& b2) {
  BetweenBuilding src = between_building(bu, a, b);
  BetweenBuilding dst = between_building(bu, a, b2);
  PartialChamberMap f;
  f.domain = src.chambers;
  for (int c : f.domain) {
    int g = project_chamber(bu, a, c);
    int h = project_chamber(bu, b, g);
    int h2 = project_chamber(bu, b2, g);
    int target = -1;
    for (int cand : dst.chambers)
      if (bu.delta(g, cand) == bu.delta(g, c) && bu.delta(h2, cand) == bu.delta(h, c)) {
        if (target >= 0) throw std::runtime_error("slide_isomorphism: target chamber not unique");
        target = cand;
      }
    if (target < 0) throw std::runtime_error("slide_isomorphism: no target chamber (corrupt data)");
    f.image.push_back(target);
  }
  return f;
}

}  // namespace bldg
