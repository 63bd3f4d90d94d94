#include "bldg/building.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace bldg {
namespace {

// Set of generator types occurring in the normal form (well defined for
// reduced words).
std::vector<int> support(const ElementTable& t, int e) {
  std::set<int> s(t.word(e).begin(), t.word(e).end());
  return {s.begin(), s.end()};
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

bool Apartment::contains(int c) const {
  return std::binary_search(chambers.begin(), chambers.end(), c);
}

Building::Building(CoxeterSystem w, int num_chambers,
                   std::vector<std::vector<std::vector<int>>> panels_by_type)
    : w_(std::move(w)),
      table_(std::make_shared<ElementTable>(w_)),
      num_chambers_(num_chambers),
      panels_(std::move(panels_by_type)) {
  if (num_chambers_ < 1) throw std::invalid_argument("building: no chambers");
  if (static_cast<int>(panels_.size()) != w_.rank())
    throw std::invalid_argument("building: one panel partition per type required");
  panel_of_.assign(w_.rank(), std::vector<int>(num_chambers_, -1));
  for (int i = 0; i < w_.rank(); ++i) {
    for (std::size_t p = 0; p < panels_[i].size(); ++p) {
      auto& block = panels_[i][p];
      std::sort(block.begin(), block.end());
      if (block.size() < 2) throw std::invalid_argument("building: panel with fewer than 2 chambers");
      for (int c : block) {
        if (c < 0 || c >= num_chambers_) throw std::invalid_argument("building: chamber id out of range");
        if (panel_of_[i][c] != -1) throw std::invalid_argument("building: panel blocks overlap");
        panel_of_[i][c] = static_cast<int>(p);
      }
    }
    for (int c = 0; c < num_chambers_; ++c)
      if (panel_of_[i][c] < 0) throw std::invalid_argument("building: chamber missing from a panel partition");
  }
  // All-pairs W-distance by BFS, then the gate check on every panel from
  // every chamber; together these certify the chamber system is a building.
  delta_.assign(num_chambers_, std::vector<int>(num_chambers_, -1));
  for (int src = 0; src < num_chambers_; ++src) {
    auto& row = delta_[src];
    row[src] = table_->identity();
    std::queue<int> q;
    q.push(src);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int i = 0; i < w_.rank(); ++i) {
        int next = table_->mul_gen(row[x], i);
        for (int y : panel_chambers(i, x)) {
          if (y == x || row[y] != -1) continue;
          if (table_->length(next) <= table_->length(row[x]))
            throw std::runtime_error("building: W-distance ill defined (panel not gated)");
          row[y] = next;
          q.push(y);
        }
      }
    }
    for (int c = 0; c < num_chambers_; ++c)
      if (row[c] < 0) throw std::invalid_argument("building: chamber graph not connected");
    for (int i = 0; i < w_.rank(); ++i) {
      for (const auto& block : panels_[i]) {
        int gate = -1;
        for (int c : block)
          if (gate < 0 || table_->length(row[c]) < table_->length(row[gate])) gate = c;
        int far = table_->mul_gen(row[gate], i);
        for (int c : block) {
          if (c == gate) continue;
          if (row[c] != far) throw std::runtime_error("building: W-distance ill defined (panel not gated)");
        }
      }
    }
  }
}

SimplexRef make_simplex(const Building& b, int chamber, std::vector<int> cotype) {
  std::sort(cotype.begin(), cotype.end());
  cotype.erase(std::unique(cotype.begin(), cotype.end()), cotype.end());
  for (int i : cotype)
    if (i < 0 || i >= b.num_types()) throw std::invalid_argument("simplex: bad cotype");
  SimplexRef ref{chamber, std::move(cotype)};
  ref.chamber = residue_chambers(b, SimplexRef{chamber, ref.cotype}).front();
  return ref;
}

std::vector<int> residue_chambers(const Building& b, const SimplexRef& a) {
  std::vector<int> out{a.chamber};
  std::set<int> seen{a.chamber};
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (int i : a.cotype)
      for (int y : b.panel_chambers(i, out[head]))
        if (seen.insert(y).second) out.push_back(y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Building coxeter_complex(const CoxeterSystem& w) {
  if (!is_spherical(w)) throw std::invalid_argument("coxeter_complex: non-spherical system");
  ElementTable t(w);
  std::vector<std::vector<std::vector<int>>> panels(w.rank());
  for (int i = 0; i < w.rank(); ++i) {
    std::vector<bool> seen(t.size(), false);
    for (int e = 0; e < t.size(); ++e) {
      if (seen[e]) continue;
      int f = t.mul_gen(e, i);
      seen[e] = seen[f] = true;
      panels[i].push_back({e, f});
    }
  }
  return Building(w, t.size(), std::move(panels));
}

Building rank_one_building(int n) {
  if (n < 2) throw std::invalid_argument("rank_one_building: need >= 2 chambers");
  std::vector<int> all(n);
  for (int c = 0; c < n; ++c) all[c] = c;
  return Building(CoxeterSystem(std::vector<std::vector<int>>{{1}}), n, {{all}});
}

Building building_from_incidence(const std::vector<int>& points,
                                 const std::vector<std::vector<int>>& lines, int gonality) {
  if (gonality < 2) throw std::invalid_argument("incidence: gonality must be >= 2");
  const int np = static_cast<int>(points.size());
  std::map<int, int> pidx;
  for (int k = 0; k < np; ++k)
    if (!pidx.emplace(points[k], k).second) throw std::invalid_argument("incidence: duplicate point id");
  const int nl = static_cast<int>(lines.size());
  // Bipartite incidence graph: vertices 0..np-1 points, np..np+nl-1 lines.
  std::vector<std::vector<int>> adj(np + nl);
  for (int l = 0; l < nl; ++l) {
    std::set<int> on_line;
    for (int pid : lines[l]) {
      auto it = pidx.find(pid);
      if (it == pidx.end()) throw std::invalid_argument("incidence: line through unknown point");
      if (!on_line.insert(it->second).second)
        throw std::invalid_argument("incidence: repeated point on a line");
    }
    for (int p : on_line) {
      adj[p].push_back(np + l);
      adj[np + l].push_back(p);
    }
  }
  // Generalized m-gon gate: connected, girth 2m, diameter m.
  const int nv = np + nl;
  int diameter = 0;
  int girth = -1;
  for (int src = 0; src < nv; ++src) {
    std::vector<int> dist(nv, -1), parent(nv, -1);
    std::queue<int> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int y : adj[x]) {
        if (dist[y] < 0) {
          dist[y] = dist[x] + 1;
          parent[y] = x;
          q.push(y);
        } else if (y != parent[x]) {
          int cyc = dist[x] + dist[y] + 1;
          if (girth < 0 || cyc < girth) girth = cyc;
        }
      }
    }
    for (int v = 0; v < nv; ++v) {
      if (dist[v] < 0) throw std::invalid_argument("incidence: graph not connected");
      diameter = std::max(diameter, dist[v]);
    }
  }
  // Cross-edges at equal depth give odd lengths; bipartite girth is even.
  if (girth != 2 * gonality || diameter != gonality)
    throw std::invalid_argument("incidence: not a generalized " + std::to_string(gonality) +
                                "-gon (girth " + std::to_string(girth) + ", diameter " +
                                std::to_string(diameter) + ")");
  // Chambers are flags, ordered by (point index, line index).
  std::vector<std::pair<int, int>> flags;
  for (int p = 0; p < np; ++p)
    for (int v : adj[p]) flags.emplace_back(p, v - np);
  std::sort(flags.begin(), flags.end());
  std::map<std::pair<int, int>, int> flag_id;
  for (std::size_t k = 0; k < flags.size(); ++k) flag_id[flags[k]] = static_cast<int>(k);
  // Type 0 varies the point (fix the line); type 1 varies the line.
  std::vector<std::vector<std::vector<int>>> panels(2);
  for (int l = 0; l < nl; ++l) {
    std::vector<int> block;
    for (int p : adj[np + l]) block.push_back(flag_id[{p, l}]);
    panels[0].push_back(std::move(block));
  }
  for (int p = 0; p < np; ++p) {
    std::vector<int> block;
    for (int v : adj[p]) block.push_back(flag_id[{p, v - np}]);
    panels[1].push_back(std::move(block));
  }
  CoxeterSystem w({{1, gonality}, {gonality, 1}});
  return Building(std::move(w), static_cast<int>(flags.size()), std::move(panels));
}

Building join(const Building& b1, const Building& b2) {
  const int r1 = b1.num_types(), r2 = b2.num_types();
  const int n1 = b1.num_chambers(), n2 = b2.num_chambers();
  std::vector<std::vector<int>> m(r1 + r2, std::vector<int>(r1 + r2, 2));
  for (int i = 0; i < r1; ++i)
    for (int j = 0; j < r1; ++j) m[i][j] = b1.coxeter().order(i, j);
  for (int i = 0; i < r2; ++i)
    for (int j = 0; j < r2; ++j) m[r1 + i][r1 + j] = b2.coxeter().order(i, j);
  std::vector<std::vector<std::vector<int>>> panels(r1 + r2);
  for (int i = 0; i < r1; ++i)
    for (const auto& block : b1.panels(i))
      for (int c2 = 0; c2 < n2; ++c2) {
        std::vector<int> nb;
        for (int c1 : block) nb.push_back(c1 * n2 + c2);
        panels[i].push_back(std::move(nb));
      }
  for (int i = 0; i < r2; ++i)
    for (const auto& block : b2.panels(i))
      for (int c1 = 0; c1 < n1; ++c1) {
        std::vector<int> nb;
        for (int c2 : block) nb.push_back(c1 * n2 + c2);
        panels[r1 + i].push_back(std::move(nb));
      }
  return Building(CoxeterSystem(std::move(m)), n1 * n2, std::move(panels));
}

WDistance w_distance(const Building& b, int c, int d) {
  WDistance out;
  out.element = b.delta(c, d);
  out.gallery.push_back(c);
  int cur = c;
  while (cur != d) {
    int s = b.table().word(b.delta(cur, d))[0];
    // Step to the gate of the s-panel seen from d.
    int next = -1;
    for (int y : b.panel_chambers(s, cur))
      if (y != cur && b.gallery_distance(y, d) < b.gallery_distance(cur, d)) {
        next = y;
        break;
      }
    if (next < 0) throw std::runtime_error("w_distance: no descending step (corrupt data)");
    out.gallery.push_back(next);
    cur = next;
  }
  return out;
}

int project_chamber(const Building& b, const SimplexRef& a, int c) {
  int best = -1;
  bool tie = false;
  for (int x : residue_chambers(b, a)) {
    if (best < 0 || b.gallery_distance(c, x) < b.gallery_distance(c, best)) {
      best = x;
      tie = false;
    } else if (b.gallery_distance(c, x) == b.gallery_distance(c, best)) {
      tie = true;
    }
  }
  if (tie) throw std::runtime_error("project_chamber: gate not unique (corrupt data)");
  return best;
}

SimplexRef project_simplex(const Building& b, const SimplexRef& a, const SimplexRef& bb) {
  std::vector<int> gates;
  for (int c : residue_chambers(b, bb)) gates.push_back(project_chamber(b, a, c));
  std::sort(gates.begin(), gates.end());
  gates.erase(std::unique(gates.begin(), gates.end()), gates.end());
  // Largest common face of the gates = smallest residue containing them all.
  std::set<int> cotype;
  for (int g : gates) {
    auto sup = support(b.table(), b.delta(gates.front(), g));
    cotype.insert(sup.begin(), sup.end());
  }
  return make_simplex(b, gates.front(), {cotype.begin(), cotype.end()});
}

Apartment hull_apartment(const Building& b, int c, int d) {
  const auto& t = b.table();
  if (!b.opposite_chambers(c, d)) throw std::invalid_argument("hull_apartment: chambers not opposite");
  Apartment a;
  for (int x = 0; x < b.num_chambers(); ++x) {
    int u = b.delta(c, x), v = b.delta(x, d);
    if (t.length(u) + t.length(v) == t.length(t.longest()) && t.mul(u, v) == t.longest())
      a.chambers.push_back(x);
  }
  if (static_cast<int>(a.chambers.size()) != t.size())
    throw std::runtime_error("hull_apartment: hull is not an apartment (corrupt data)");
  for (int i = 0; i < b.num_types(); ++i)
    for (int x : a.chambers) {
      int count = 0;
      for (int y : b.panel_chambers(i, x))
        if (a.contains(y)) ++count;
      if (count != 2) throw std::runtime_error("hull_apartment: hull not thin (corrupt data)");
    }
  return a;
}

Apartment apartment_containing(const Building& b, int c, int d) {
  int e = d;
  while (!b.opposite_chambers(c, e)) {
    int next = -1;
    for (int i = 0; i < b.num_types(); ++i)
      for (int y : b.panel_chambers(i, e))
        if (b.gallery_distance(c, y) > b.gallery_distance(c, e) && (next < 0 || y < next)) next = y;
    if (next < 0) throw std::runtime_error("apartment_containing: no distance-increasing step");
    e = next;
  }
  return hull_apartment(b, c, e);
}

std::vector<Apartment> enumerate_apartments(const Building& b, std::size_t cap) {
  std::set<std::vector<int>> seen;
  std::vector<Apartment> out;
  for (int c = 0; c < b.num_chambers(); ++c)
    for (int d = c + 1; d < b.num_chambers(); ++d) {
      if (!b.opposite_chambers(c, d)) continue;
      Apartment a = hull_apartment(b, c, d);
      if (seen.insert(a.chambers).second) {
        out.push_back(std::move(a));
        if (out.size() > cap) throw std::runtime_error("enumerate_apartments: cap exceeded");
      }
    }
  return out;
}

int antipode_in(const Building& b, const Apartment& a, int c) {
  for (int x : a.chambers)
    if (b.opposite_chambers(c, x)) return x;
  throw std::invalid_argument("antipode_in: chamber has no antipode in the apartment");
}

SimplexRef antipode_simplex(const Building& b, const Apartment& a, const SimplexRef& s) {
  int ch = -1;
  for (int x : a.chambers)
    if (subset_of(support(b.table(), b.delta(s.chamber, x)), s.cotype)) {
      ch = x;
      break;
    }
  if (ch < 0) throw std::invalid_argument("antipode_simplex: simplex not in the apartment");
  auto sigma = opposition_involution(b.coxeter(), b.table());
  std::vector<int> cotype;
  for (int i : s.cotype) cotype.push_back(sigma[i]);
  return make_simplex(b, antipode_in(b, a, ch), std::move(cotype));
}

bool are_opposite(const Building& b, const SimplexRef& x, const SimplexRef& y) {
  auto sigma = opposition_involution(b.coxeter(), b.table());
  std::vector<int> want;
  for (int i : x.cotype) want.push_back(sigma[i]);
  std::sort(want.begin(), want.end());
  if (want != y.cotype) return false;
  Apartment a = apartment_containing(b, x.chamber, y.chamber);
  return antipode_simplex(b, a, x) == y;
}

ThicknessReport thickness_report(const Building& b) {
  ThicknessReport r;
  r.min_panel = b.num_chambers() + 1;
  for (int i = 0; i < b.num_types(); ++i)
    for (const auto& block : b.panels(i)) {
      r.min_panel = std::min(r.min_panel, static_cast<int>(block.size()));
      r.max_panel = std::max(r.max_panel, static_cast<int>(block.size()));
    }
  r.is_thick = r.min_panel >= 3;
  return r;
}

ThicknessReport thickness_report(const Building& b, const Apartment& a) {
  if (static_cast<int>(a.chambers.size()) != b.table().size())
    throw std::invalid_argument("thickness_report: not an apartment");
  for (int x : a.chambers) {
    for (int i = 0; i < b.num_types(); ++i) {
      int ok = 0;
      for (int y : a.chambers)
        if (y != x && b.panel_index(i, y) == b.panel_index(i, x)) ++ok;
      if (ok != 1) throw std::invalid_argument("thickness_report: not an apartment");
    }
  }
  ThicknessReport r;
  r.min_panel = b.num_chambers() + 1;
  for (int i = 0; i < b.num_types(); ++i) {
    std::set<int> blocks;
    for (int x : a.chambers) blocks.insert(b.panel_index(i, x));
    for (int p : blocks) {
      int size = static_cast<int>(b.panels(i)[p].size());
      r.min_panel = std::min(r.min_panel, size);
      r.max_panel = std::max(r.max_panel, size);
    }
  }
  r.is_thick = r.min_panel >= 3;
  return r;
}

MorphismReport check_morphism(const Building& b, const Building& target, const ChamberMap& f) {
  if (static_cast<int>(f.image.size()) != b.num_chambers())
    throw std::invalid_argument("check_morphism: map not defined on all chambers");
  if (static_cast<int>(f.type_map.size()) != b.num_types())
    throw std::invalid_argument("check_morphism: type correspondence incomplete");
  for (int c : f.image)
    if (c < 0 || c >= target.num_chambers())
      throw std::invalid_argument("check_morphism: image chamber out of range");
  for (int j : f.type_map)
    if (j < -1 || j >= target.num_types())
      throw std::invalid_argument("check_morphism: bad type correspondence");
  MorphismReport rep;
  rep.is_morphism = true;
  rep.is_nondegenerate = true;
  for (int i = 0; i < b.num_types(); ++i) {
    const int j = f.type_map[i];
    if (j < 0) rep.is_nondegenerate = false;  // the whole type collapses
    for (const auto& block : b.panels(i))
      for (int x : block)
        for (int y : block) {
          if (x >= y) continue;
          if (f.image[x] == f.image[y]) {
            rep.is_nondegenerate = false;
          } else if (j < 0 || target.panel_index(j, f.image[x]) != target.panel_index(j, f.image[y])) {
            rep.is_morphism = false;
          }
        }
  }
  // Panel criterion: the restriction to every panel is surjective onto the
  // image chamber's panel; with a connected target this certifies an
  // epimorphism. Every target type must be reached by the correspondence.
  std::vector<bool> covered(target.num_types(), false);
  for (int j : f.type_map)
    if (j >= 0) covered[j] = true;
  bool panel_epi = std::all_of(covered.begin(), covered.end(), [](bool v) { return v; });
  for (int i = 0; panel_epi && i < b.num_types(); ++i) {
    const int j = f.type_map[i];
    if (j < 0) continue;
    for (const auto& block : b.panels(i)) {
      std::set<int> image;
      for (int x : block) image.insert(f.image[x]);
      for (int y : target.panel_chambers(j, f.image[block.front()]))
        if (!image.count(y)) {
          panel_epi = false;
          break;
        }
      if (!panel_epi) break;
    }
  }
  rep.is_epimorphism = rep.is_morphism && panel_epi;
  std::set<int> image_set(f.image.begin(), f.image.end());
  rep.direct_surjective = static_cast<int>(image_set.size()) == target.num_chambers();
  return rep;
}

std::vector<DiagramFactor> diagram_factorization(const Building& b) {
  const int n = b.num_types();
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (int i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    std::queue<int> q;
    q.push(i);
    comp[i] = ncomp;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int j = 0; j < n; ++j)
        if (comp[j] < 0 && b.coxeter().order(v, j) != 2) {
          comp[j] = ncomp;
          q.push(j);
        }
    }
    ++ncomp;
  }
  std::vector<DiagramFactor> out(ncomp);
  for (int i = 0; i < n; ++i) out[comp[i]].types.push_back(i);
  for (auto& factor : out) {
    const int k = static_cast<int>(factor.types.size());
    std::vector<std::vector<int>> sub(k, std::vector<int>(k));
    for (int a = 0; a < k; ++a)
      for (int c = 0; c < k; ++c) sub[a][c] = b.coxeter().order(factor.types[a], factor.types[c]);
    factor.label = classify_diagram(CoxeterSystem(std::move(sub))).components.front();
    factor.thin = true;
    for (int i : factor.types)
      for (const auto& block : b.panels(i))
        if (block.size() != 2) factor.thin = false;
  }
  return out;
}

}  // namespace bldg
