#include "bldg/nerve.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace bldg {
namespace {

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Maximal cliques via Bron-Kerbosch with pivoting.
void bron_kerbosch(const std::vector<std::vector<bool>>& adj, std::vector<int>& r,
                   std::vector<int> p, std::vector<int> x,
                   std::vector<std::vector<int>>& out) {
  if (p.empty() && x.empty()) {
    out.push_back(r);
    return;
  }
  int pivot = p.empty() ? x.front() : p.front();
  std::vector<int> cand;
  for (int v : p)
    if (!adj[pivot][v]) cand.push_back(v);
  for (int v : cand) {
    std::vector<int> np, nx;
    for (int u : p)
      if (adj[v][u]) np.push_back(u);
    for (int u : x)
      if (adj[v][u]) nx.push_back(u);
    r.push_back(v);
    bron_kerbosch(adj, r, np, nx, out);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.push_back(v);
  }
}

}  // namespace

bool Nerve::intersects(const std::vector<int>& labels) const {
  std::vector<int> sorted(labels);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const auto& fam : families)
    if (subset_of(sorted, fam)) return true;
  return false;
}

std::vector<SimplexRef> building_vertices(const Building& b) {
  std::vector<int> all_types(b.num_types());
  for (int i = 0; i < b.num_types(); ++i) all_types[i] = i;
  std::set<SimplexRef> out;
  for (int i = 0; i < b.num_types(); ++i) {
    std::vector<int> cotype;
    for (int j : all_types)
      if (j != i) cotype.push_back(j);
    for (int c = 0; c < b.num_chambers(); ++c) out.insert(make_simplex(b, c, cotype));
  }
  return {out.begin(), out.end()};
}

Nerve apartment_complex(const Building& b, std::size_t cap) {
  auto apts = enumerate_apartments(b, cap);
  Nerve n;
  n.num_apartments = static_cast<int>(apts.size());
  std::set<std::vector<int>> fams;
  for (const auto& v : building_vertices(b)) {
    auto res = residue_chambers(b, v);
    std::vector<int> fam;
    for (int k = 0; k < n.num_apartments; ++k)
      if (std::any_of(res.begin(), res.end(), [&](int c) { return apts[k].contains(c); }))
        fam.push_back(k);
    fams.insert(std::move(fam));
  }
  // Keep only inclusion-maximal families.
  for (const auto& fam : fams) {
    bool maximal = std::none_of(fams.begin(), fams.end(), [&](const std::vector<int>& other) {
      return &other != &fam && subset_of(fam, other);
    });
    if (maximal) n.families.push_back(fam);
  }
  return n;
}

Reconstruction reconstruct_building(const Nerve& n) {
  const int nv = static_cast<int>(n.families.size());
  if (nv < 2) throw std::invalid_argument("reconstruct: too few maximal families (thin or trivial source)");
  for (const auto& fam : n.families)
    if (fam.empty()) throw std::invalid_argument("reconstruct: empty family");
  // Containment criterion: u,v are close iff every family containing the
  // intersection of the two is one of the two. This holds exactly when the
  // two vertices are adjacent or antipodal (the convex hull of the pair has
  // no third vertex), so antipodal pairs are pruned afterwards: an antipodal
  // pair lies in strictly fewer common apartments than any adjacent pair at
  // the same vertex. The final building is validated against the input
  // families below, so a wrong prune cannot pass silently.
  std::vector<std::vector<bool>> close(nv, std::vector<bool>(nv, false));
  std::vector<std::vector<int>> common_count(nv, std::vector<int>(nv, 0));
  for (int u = 0; u < nv; ++u)
    for (int v = u + 1; v < nv; ++v) {
      auto common = intersect(n.families[u], n.families[v]);
      common_count[u][v] = common_count[v][u] = static_cast<int>(common.size());
      bool ok = true;
      for (int w = 0; w < nv && ok; ++w)
        if (w != u && w != v && subset_of(common, n.families[w])) ok = false;
      close[u][v] = close[v][u] = ok;
    }
  std::vector<int> theta(nv, -1);  // the antipodal (minimal) common-apartment level
  for (int u = 0; u < nv; ++u)
    for (int v = 0; v < nv; ++v)
      if (close[u][v] && (theta[u] < 0 || common_count[u][v] < theta[u]))
        theta[u] = common_count[u][v];
  std::vector<std::vector<bool>> adj(nv, std::vector<bool>(nv, false));
  for (int u = 0; u < nv; ++u)
    for (int v = 0; v < nv; ++v)
      adj[u][v] = close[u][v] && common_count[u][v] > theta[u] && common_count[u][v] > theta[v];
  // Chambers are the maximal cliques of the 1-skeleton.
  std::vector<int> all(nv), r;
  for (int v = 0; v < nv; ++v) all[v] = v;
  std::vector<std::vector<int>> cliques;
  bron_kerbosch(adj, r, all, {}, cliques);
  for (auto& c : cliques) std::sort(c.begin(), c.end());
  std::sort(cliques.begin(), cliques.end());
  const int rank = static_cast<int>(cliques.front().size());
  for (const auto& c : cliques)
    if (static_cast<int>(c.size()) != rank)
      throw std::runtime_error("reconstruct: maximal clique sizes inconsistent (non-thick source?)");
  if (rank < 2) throw std::runtime_error("reconstruct: rank too small");
  const int nc = static_cast<int>(cliques.size());

  // Type recovery: chambers sharing rank-1 vertices are adjacent; propagate
  // a type assignment from chamber 0 over the chamber graph.
  std::vector<int> vtype(nv, -1);
  for (int k = 0; k < rank; ++k) vtype[cliques[0][k]] = k;
  std::vector<bool> done(nc, false);
  std::queue<int> q;
  done[0] = true;
  q.push(0);
  while (!q.empty()) {
    int c = q.front();
    q.pop();
    for (int d = 0; d < nc; ++d) {
      auto shared = intersect(cliques[c], cliques[d]);
      if (static_cast<int>(shared.size()) != rank - 1) continue;
      std::set<int> used;
      for (int v : shared) {
        if (vtype[v] < 0) throw std::runtime_error("reconstruct: type propagation hit an untyped vertex");
        used.insert(vtype[v]);
      }
      if (static_cast<int>(used.size()) != rank - 1)
        throw std::runtime_error("reconstruct: inconsistent vertex types");
      int missing = -1;
      for (int k = 0; k < rank; ++k)
        if (!used.count(k)) missing = k;
      for (int v : cliques[d])
        if (!std::binary_search(shared.begin(), shared.end(), v)) {
          if (vtype[v] >= 0 && vtype[v] != missing)
            throw std::runtime_error("reconstruct: inconsistent vertex types");
          vtype[v] = missing;
        }
      if (!done[d]) {
        done[d] = true;
        q.push(d);
      }
    }
  }
  for (int v = 0; v < nv; ++v)
    if (vtype[v] < 0) throw std::runtime_error("reconstruct: chamber graph not connected");

  // Panels: chambers equal outside their type-i vertex.
  std::vector<std::vector<std::vector<int>>> panels(rank);
  for (int i = 0; i < rank; ++i) {
    std::map<std::vector<int>, std::vector<int>> blocks;
    for (int c = 0; c < nc; ++c) {
      std::vector<int> key;
      for (int v : cliques[c])
        if (vtype[v] != i) key.push_back(v);
      blocks[key].push_back(c);
    }
    for (auto& [key, block] : blocks) panels[i].push_back(std::move(block));
  }

  // Coxeter matrix from the {i,j}-residue chamber graphs: the gallery
  // diameter of a rank-2 residue is its gonality.
  std::vector<std::vector<int>> m(rank, std::vector<int>(rank, 1));
  std::vector<std::vector<int>> panel_of(rank, std::vector<int>(nc, -1));
  for (int i = 0; i < rank; ++i)
    for (std::size_t p = 0; p < panels[i].size(); ++p)
      for (int c : panels[i][p]) panel_of[i][c] = static_cast<int>(p);
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j) {
      std::vector<int> dist(nc, -1);
      std::queue<int> bfs;
      dist[0] = 0;
      bfs.push(0);
      int diam = 0;
      while (!bfs.empty()) {
        int c = bfs.front();
        bfs.pop();
        for (int d = 0; d < nc; ++d)
          if (dist[d] < 0 && d != c &&
              (panel_of[i][d] == panel_of[i][c] || panel_of[j][d] == panel_of[j][c])) {
            dist[d] = dist[c] + 1;
            diam = std::max(diam, dist[d]);
            bfs.push(d);
          }
      }
      m[i][j] = m[j][i] = diam;
    }

  Reconstruction rec{Building(CoxeterSystem(std::move(m)), nc, std::move(panels)), n.families,
                     std::move(cliques), std::move(vtype)};

  // Validation: the reconstructed building must induce the same apartment
  // system. Each input label's vertex set (the families containing it) must
  // occur among the vertex sets of the reconstructed apartments, and the
  // counts must match.
  auto apts = enumerate_apartments(rec.building);
  std::set<std::vector<int>> rec_vertex_sets;
  for (const auto& apt : apts) {
    std::set<int> vs;
    for (int c : apt.chambers) vs.insert(rec.chamber_vertices[c].begin(), rec.chamber_vertices[c].end());
    rec_vertex_sets.insert(std::vector<int>(vs.begin(), vs.end()));
  }
  std::set<std::vector<int>> input_vertex_sets;
  std::set<int> labels;
  for (const auto& fam : n.families) labels.insert(fam.begin(), fam.end());
  for (int a : labels) {
    std::vector<int> vs;
    for (int v = 0; v < nv; ++v)
      if (std::binary_search(n.families[v].begin(), n.families[v].end(), a)) vs.push_back(v);
    input_vertex_sets.insert(std::move(vs));
  }
  if (rec_vertex_sets != input_vertex_sets)
    throw std::runtime_error("reconstruct: apartment system mismatch (corrupt or non-thick nerve)");
  return rec;
}

RoundTripReport verify_round_trip(const Building& b, std::size_t cap) {
  RoundTripReport rep;
  Nerve n = apartment_complex(b, cap);
  std::optional<Reconstruction> maybe;
  try {
    maybe.emplace(reconstruct_building(n));
  } catch (const std::exception& e) {
    rep.failure = e.what();
    return rep;
  }
  Reconstruction& rec = *maybe;
  auto apts = enumerate_apartments(b, cap);
  auto verts = building_vertices(b);
  const int nv = static_cast<int>(verts.size());
  if (static_cast<int>(rec.families.size()) != nv) {
    rep.failure = "vertex counts differ";
    return rep;
  }
  // Natural dictionary: source vertex -> its apartment family.
  std::map<std::vector<int>, int> fam_index;
  for (std::size_t k = 0; k < rec.families.size(); ++k)
    fam_index[rec.families[k]] = static_cast<int>(k);
  std::vector<std::vector<int>> res_cache;
  for (const auto& v : verts) res_cache.push_back(residue_chambers(b, v));
  rep.vertex_map.assign(nv, -1);
  std::vector<bool> hit(nv, false);
  for (int k = 0; k < nv; ++k) {
    std::vector<int> fam;
    for (std::size_t a = 0; a < apts.size(); ++a)
      if (std::any_of(res_cache[k].begin(), res_cache[k].end(),
                      [&](int c) { return apts[a].contains(c); }))
        fam.push_back(static_cast<int>(a));
    auto it = fam_index.find(fam);
    if (it == fam_index.end()) {
      rep.failure = "source vertex family is not a reconstructed vertex";
      return rep;
    }
    if (hit[it->second]) {
      rep.failure = "dictionary not injective";
      return rep;
    }
    hit[it->second] = true;
    rep.vertex_map[k] = it->second;
  }
  // Adjacency both ways: source vertices share a chamber iff their images
  // share a reconstructed chamber.
  auto rec_adjacent = [&](int u, int v) {
    for (const auto& cl : rec.chamber_vertices)
      if (std::binary_search(cl.begin(), cl.end(), u) &&
          std::binary_search(cl.begin(), cl.end(), v))
        return true;
    return false;
  };
  for (int u = 0; u < nv; ++u)
    for (int v = u + 1; v < nv; ++v) {
      bool src = !intersect(res_cache[u], res_cache[v]).empty();
      if (src != rec_adjacent(rep.vertex_map[u], rep.vertex_map[v])) {
        rep.failure = "adjacency mismatch";
        return rep;
      }
    }
  rep.isomorphic = true;
  // Type preservation: each source type must land in a single target type.
  std::map<int, std::set<int>> type_images;
  for (int k = 0; k < nv; ++k) {
    int src_type = -1;
    for (int i = 0; i < b.num_types(); ++i)
      if (!std::binary_search(verts[k].cotype.begin(), verts[k].cotype.end(), i)) src_type = i;
    type_images[src_type].insert(rec.vertex_type[rep.vertex_map[k]]);
  }
  rep.type_preserving = std::all_of(type_images.begin(), type_images.end(),
                                    [](const auto& kv) { return kv.second.size() == 1; });
  return rep;
}

}  // namespace bldg
