#include "bldg/coarse.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace bldg {

namespace {

Rat directed_hausdorff(const MetricTree& t, const std::vector<TreePoint>& u,
                       const std::vector<TreePoint>& v) {
  Rat worst{0};
  for (const auto& p : u) {
    Rat best = point_distance(t, p, v.front());
    for (const auto& q : v) {
      Rat d = point_distance(t, p, q);
      if (d < best) best = d;
    }
    if (best > worst) worst = best;
  }
  return worst;
}

}  // namespace

Rat hausdorff_distance(const MetricTree& t, const std::vector<TreePoint>& u,
                       const std::vector<TreePoint>& v) {
  if (u.empty() || v.empty()) throw std::invalid_argument("coarse: empty point set");
  return std::max(directed_hausdorff(t, u, v), directed_hausdorff(t, v, u));
}

bool dominates(const MetricTree& t, const std::vector<TreePoint>& u,
               const std::vector<TreePoint>& v, const Rat& r) {
  if (u.empty() || v.empty()) throw std::invalid_argument("coarse: empty point set");
  return directed_hausdorff(t, u, v) <= r;
}

ControlledFit controlled_fit(const MetricTree& source, const MetricTree& target,
                             const SampledMap& f) {
  if (f.pairs.size() < 2) throw std::invalid_argument("coarse: need at least 2 samples");
  const int n = static_cast<int>(f.pairs.size());
  std::vector<std::pair<Rat, Rat>> dists;  // (d_X, d_Y) per sample pair
  std::set<Rat> slopes{Rat{1}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Rat dx = point_distance(source, f.pairs[i].first, f.pairs[j].first);
      Rat dy = point_distance(target, f.pairs[i].second, f.pairs[j].second);
      if (dx == Rat{0} && dy > Rat{0})
        throw std::invalid_argument("coarse: duplicate source points with distinct images");
      dists.push_back({dx, dy});
      if (dx > Rat{0} && dy / dx > Rat{1}) slopes.insert(dy / dx);
    }
  Rat dmax{0};
  for (const auto& [dx, dy] : dists)
    if (dx > dmax) dmax = dx;

  ControlledFit fit;
  fit.max_source_distance = dmax;
  bool first = true;
  Rat best_cost{0};
  for (const Rat& c : slopes) {
    Rat d{0};
    for (const auto& [dx, dy] : dists)
      if (dy - c * dx > d) d = dy - c * dx;
    Rat cost = d + c * dmax;
    if (first || cost < best_cost || (cost == best_cost && d < fit.d) ||
        (cost == best_cost && d == fit.d && c < fit.c)) {
      best_cost = cost;
      fit.c = c;
      fit.d = d;
      first = false;
    }
  }
  return fit;
}

MatchReport morse_match(const MetricTree& t1, const MetricTree& t2, const SampledMap& f,
                        const TreeApartment& a) {
  auto apartments = all_apartments(t2);
  if (apartments.empty()) throw std::invalid_argument("coarse: target tree has no apartments");

  // Images of a's vertices; the samples must cover them.
  std::vector<TreePoint> image;
  for (int v : a.path) {
    const TreePoint want = TreePoint::at_vertex(v);
    bool found = false;
    for (const auto& [src, dst] : f.pairs)
      if (src == want) {
        image.push_back(dst);
        found = true;
        break;
      }
    if (!found) throw std::invalid_argument("coarse: samples do not cover the apartment");
  }

  // Exact arithmetic over a common denominator: all distances become 64-bit
  // integers, which keeps the all-apartments sweep fast.
  long long denom = 1;
  for (const auto& e : t2.edges()) denom = std::lcm(denom, e.length.denominator());
  for (const auto& p : image)
    if (!p.on_vertex()) denom = std::lcm(denom, p.offset.denominator());
  const int n = t2.num_vertices();
  std::vector<std::vector<long long>> m(n, std::vector<long long>(n));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      Rat d = t2.distance(u, v) * denom;
      m[u][v] = d.numerator() / d.denominator();
    }
  struct Anchor {
    int v1 = 0;
    long long d1 = 0;
    int v2 = -1;
    long long d2 = 0;
  };
  std::vector<Anchor> anchors;
  for (const auto& p : image) {
    Anchor an;
    if (p.on_vertex()) {
      an.v1 = p.vertex;
    } else {
      const auto& e = t2.edges()[p.edge];
      Rat o = p.offset * denom;
      an.v1 = e.u;
      an.d1 = o.numerator() / o.denominator();
      Rat rest = (e.length - p.offset) * denom;
      an.v2 = e.v;
      an.d2 = rest.numerator() / rest.denominator();
    }
    anchors.push_back(an);
  }
  auto point_vertex = [&](const Anchor& an, int w) {
    long long d = an.d1 + m[an.v1][w];
    if (an.v2 >= 0) d = std::min(d, an.d2 + m[an.v2][w]);
    return d;
  };

  std::vector<Rat> dist(apartments.size(), Rat{0});
  for (std::size_t k = 0; k < apartments.size(); ++k) {
    const auto& path = apartments[k].path;
    long long worst = 0;
    for (const auto& an : anchors) {
      long long best = point_vertex(an, path.front());
      for (int w : path) best = std::min(best, point_vertex(an, w));
      worst = std::max(worst, best);
    }
    for (int w : path) {
      long long best = point_vertex(anchors.front(), w);
      for (const auto& an : anchors) best = std::min(best, point_vertex(an, w));
      worst = std::max(worst, best);
    }
    dist[k] = Rat{worst, denom};
  }

  Rat best = *std::min_element(dist.begin(), dist.end());
  MatchReport rep;
  rep.distance = best;
  bool runner_set = false;
  for (std::size_t k = 0; k < apartments.size(); ++k) {
    if (dist[k] == best) {
      if (rep.ties.empty()) rep.best = apartments[k];
      rep.ties.push_back(apartments[k]);
    } else if (!runner_set || dist[k] < rep.runner_up) {
      rep.runner_up = dist[k];
      runner_set = true;
    }
  }
  rep.margin_infinite = !runner_set;
  return rep;
}

EndMapReport induced_end_map(const MetricTree& t1, const MetricTree& t2,
                             const std::vector<int>& apartment_map) {
  auto a1 = all_apartments(t1);
  auto a2 = all_apartments(t2);
  if (apartment_map.size() != a1.size() || a1.size() != a2.size())
    throw std::invalid_argument("coarse: apartment map is not a bijection");
  std::vector<char> hit(a2.size(), 0);
  for (int m : apartment_map) {
    if (m < 0 || m >= static_cast<int>(a2.size()) || hit[m])
      throw std::invalid_argument("coarse: apartment map is not a bijection");
    hit[m] = 1;
  }

  EndMapReport rep;
  auto share = [](const TreeApartment& x, const TreeApartment& y) {
    return x.u == y.u || x.u == y.v || x.v == y.u || x.v == y.v;
  };
  for (std::size_t i = 0; i < a1.size(); ++i)
    for (std::size_t j = i + 1; j < a1.size(); ++j)
      if (share(a1[i], a1[j]) != share(a2[apartment_map[i]], a2[apartment_map[j]])) {
        rep.certificate = {static_cast<int>(i), static_cast<int>(j)};
        rep.failure = "sharing an end is not preserved by the apartment map";
        return rep;
      }

  std::vector<int> ends1, ends2;
  for (int v = 0; v < t1.num_vertices(); ++v)
    if (t1.is_end(v)) ends1.push_back(v);
  for (int v = 0; v < t2.num_vertices(); ++v)
    if (t2.is_end(v)) ends2.push_back(v);

  if (a1.size() == 1) {
    // A single apartment: orient along the stored (u, v) order.
    const auto& src = a1.front();
    const auto& dst = a2[apartment_map[0]];
    rep.success = true;
    rep.end_map = {{std::min(src.u, src.v), std::min(dst.u, dst.v)},
                   {std::max(src.u, src.v), std::max(dst.u, dst.v)}};
    return rep;
  }

  std::vector<int> image_of_end;
  for (int u : ends1) {
    // All apartments through u map to apartments through a single common end.
    std::set<int> common;
    bool started = false;
    std::pair<int, int> witness{-1, -1};
    for (std::size_t i = 0; i < a1.size(); ++i) {
      if (a1[i].u != u && a1[i].v != u) continue;
      const auto& img = a2[apartment_map[i]];
      std::set<int> here{img.u, img.v};
      if (!started) {
        common = here;
        started = true;
        witness.first = static_cast<int>(i);
      } else {
        witness.second = static_cast<int>(i);
        std::set<int> inter;
        for (int e : common)
          if (here.count(e)) inter.insert(e);
        common = inter;
      }
    }
    if (common.size() != 1) {
      rep.certificate = witness;
      rep.failure = "apartments through one end have no common image end";
      return rep;
    }
    image_of_end.push_back(*common.begin());
  }
  std::set<int> distinct(image_of_end.begin(), image_of_end.end());
  if (distinct.size() != image_of_end.size() || distinct.size() != ends2.size()) {
    rep.failure = "induced end map is not a bijection";
    return rep;
  }
  rep.success = true;
  for (std::size_t k = 0; k < ends1.size(); ++k) rep.end_map.push_back({ends1[k], image_of_end[k]});
  return rep;
}

}  // namespace bldg
