#include "bldg/cone.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace bldg {

std::vector<int> carrier_vertex_types(const Building& b, const SimplexRef& s) {
  std::vector<int> out;
  for (int t = 0; t < b.num_types(); ++t)
    if (!std::binary_search(s.cotype.begin(), s.cotype.end(), t)) out.push_back(t);
  return out;
}

RealizedPoint make_realized_point(const Building& b, const SimplexRef& carrier,
                                  std::vector<double> coords) {
  SimplexRef canon = make_simplex(b, carrier.chamber, carrier.cotype);
  auto types = carrier_vertex_types(b, canon);
  if (types.empty()) throw std::invalid_argument("cone: carrier has no vertices");
  if (coords.size() != types.size())
    throw std::invalid_argument("cone: coordinate count does not match carrier");
  double sum = 0;
  for (double c : coords) {
    if (c <= 0) throw std::invalid_argument("cone: barycentric coordinates must be positive");
    sum += c;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("cone: barycentric coordinates must sum to 1");
  return RealizedPoint{canon, std::move(coords)};
}

ConePoint make_cone_point(const Building& b, const RealizedPoint& p, double radius) {
  if (radius < 0) throw std::invalid_argument("cone: negative radius");
  if (radius == 0) return ConePoint::apex();
  return ConePoint{make_realized_point(b, p.carrier, p.coords), radius};
}

namespace {

Eigen::MatrixXd word_matrix(const SphericalChart& chart, const std::vector<int>& word) {
  const auto n = chart.gram.rows();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (int gen : word) m = m * chart.reflections[gen];
  return m;
}

}  // namespace

Eigen::VectorXd realize_in_apartment(const Building& b, const SphericalChart& chart,
                                     const Apartment& a, const RealizedPoint& p) {
  if (!a.contains(p.carrier.chamber))
    throw std::invalid_argument("cone: apartment does not contain the carrier chamber");
  int c0 = a.chambers.front();
  Eigen::MatrixXd m = word_matrix(chart, b.table().word(b.delta(c0, p.carrier.chamber)));
  auto types = carrier_vertex_types(b, p.carrier);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(chart.gram.rows());
  for (std::size_t k = 0; k < types.size(); ++k)
    x += p.coords[k] * (m * chart.chamber_vertices[types[k]]);
  return x.normalized();
}

double spherical_distance_in(const Building& b, const SphericalChart& chart, const Apartment& a,
                             const RealizedPoint& p, const RealizedPoint& q) {
  Eigen::VectorXd x = realize_in_apartment(b, chart, a, p);
  Eigen::VectorXd y = realize_in_apartment(b, chart, a, q);
  // Chord formula: exact 0 for identical images, stable for small angles.
  double half_chord = std::clamp((x - y).norm() / 2.0, 0.0, 1.0);
  return 2.0 * std::asin(half_chord);
}

double spherical_distance(const Building& b, const SphericalChart& chart, const RealizedPoint& p,
                          const RealizedPoint& q) {
  Apartment a = apartment_containing(b, p.carrier.chamber, q.carrier.chamber);
  return spherical_distance_in(b, chart, a, p, q);
}

double cone_distance(const Building& b, const SphericalChart& chart, const ConePoint& p,
                     const ConePoint& q) {
  if (p.is_apex()) return q.radius;
  if (q.is_apex()) return p.radius;
  double ang = spherical_distance(b, chart, p.point, q.point);
  double s = p.radius, t = q.radius;
  // Rearranged law of cosines, stable under cancellation:
  // s^2 + t^2 - 2st cos(a) = (s - t)^2 + 4st sin^2(a/2).
  double h = std::sin(ang / 2);
  return std::sqrt((s - t) * (s - t) + 4 * s * t * h * h);
}

ConePoint map_cone_point(const Building& b, const ChamberMap& phi, const ConePoint& p) {
  if (p.is_apex()) return ConePoint::apex();
  const SimplexRef& s = p.point.carrier;
  std::vector<int> new_cotype;
  for (int j : s.cotype) new_cotype.push_back(phi.type_map[j]);
  std::sort(new_cotype.begin(), new_cotype.end());
  SimplexRef image = make_simplex(b, phi.image[s.chamber], new_cotype);
  auto old_types = carrier_vertex_types(b, s);
  auto new_types = carrier_vertex_types(b, image);
  std::vector<double> coords(new_types.size(), 0.0);
  for (std::size_t k = 0; k < old_types.size(); ++k) {
    int t = phi.type_map[old_types[k]];
    auto pos = std::lower_bound(new_types.begin(), new_types.end(), t) - new_types.begin();
    coords[static_cast<std::size_t>(pos)] = p.point.coords[k];
  }
  return ConePoint{make_realized_point(b, image, std::move(coords)), p.radius};
}

MetricTree cone_wall_tree(const Building& b, const SimplexRef& a, const SimplexRef& opposite,
                          const Rat& radius) {
  if (a.cotype.size() != 1 || opposite.cotype.size() != 1)
    throw std::invalid_argument("cone: wall tree needs panels");
  if (!are_opposite(b, a, opposite))
    throw std::invalid_argument("cone: wall tree needs opposite panels");
  std::vector<std::string> labels;
  for (int c : residue_chambers(b, a)) labels.push_back("chamber " + std::to_string(c));
  return cone_tree(labels, radius);
}

namespace {

RealizedPoint random_chamber_point(const Building& b, std::mt19937_64& rng, int chamber) {
  std::exponential_distribution<double> exp_dist(1.0);
  std::vector<double> coords(static_cast<std::size_t>(b.num_types()));
  double sum = 0;
  for (auto& c : coords) {
    c = exp_dist(rng) + 1e-3;
    sum += c;
  }
  for (auto& c : coords) c /= sum;
  return make_realized_point(b, make_simplex(b, chamber, {}), coords);
}

}  // namespace

ConeIsometryReport cone_isometry(const Building& b, const SphericalChart& chart,
                                 const ChamberMap& phi, int samples, unsigned long long seed) {
  auto rep = check_morphism(b, b, phi);
  std::vector<int> image = phi.image;
  std::sort(image.begin(), image.end());
  bool bijective = static_cast<int>(image.size()) == b.num_chambers() &&
                   std::unique(image.begin(), image.end()) == image.end();
  bool types_ok = std::none_of(phi.type_map.begin(), phi.type_map.end(),
                               [](int t) { return t < 0; });
  if (!rep.is_morphism || !rep.is_nondegenerate || !bijective || !types_ok)
    throw std::invalid_argument("cone: map is not an automorphism");

  ConeIsometryReport out;
  out.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> chamber_dist(0, b.num_chambers() - 1);
  std::uniform_real_distribution<double> radius_dist(0.1, 2.0);
  for (int k = 0; k < samples; ++k) {
    ConePoint p{random_chamber_point(b, rng, chamber_dist(rng)), radius_dist(rng)};
    ConePoint q{random_chamber_point(b, rng, chamber_dist(rng)), radius_dist(rng)};
    double before = cone_distance(b, chart, p, q);
    double after = cone_distance(b, chart, map_cone_point(b, phi, p), map_cone_point(b, phi, q));
    out.max_distortion = std::max(out.max_distortion, std::abs(before - after));
  }
  return out;
}

ApexReport apex_is_unique_thick_point(const Building& b, const SphericalChart& chart,
                                      int samples, unsigned long long seed) {
  ApexReport rep;
  rep.apex_thick = thickness_report(b).is_thick;
  if (!rep.apex_thick) throw std::invalid_argument("cone: building is not thick");
  rep.samples = samples;
  rep.min_containing = b.num_chambers() + 1;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> chamber_dist(0, b.num_chambers() - 1);
  for (int k = 0; k < samples; ++k) {
    int c = chamber_dist(rng);
    RealizedPoint p = random_chamber_point(b, rng, c);
    int containing = 0;
    for (int d = 0; d < b.num_chambers(); ++d) {
      Apartment a = apartment_containing(b, c, d);
      Eigen::VectorXd x = realize_in_apartment(b, chart, a, p);
      int c0 = a.chambers.front();
      Eigen::MatrixXd m = word_matrix(chart, b.table().word(b.delta(c0, d)));
      Eigen::VectorXd local = m.transpose() * x;  // reflections are orthogonal
      bool inside = true;
      for (const auto& root : chart.simple_roots)
        if (local.dot(root) < -1e-9) inside = false;
      if (inside) ++containing;
    }
    rep.min_containing = std::min(rep.min_containing, containing);
    rep.max_containing = std::max(rep.max_containing, containing);
  }
  rep.interior_points_unique = rep.min_containing == 1 && rep.max_containing == 1;
  return rep;
}

}  // namespace bldg
