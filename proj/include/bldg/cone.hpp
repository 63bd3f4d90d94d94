#pragma once

#include "bldg/building.hpp"
#include "bldg/coxeter.hpp"
#include "bldg/rtree.hpp"

namespace bldg {

/// A point of the spherical realization |B|: carried by its minimal simplex
/// with strictly positive barycentric coordinates, one per carrier vertex in
/// ascending type order, summing to 1 within 1e-12.
struct RealizedPoint {
  SimplexRef carrier;
  std::vector<double> coords;
};

/// Sorted vertex types of a simplex (the types not free to vary).
std::vector<int> carrier_vertex_types(const Building& b, const SimplexRef& s);

/// Validates and canonicalizes (coords must be positive and sum to 1).
RealizedPoint make_realized_point(const Building& b, const SimplexRef& carrier,
                                  std::vector<double> coords);

/// A point of the Euclidean cone over |B|; radius 0 is the apex, where the
/// realized point is immaterial and canonicalized away.
struct ConePoint {
  RealizedPoint point;
  double radius = 0;

  bool is_apex() const { return radius == 0; }
  static ConePoint apex() { return ConePoint{}; }
};

ConePoint make_cone_point(const Building& b, const RealizedPoint& p, double radius);

/// Chart image of a realized point through the given apartment: base the
/// model at the apartment's least chamber and push vertices along the
/// W-distance word. Unit vector on the model sphere.
Eigen::VectorXd realize_in_apartment(const Building& b, const SphericalChart& chart,
                                     const Apartment& a, const RealizedPoint& p);

/// Angle between the chart images through an apartment containing both
/// carrier chambers (apartment-independent up to numerical tolerance).
double spherical_distance(const Building& b, const SphericalChart& chart, const RealizedPoint& p,
                          const RealizedPoint& q);
double spherical_distance_in(const Building& b, const SphericalChart& chart, const Apartment& a,
                             const RealizedPoint& p, const RealizedPoint& q);

/// Law of cosines: d((x,s),(y,t))^2 = s^2 + t^2 - 2 s t cos(d_{|B|}(x,y)).
double cone_distance(const Building& b, const SphericalChart& chart, const ConePoint& p,
                     const ConePoint& q);

/// Image of a cone point under a (possibly type-rotating) automorphism.
ConePoint map_cone_point(const Building& b, const ChamberMap& phi, const ConePoint& p);

struct ConeIsometryReport {
  double max_distortion = 0;
  int samples = 0;
};

/// Verifies that the map induced by the automorphism phi preserves the cone
/// metric on a random sample of point pairs. Throws if phi is not an
/// automorphism of b.
ConeIsometryReport cone_isometry(const Building& b, const SphericalChart& chart,
                                 const ChamberMap& phi, int samples = 1000,
                                 unsigned long long seed = 2026);

/// Wall tree of the cone through two opposite panels: a star (type I) with
/// one end-marked leaf per chamber of Res(a), truncated at the given radius.
MetricTree cone_wall_tree(const Building& b, const SimplexRef& a, const SimplexRef& opposite,
                          const Rat& radius);

struct ApexReport {
  bool apex_thick = false;
  int samples = 0;
  int min_containing = 0;  // chamber cones containing a sampled interior point
  int max_containing = 0;
  bool interior_points_unique = false;  // every sample in exactly one cone
};

/// The apex of the cone is the unique thick point: its residue is B itself,
/// while points interior to a chamber cone lie in exactly one closed chamber
/// cone (their germ is flat). Throws if b is not thick.
ApexReport apex_is_unique_thick_point(const Building& b, const SphericalChart& chart,
                                      int samples = 20, unsigned long long seed = 2026);

}  // namespace bldg
