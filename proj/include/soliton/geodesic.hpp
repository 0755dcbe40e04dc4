#pragma once

#include "soliton/warped_geometry.hpp"

#include <stdexcept>
#include <string>

namespace soliton {

/// Unit arrival direction split into line (axial), radial and orbit (tangential) parts.
struct EndTangent {
  double axial = 0.0;
  double radial = 0.0;
  double tangential = 0.0;
};

template <typename Point>
struct GeodesicPath {
  Point start;
  Point end;
  double length = 0.0;
  EndTangent tangent_at_end;
};

/// Thrown when the two-point solve does not converge; best_bound is the length of the
/// shortest admissible path found, an upper bound for the distance.
class GeodesicError : public std::runtime_error {
 public:
  GeodesicError(const std::string& what, double best_bound)
      : std::runtime_error(what), best_bound_(best_bound) {}
  double best_bound() const { return best_bound_; }

 private:
  double best_bound_;
};

/// Minimizing geodesic between two points of a warped manifold. resolution is the requested
/// absolute accuracy of the length. Radial pairs are returned exactly.
GeodesicPath<WarpedPoint> geodesic(const WarpedMetric& metric, const WarpedPoint& p,
                                   const WarpedPoint& q, double resolution);

/// Minimizing geodesic on R x fiber: a line segment times a fiber geodesic.
GeodesicPath<ProductPoint> geodesic(const ProductMetric& metric, const ProductPoint& p,
                                    const ProductPoint& q, double resolution);

/// Geodesic inside the meridian surface dr^2 + w^2 dphi^2 between (r1, 0) and (r2, separation),
/// separation in [0, pi].
struct MeridianGeodesic {
  double length = 0.0;
  double radial = 0.0;      // cos of the arrival angle to d/dr
  double tangential = 0.0;  // sin of the arrival angle, along increasing phi
};
MeridianGeodesic meridian_geodesic(const WarpedMetric& metric, double r1, double r2,
                                   double separation, double resolution);

}  // namespace soliton
