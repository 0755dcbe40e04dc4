#include "soliton/geodesic.hpp"

#include "soliton/dormand_prince.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace soliton {

namespace {

constexpr double kPi = std::numbers::pi;

// A stage of the shooting integration left [0, domain_max].
struct Escape {
  int direction;
};

struct Shot {
  double r_end = 0.0;
  double alpha_end = 0.0;
  double length = 0.0;
  double miss = 0.0;  // r_end - target, +/-huge on escape
};

// Integrates the geodesic with phi as the independent variable, state (r, alpha, length):
//   dr/dphi = w cot(alpha), dalpha/dphi = -w', dlength/dphi = w / sin(alpha),
// where alpha is the angle to d/dr. phi is strictly monotone for non-radial geodesics.
Shot shoot(const WarpedMetric& metric, double r1, double alpha0, double separation,
           double target, double rtol) {
  using Integrator = DormandPrince45<double, 3>;
  Integrator::Options opt;
  opt.rtol = rtol;
  opt.atol = rtol * 1e-3;
  opt.h_max = separation / 8.0;
  opt.max_steps = 200000;
  Integrator stepper(opt);

  const double rmax = metric.domain_max();
  auto rhs = [&](double, const Integrator::State& y) {
    double r = y[0];
    if (!(r > 0.0)) throw Escape{-1};
    if (r > rmax) throw Escape{+1};
    WarpJet<double> jet = metric.jet(r);
    double s = std::sin(y[1]);
    if (!(s > 0.0)) throw Escape{std::cos(y[1]) > 0 ? +1 : -1};
    Integrator::State d;
    d << jet.w * std::cos(y[1]) / s, -jet.wp, jet.w / s;
    return d;
  };

  Shot shot;
  constexpr double kHuge = 1e300;
  try {
    Integrator::State y0(r1, alpha0, 0.0);
    auto stats = stepper.integrate(rhs, 0.0, y0, separation);
    shot.r_end = stats.y_end[0];
    shot.alpha_end = stats.y_end[1];
    shot.length = stats.y_end[2];
    shot.miss = shot.r_end - target;
  } catch (const Escape& e) {
    shot.miss = e.direction > 0 ? kHuge : -kHuge;
    shot.length = std::numeric_limits<double>::infinity();
  } catch (const std::runtime_error&) {
    // step-size collapse near a singular approach; treat as an inward escape
    shot.miss = -kHuge;
    shot.length = std::numeric_limits<double>::infinity();
  }
  return shot;
}

MeridianGeodesic radial_path(double r1, double r2) {
  MeridianGeodesic g;
  g.length = std::abs(r2 - r1);
  g.radial = r2 >= r1 ? 1.0 : -1.0;
  return g;
}

}  // namespace

MeridianGeodesic meridian_geodesic(const WarpedMetric& metric, double r1, double r2,
                                   double separation, double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("geodesic: resolution must be positive");
  if (!(separation >= 0.0) || separation > kPi + 1e-12)
    throw std::invalid_argument("geodesic: angular separation must lie in [0, pi]");
  separation = std::min(separation, kPi);
  if (r1 < 0.0 || r2 < 0.0 || r1 > metric.domain_max() || r2 > metric.domain_max())
    throw RangeError("geodesic: endpoint outside the metric domain");

  if (separation < 1e-12 || r1 == 0.0 || r2 == 0.0) return radial_path(r1, r2);

  // Broken path through the pole: always admissible, a geodesic when separation = pi.
  MeridianGeodesic best;
  best.length = r1 + r2;
  best.radial = 1.0;
  bool have_geodesic = separation >= kPi;
  double best_bound = r1 + r2;

  const double rtol = std::clamp(resolution * 1e-3, 1e-13, 1e-6);
  constexpr int kScan = 48;
  std::vector<double> alphas(kScan + 1);
  std::vector<Shot> shots(kScan + 1);
  for (int i = 0; i <= kScan; ++i) {
    // Clustered towards both ends, where near-radial geodesics live.
    double u = static_cast<double>(i) / kScan;
    alphas[i] = kPi * (0.5 - 0.5 * std::cos(kPi * u));
    alphas[i] = std::clamp(alphas[i], 1e-9, kPi - 1e-9);
    shots[i] = shoot(metric, r1, alphas[i], separation, r2, rtol);
    if (std::isfinite(shots[i].length))
      best_bound = std::min(best_bound, shots[i].length + std::abs(shots[i].miss));
  }

  for (int i = 0; i < kScan; ++i) {
    if (!(shots[i].miss > 0.0 && shots[i + 1].miss <= 0.0) &&
        !(shots[i].miss < 0.0 && shots[i + 1].miss >= 0.0))
      continue;
    double lo = alphas[i], hi = alphas[i + 1];
    double m_lo = shots[i].miss;
    Shot mid_shot = shots[i + 1];
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      double mid = 0.5 * (lo + hi);
      mid_shot = shoot(metric, r1, mid, separation, r2, rtol);
      if (std::isfinite(mid_shot.length))
        best_bound = std::min(best_bound, mid_shot.length + std::abs(mid_shot.miss));
      if (std::abs(mid_shot.miss) <= resolution * 1e-3 && std::isfinite(mid_shot.length)) break;
      if ((mid_shot.miss > 0.0) == (m_lo > 0.0)) {
        lo = mid;
        m_lo = mid_shot.miss;
      } else {
        hi = mid;
      }
    }
    if (!std::isfinite(mid_shot.length) || std::abs(mid_shot.miss) > resolution) continue;
    if (!have_geodesic || mid_shot.length < best.length) {
      best.length = mid_shot.length;
      best.radial = std::cos(mid_shot.alpha_end);
      best.tangential = std::sin(mid_shot.alpha_end);
      have_geodesic = true;
    }
  }

  if (!have_geodesic)
    throw GeodesicError("geodesic: two-point shooting found no bracketing solution", best_bound);
  return best;
}

GeodesicPath<WarpedPoint> geodesic(const WarpedMetric& metric, const WarpedPoint& p,
                                   const WarpedPoint& q, double resolution) {
  Eigen::Vector3d u = p.direction.normalized();
  Eigen::Vector3d v = q.direction.normalized();
  double separation = std::atan2(u.cross(v).norm(), u.dot(v));
  bool same_point =
      (p.r == q.r && (p.r == 0.0 || separation < 1e-15));
  if (same_point) throw std::invalid_argument("geodesic: endpoints coincide");

  MeridianGeodesic m = meridian_geodesic(metric, p.r, q.r, separation, resolution);
  GeodesicPath<WarpedPoint> path;
  path.start = p;
  path.end = q;
  path.length = m.length;
  path.tangent_at_end.radial = m.radial;
  path.tangent_at_end.tangential = m.tangential;
  return path;
}

GeodesicPath<ProductPoint> geodesic(const ProductMetric& metric, const ProductPoint& p,
                                    const ProductPoint& q, double resolution) {
  double dtheta = std::remainder(q.theta - p.theta, 2.0 * kPi);
  double separation = std::abs(dtheta);
  bool same_fiber_point =
      (p.sigma == q.sigma && (p.sigma == 0.0 || separation < 1e-15));
  if (same_fiber_point && p.s == q.s) throw std::invalid_argument("geodesic: endpoints coincide");

  MeridianGeodesic fiber;
  if (!same_fiber_point)
    fiber = meridian_geodesic(metric.fiber(), p.sigma, q.sigma, separation, resolution);
  double ds = q.s - p.s;

  GeodesicPath<ProductPoint> path;
  path.start = p;
  path.end = q;
  path.length = std::hypot(ds, fiber.length);
  path.tangent_at_end.axial = ds / path.length;
  path.tangent_at_end.radial = fiber.length / path.length * fiber.radial;
  path.tangent_at_end.tangential = fiber.length / path.length * fiber.tangential;
  return path;
}

}  // namespace soliton
