#pragma once

// Rotationally symmetric metrics dr^2 + w(r)^2 g_{S^{dim-1}} and products ds^2 + g_fiber.
//
// Curvature of a warped product (derivation in docs/curvature.md):
//   K_rad = -w''/w            planes containing the radial direction
//   K_sph = (1 - w'^2)/w^2    planes tangent to the symmetry orbit (dim 3)
//   dim 3: Ric_rad = 2 K_rad, Ric_tan = K_rad + K_sph, R = 4 K_rad + 2 K_sph
//   dim 2: the only sectional curvature is -w''/w, stored in K_sph; R = 2 K_sph.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>

namespace soliton {

/// Below this radius curvature uses the smooth-pole series w = r + w3 r^3.
inline constexpr double kPoleCutoff = 1e-6;

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// w and its first two derivatives at one radius. one_minus_wp carries 1 - w' separately
/// so that 1 - w'^2 keeps full relative precision close to the pole.
template <typename Scalar>
struct WarpJet {
  Scalar w;
  Scalar wp;
  Scalar wpp;
  Scalar one_minus_wp;
};

template <typename Scalar>
struct CurvatureSample {
  Scalar r{};
  std::optional<Scalar> K_rad;  // absent for dim 2
  Scalar K_sph{};
  Scalar Ric_rad{};
  Scalar Ric_tan{};
  Scalar R{};
};

/// Closed-form curvature of dr^2 + w^2 g_{S^{dim-1}} from a warp jet. pole_w3 is the cubic
/// Taylor coefficient of w, used below kPoleCutoff where K_sph is 0/0.
template <typename Scalar>
CurvatureSample<Scalar> warped_curvature(int dim, Scalar r, const WarpJet<Scalar>& jet,
                                         Scalar pole_w3) {
  CurvatureSample<Scalar> out;
  out.r = r;
  Scalar k_rad, k_sph;
  if (r < Scalar(kPoleCutoff)) {
    Scalar q = Scalar(1) + pole_w3 * r * r;
    k_rad = Scalar(-6) * pole_w3 / q;
    k_sph = (Scalar(-6) * pole_w3 - Scalar(9) * pole_w3 * pole_w3 * r * r) / (q * q);
  } else {
    k_rad = -jet.wpp / jet.w;
    k_sph = jet.one_minus_wp * (Scalar(1) + jet.wp) / (jet.w * jet.w);
  }
  if (dim == 2) {
    Scalar gauss = k_rad;
    out.K_sph = gauss;
    out.Ric_rad = gauss;
    out.Ric_tan = gauss;
    out.R = Scalar(2) * gauss;
  } else {
    out.K_rad = k_rad;
    out.K_sph = k_sph;
    out.Ric_rad = Scalar(2) * k_rad;
    out.Ric_tan = k_rad + k_sph;
    out.R = Scalar(4) * k_rad + Scalar(2) * k_sph;
  }
  return out;
}

/// dr^2 + w(r)^2 g_{S^{dim-1}}, dim in {2, 3}, with a smooth pole at r = 0.
class WarpedMetric {
 public:
  using JetFn = std::function<WarpJet<double>(double)>;

  WarpedMetric(int dim, JetFn jet, double domain_max, double pole_w3);

  int dim() const { return dim_; }
  double domain_max() const { return domain_max_; }
  double pole_coefficient() const { return pole_w3_; }

  /// Range-checked jet; throws RangeError outside [0, domain_max].
  WarpJet<double> jet(double r) const;

 private:
  int dim_;
  JetFn jet_;
  double domain_max_;
  double pole_w3_;
};

/// ds^2 + g_fiber with a two-dimensional warped fiber.
class ProductMetric {
 public:
  explicit ProductMetric(WarpedMetric fiber);
  const WarpedMetric& fiber() const { return fiber_; }

 private:
  WarpedMetric fiber_;
};

/// Warped metric of the scaled cigar dsigma^2 + a^-2 tanh^2(a sigma) dtheta^2.
WarpedMetric cigar_fiber(double scale);
/// Round 2-sphere of radius a as dr^2 + a^2 sin^2(r/a) dtheta^2, r in [0, pi a].
WarpedMetric round_fiber(double radius);

/// A point of a warped manifold: radius and a unit direction (dim 2 uses the xy-plane).
struct WarpedPoint {
  double r = 0.0;
  Eigen::Vector3d direction = Eigen::Vector3d::UnitX();
};

/// A point of R x fiber: line coordinate s and polar fiber coordinates (sigma, theta).
struct ProductPoint {
  double s = 0.0;
  double sigma = 0.0;
  double theta = 0.0;
};

struct RadialPotentialJet {
  double f;
  double fp;
  double fpp;
};
using RadialPotential = std::function<RadialPotentialJet(double r)>;

/// Value, gradient and Hessian (coordinate derivatives) of a theta-independent potential on
/// R x fiber.
struct ProductPotentialJet {
  double f = 0;
  double f_s = 0;
  double f_sigma = 0;
  double f_ss = 0;
  double f_s_sigma = 0;
  double f_sigma_sigma = 0;
};
using ProductPotential = std::function<ProductPotentialJet(double s, double sigma)>;

/// Hess f - Ric in an orthonormal frame. On warped metrics only radial/tangential are used;
/// on products, axial is the line direction d/ds and mixed the (s, sigma) entry.
struct SolitonResidual {
  double axial = 0;
  double mixed = 0;
  double radial = 0;
  double tangential = 0;

  double max_abs() const {
    return std::max({std::abs(axial), std::abs(mixed), std::abs(radial), std::abs(tangential)});
  }
};

CurvatureSample<double> curvature_at(const WarpedMetric& metric, double r);
/// On a product the "radial" slots refer to the line factor: K_rad and Ric_rad are exactly 0,
/// K_sph is the fiber Gauss curvature.
CurvatureSample<double> curvature_at(const ProductMetric& metric, const ProductPoint& point);

SolitonResidual soliton_residual(const WarpedMetric& metric, const RadialPotential& potential,
                                 double r);
SolitonResidual soliton_residual(const ProductMetric& metric, const ProductPotential& potential,
                                 const ProductPoint& point);

/// R + |grad f|^2.
double conserved_quantity(const WarpedMetric& metric, const RadialPotential& potential, double r);
double conserved_quantity(const ProductMetric& metric, const ProductPotential& potential,
                          const ProductPoint& point);

double gradient_norm(const RadialPotential& potential, double r);
double gradient_norm(const ProductPotential& potential, const ProductPoint& point);

/// Numerically stable log(cosh(x)).
inline double log_cosh(double x) {
  double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

}  // namespace soliton
