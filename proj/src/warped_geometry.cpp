#include "soliton/warped_geometry.hpp"

#include <limits>
#include <numbers>
#include <string>

namespace soliton {

WarpedMetric::WarpedMetric(int dim, JetFn jet, double domain_max, double pole_w3)
    : dim_(dim), jet_(std::move(jet)), domain_max_(domain_max), pole_w3_(pole_w3) {
  if (dim_ != 2 && dim_ != 3) throw std::invalid_argument("WarpedMetric: dim must be 2 or 3");
  if (!jet_) throw std::invalid_argument("WarpedMetric: empty warp function");
  if (!(domain_max_ > 0.0)) throw std::invalid_argument("WarpedMetric: domain_max must be > 0");
  WarpJet<double> pole = jet_(0.0);
  if (std::abs(pole.w) > 1e-12 || std::abs(pole.wp - 1.0) > 1e-9)
    throw std::invalid_argument("WarpedMetric: warp must satisfy w(0) = 0, w'(0) = 1");
  for (double t : {0.25, 0.5, 0.75}) {
    if (!(jet_(t * domain_max_).w > 0.0))
      throw std::invalid_argument("WarpedMetric: warp must be positive away from the pole");
  }
}

WarpJet<double> WarpedMetric::jet(double r) const {
  if (!(r >= 0.0) || r > domain_max_)
    throw RangeError("WarpedMetric: radius " + std::to_string(r) + " outside [0, " +
                     std::to_string(domain_max_) + "]");
  return jet_(r);
}

ProductMetric::ProductMetric(WarpedMetric fiber) : fiber_(std::move(fiber)) {
  if (fiber_.dim() != 2) throw std::invalid_argument("ProductMetric: fiber must be 2-dimensional");
}

WarpedMetric cigar_fiber(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("cigar_fiber: scale must be positive");
  auto jet = [a](double sigma) {
    double t = std::tanh(a * sigma);
    double sech2 = 1.0 / (std::cosh(a * sigma) * std::cosh(a * sigma));
    return WarpJet<double>{t / a, sech2, -2.0 * a * sech2 * t, t * t};
  };
  return WarpedMetric(2, jet, std::numeric_limits<double>::infinity(), -a * a / 3.0);
}

WarpedMetric round_fiber(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("round_fiber: radius must be positive");
  auto jet = [a](double r) {
    double half = std::sin(r / (2.0 * a));
    return WarpJet<double>{a * std::sin(r / a), std::cos(r / a), -std::sin(r / a) / a,
                           2.0 * half * half};
  };
  return WarpedMetric(2, jet, std::numbers::pi * a, -1.0 / (6.0 * a * a));
}

CurvatureSample<double> curvature_at(const WarpedMetric& metric, double r) {
  return warped_curvature(metric.dim(), r, metric.jet(r), metric.pole_coefficient());
}

CurvatureSample<double> curvature_at(const ProductMetric& metric, const ProductPoint& point) {
  CurvatureSample<double> fiber = curvature_at(metric.fiber(), point.sigma);
  CurvatureSample<double> out;
  out.r = point.sigma;
  out.K_rad = 0.0;
  out.K_sph = fiber.K_sph;
  out.Ric_rad = 0.0;
  out.Ric_tan = fiber.K_sph;
  out.R = 2.0 * fiber.K_sph;
  return out;
}

namespace {

// Tangential Hessian entry f' w'/w, with its pole limit f''.
double tangential_hessian(const WarpedMetric& metric, double r, double fp, double fpp) {
  if (r < kPoleCutoff) return fpp;
  WarpJet<double> jet = metric.jet(r);
  return fp * jet.wp / jet.w;
}

}  // namespace

SolitonResidual soliton_residual(const WarpedMetric& metric, const RadialPotential& potential,
                                 double r) {
  CurvatureSample<double> k = curvature_at(metric, r);
  RadialPotentialJet f = potential(r);
  SolitonResidual res;
  res.radial = f.fpp - k.Ric_rad;
  res.tangential = tangential_hessian(metric, r, f.fp, f.fpp) - k.Ric_tan;
  return res;
}

SolitonResidual soliton_residual(const ProductMetric& metric, const ProductPotential& potential,
                                 const ProductPoint& point) {
  double gauss = curvature_at(metric.fiber(), point.sigma).K_sph;
  ProductPotentialJet f = potential(point.s, point.sigma);
  SolitonResidual res;
  res.axial = f.f_ss;
  res.mixed = f.f_s_sigma;
  res.radial = f.f_sigma_sigma - gauss;
  res.tangential = tangential_hessian(metric.fiber(), point.sigma, f.f_sigma, f.f_sigma_sigma) -
                   gauss;
  return res;
}

double conserved_quantity(const WarpedMetric& metric, const RadialPotential& potential,
                          double r) {
  double fp = potential(r).fp;
  return curvature_at(metric, r).R + fp * fp;
}

double conserved_quantity(const ProductMetric& metric, const ProductPotential& potential,
                          const ProductPoint& point) {
  ProductPotentialJet f = potential(point.s, point.sigma);
  return curvature_at(metric, point).R + f.f_s * f.f_s + f.f_sigma * f.f_sigma;
}

double gradient_norm(const RadialPotential& potential, double r) {
  return std::abs(potential(r).fp);
}

double gradient_norm(const ProductPotential& potential, const ProductPoint& point) {
  ProductPotentialJet f = potential(point.s, point.sigma);
  return std::hypot(f.f_s, f.f_sigma);
}

}  // namespace soliton
