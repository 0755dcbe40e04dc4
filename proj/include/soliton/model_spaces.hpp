#pragma once

#include "soliton/bryant.hpp"
#include "soliton/warped_geometry.hpp"

#include "json.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace soliton {

/// Cigar dsigma^2 + a^-2 tanh^2(a sigma) dtheta^2 with potential 2 ln cosh(a sigma).
struct Cigar {
  double scale = 1.0;
};

/// R x cigar with potential slope * s + 2 ln cosh(a sigma).
struct CigarLine {
  double scale = 1.0;
  double slope = 0.0;
  /// Limit model with R + |grad f|^2 = 1 and R -> rhat along the core: a = sqrt(rhat)/2,
  /// slope = sqrt(1 - rhat).
  static CigarLine from_rhat(double rhat);
  double rhat() const { return 4.0 * scale * scale; }
};

/// R x round S^2 of radius a; the canonical potential is 0 (not a soliton).
struct RoundCylinder {
  double radius = 1.0;
};

struct BryantNumeric {
  SolitonProfile profile;
};

using ModelVariant = std::variant<Cigar, CigarLine, RoundCylinder, BryantNumeric>;

struct ModelSpace {
  ModelVariant variant;
  std::variant<WarpedMetric, ProductMetric> metric;
  std::variant<RadialPotential, ProductPotential> potential;

  std::string name() const;
  /// Value of R + |grad f|^2 for solitons; sup R otherwise.
  double R_origin() const;
  CurvatureSample<double> curvature(const ProductPoint& p) const;
  SolitonResidual residual(const ProductPoint& p) const;
  double conserved(const ProductPoint& p) const;
  double grad_norm(const ProductPoint& p) const;
};

/// Rejects non-positive scale or radius with std::invalid_argument.
ModelSpace make_model(const ModelVariant& spec);

/// {"model": "cigar" | "cigar-line" | "round-cylinder", "scale", "slope", "rhat", "radius"}.
/// A "bryant" model needs a profile and is built by the caller. Throws std::invalid_argument.
ModelVariant parse_model_spec(const nlohmann::json& j);

/// Cigar chart change of the conformal form (dx^2 + dy^2)/(1 + x^2 + y^2): rho = arcsinh r.
inline double cigar_rho(double r) { return std::asinh(r); }
inline double cigar_radius(double rho) { return std::sinh(rho); }

/// Rectangular (s, sigma) test grid on R x fiber.
struct ProductGrid {
  double s_min = -10.0, s_max = 10.0;
  double sigma_min = 0.05, sigma_max = 8.0;
  int n_s = 50, n_sigma = 50;

  double s(int i) const { return s_min + (s_max - s_min) * i / (n_s - 1); }
  double sigma(int j) const { return sigma_min + (sigma_max - sigma_min) * j / (n_sigma - 1); }
};

ProductPotential cigar_line_potential(const CigarLine& m, double c1, double c2);

/// sup over the grid of |Hess f - Ric| for f = c1 + c2 s + 2 ln cosh(a sigma).
double potential_family_residual(const CigarLine& model, double c1, double c2,
                                 const ProductGrid& grid = {});

using Perturbation = std::function<double(double s, double sigma)>;

struct RigidityProbe {
  double residual = 0;  // sup |Hess f - Ric| for canonical + eps * perturbation
  double kappa = 0;     // residual / eps
};

/// Throws std::invalid_argument when the perturbation is affine in s on the grid
/// (it then belongs to the potential family) or eps <= 0.
RigidityProbe potential_rigidity_probe(const CigarLine& model, const Perturbation& perturbation,
                                       double eps, const ProductGrid& grid = {});

/// Sphere factor of R x S^2 under Ricci flow: a^2(tau) = a0^2 - 2 tau.
struct SlicePoint {
  double tau = 0;
  double area = 0;
  double dA_dtau = 0;
  double half_total_R = 0;  // -(1/2) * integral of R da
  bool extinct = false;
};

struct SliceEvolution {
  double a0 = 0;
  double extinction_time = 0;
  std::vector<SlicePoint> series;
};

/// Samples tau on [0, tau_max] with `steps` intervals; past extinction points are flagged
/// extinct with zero area.
SliceEvolution cylinder_slice_evolution(double a0, double tau_max, int steps = 200);

}  // namespace soliton
