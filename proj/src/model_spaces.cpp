#include "soliton/model_spaces.hpp"

#include "soliton/profile_io.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace soliton {

namespace {

constexpr double kPi = std::numbers::pi;

double sech2(double x) {
  double c = std::cosh(x);
  return 1.0 / (c * c);
}

RadialPotential cigar_potential(double a) {
  return [a](double sigma) {
    return RadialPotentialJet{2.0 * log_cosh(a * sigma), 2.0 * a * std::tanh(a * sigma),
                              2.0 * a * a * sech2(a * sigma)};
  };
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

CigarLine CigarLine::from_rhat(double rhat) {
  if (!(rhat > 0.0 && rhat <= 1.0)) throw std::invalid_argument("CigarLine: rhat must lie in (0, 1]");
  return CigarLine{std::sqrt(rhat) / 2.0, std::sqrt(1.0 - rhat)};
}

ProductPotential cigar_line_potential(const CigarLine& m, double c1, double c2) {
  double a = m.scale;
  return [a, c1, c2](double s, double sigma) {
    ProductPotentialJet j;
    j.f = c1 + c2 * s + 2.0 * log_cosh(a * sigma);
    j.f_s = c2;
    j.f_sigma = 2.0 * a * std::tanh(a * sigma);
    j.f_sigma_sigma = 2.0 * a * a * sech2(a * sigma);
    return j;
  };
}

ModelSpace make_model(const ModelVariant& spec) {
  return std::visit(
      overloaded{
          [&](const Cigar& m) {
            if (!(m.scale > 0.0)) throw std::invalid_argument("cigar: scale must be positive");
            return ModelSpace{spec, cigar_fiber(m.scale), cigar_potential(m.scale)};
          },
          [&](const CigarLine& m) {
            if (!(m.scale > 0.0)) throw std::invalid_argument("cigar-line: scale must be positive");
            return ModelSpace{spec, ProductMetric(cigar_fiber(m.scale)),
                              cigar_line_potential(m, 0.0, m.slope)};
          },
          [&](const RoundCylinder& m) {
            if (!(m.radius > 0.0))
              throw std::invalid_argument("round-cylinder: radius must be positive");
            ProductPotential zero = [](double, double) { return ProductPotentialJet{}; };
            return ModelSpace{spec, ProductMetric(round_fiber(m.radius)), zero};
          },
          [&](const BryantNumeric& m) {
            return ModelSpace{spec, m.profile.metric(), m.profile.potential()};
          },
      },
      spec);
}

std::string ModelSpace::name() const {
  return std::visit(overloaded{[](const Cigar&) { return std::string("cigar"); },
                               [](const CigarLine&) { return std::string("cigar-line"); },
                               [](const RoundCylinder&) { return std::string("round-cylinder"); },
                               [](const BryantNumeric&) { return std::string("bryant"); }},
                    variant);
}

double ModelSpace::R_origin() const {
  return std::visit(
      overloaded{[](const Cigar& m) { return 4.0 * m.scale * m.scale; },
                 [](const CigarLine& m) { return 4.0 * m.scale * m.scale + m.slope * m.slope; },
                 [](const RoundCylinder& m) { return 2.0 / (m.radius * m.radius); },
                 [](const BryantNumeric& m) { return m.profile.R_origin(); }},
      variant);
}

// Warped models read the point's sigma as the radius and ignore s.
CurvatureSample<double> ModelSpace::curvature(const ProductPoint& p) const {
  if (auto* w = std::get_if<WarpedMetric>(&metric)) return curvature_at(*w, p.sigma);
  return curvature_at(std::get<ProductMetric>(metric), p);
}

SolitonResidual ModelSpace::residual(const ProductPoint& p) const {
  if (auto* w = std::get_if<WarpedMetric>(&metric))
    return soliton_residual(*w, std::get<RadialPotential>(potential), p.sigma);
  return soliton_residual(std::get<ProductMetric>(metric), std::get<ProductPotential>(potential),
                          p);
}

double ModelSpace::conserved(const ProductPoint& p) const {
  if (auto* w = std::get_if<WarpedMetric>(&metric))
    return conserved_quantity(*w, std::get<RadialPotential>(potential), p.sigma);
  return conserved_quantity(std::get<ProductMetric>(metric),
                            std::get<ProductPotential>(potential), p);
}

double ModelSpace::grad_norm(const ProductPoint& p) const {
  if (std::holds_alternative<WarpedMetric>(metric))
    return gradient_norm(std::get<RadialPotential>(potential), p.sigma);
  return gradient_norm(std::get<ProductPotential>(potential), p);
}

ModelVariant parse_model_spec(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("model") || !j["model"].is_string())
    throw std::invalid_argument("model spec: missing \"model\" string");
  std::string kind = j["model"].get<std::string>();
  auto number = [&](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw std::invalid_argument(std::string("model spec: ") + key +
                                                         " must be a number");
    return j[key].get<double>();
  };
  if (kind == "cigar") {
    Cigar m{number("scale", 1.0)};
    if (!(m.scale > 0.0)) throw std::invalid_argument("cigar: scale must be positive");
    return m;
  }
  if (kind == "cigar-line") {
    if (j.contains("rhat")) return CigarLine::from_rhat(number("rhat", 0.5));
    CigarLine m{number("scale", 1.0), number("slope", 0.0)};
    if (!(m.scale > 0.0)) throw std::invalid_argument("cigar-line: scale must be positive");
    return m;
  }
  if (kind == "round-cylinder") {
    RoundCylinder m{number("radius", 1.0)};
    if (!(m.radius > 0.0)) throw std::invalid_argument("round-cylinder: radius must be positive");
    return m;
  }
  if (kind == "bryant") {
    if (!j.contains("profile") || !j["profile"].is_string())
      throw std::invalid_argument("bryant: \"profile\" must name a saved profile JSON file");
    return BryantNumeric{load_profile(j["profile"].get<std::string>())};
  }
  throw std::invalid_argument("model spec: unknown model \"" + kind + "\"");
}

double potential_family_residual(const CigarLine& model, double c1, double c2,
                                 const ProductGrid& grid) {
  ProductMetric metric(cigar_fiber(model.scale));
  ProductPotential f = cigar_line_potential(model, c1, c2);
  double worst = 0.0;
  for (int i = 0; i < grid.n_s; ++i)
    for (int j = 0; j < grid.n_sigma; ++j) {
      ProductPoint p{grid.s(i), grid.sigma(j), 0.0};
      worst = std::max(worst, soliton_residual(metric, f, p).max_abs());
    }
  return worst;
}

RigidityProbe potential_rigidity_probe(const CigarLine& model, const Perturbation& perturbation,
                                       double eps, const ProductGrid& grid) {
  if (!(eps > 0.0)) throw std::invalid_argument("rigidity probe: amplitude must be positive");

  // Reject members of the family: least-squares fit to c1 + c2 s on the grid.
  const int n = grid.n_s * grid.n_sigma;
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd v(n);
  for (int i = 0; i < grid.n_s; ++i)
    for (int j = 0; j < grid.n_sigma; ++j) {
      int k = i * grid.n_sigma + j;
      A(k, 0) = 1.0;
      A(k, 1) = grid.s(i);
      v[k] = perturbation(grid.s(i), grid.sigma(j));
    }
  Eigen::VectorXd coef = A.colPivHouseholderQr().solve(v);
  double misfit = (A * coef - v).cwiseAbs().maxCoeff();
  if (misfit <= 1e-10 * (1.0 + v.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("rigidity probe: perturbation is affine in s on the grid (misfit " +
                                std::to_string(misfit) + "); it belongs to the potential family");

  constexpr double h = 1e-4;
  ProductPotential base = cigar_line_potential(model, 0.0, model.slope);
  ProductPotential f = [&](double s, double sigma) {
    ProductPotentialJet j = base(s, sigma);
    auto P = [&](double ds, double dsig) { return perturbation(s + ds, sigma + dsig); };
    double p0 = P(0, 0);
    j.f += eps * p0;
    j.f_s += eps * (P(h, 0) - P(-h, 0)) / (2 * h);
    j.f_sigma += eps * (P(0, h) - P(0, -h)) / (2 * h);
    j.f_ss += eps * (P(h, 0) - 2 * p0 + P(-h, 0)) / (h * h);
    j.f_sigma_sigma += eps * (P(0, h) - 2 * p0 + P(0, -h)) / (h * h);
    j.f_s_sigma += eps * (P(h, h) - P(h, -h) - P(-h, h) + P(-h, -h)) / (4 * h * h);
    return j;
  };

  ProductMetric metric(cigar_fiber(model.scale));
  RigidityProbe out;
  for (int i = 0; i < grid.n_s; ++i)
    for (int j = 0; j < grid.n_sigma; ++j) {
      ProductPoint p{grid.s(i), grid.sigma(j), 0.0};
      out.residual = std::max(out.residual, soliton_residual(metric, f, p).max_abs());
    }
  out.kappa = out.residual / eps;
  return out;
}

SliceEvolution cylinder_slice_evolution(double a0, double tau_max, int steps) {
  if (!(a0 > 0.0)) throw std::invalid_argument("slice evolution: radius must be positive");
  if (!(tau_max > 0.0) || steps < 1)
    throw std::invalid_argument("slice evolution: need tau_max > 0 and steps >= 1");
  SliceEvolution out;
  out.a0 = a0;
  out.extinction_time = a0 * a0 / 2.0;
  const double dtau = tau_max / steps;
  for (int k = 0; k <= steps; ++k) {
    SlicePoint pt;
    pt.tau = k * dtau;
    double a2 = a0 * a0 - 2.0 * pt.tau;
    if (a2 > 0.0) {
      pt.area = 4.0 * kPi * a2;
      pt.dA_dtau = 4.0 * kPi * -2.0;
      pt.half_total_R = -0.5 * (2.0 / a2) * pt.area;
    } else {
      pt.extinct = true;
    }
    out.series.push_back(pt);
  }
  return out;
}

}  // namespace soliton
