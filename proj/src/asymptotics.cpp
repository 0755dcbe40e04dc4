#include "soliton/asymptotics.hpp"

#include "soliton/dormand_prince.hpp"
#include "soliton/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

namespace soliton {

namespace {

constexpr double kPi = std::numbers::pi;

double loglog_slope(const std::vector<std::pair<double, double>>& xy, std::size_t from = 0) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = from; i < xy.size(); ++i) {
    if (!(xy[i].first > 0.0 && xy[i].second > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    double x = std::log(xy[i].first), y = std::log(xy[i].second);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Q(lambda) = Q_inf + a/lambda from samples at lambda and lambda/2.
double richardson(double q_full, double q_half) { return 2.0 * q_full - q_half; }

}  // namespace

GrowthReport summarize(std::string name, std::vector<std::pair<double, double>> samples) {
  GrowthReport rep;
  rep.name = std::move(name);
  if (samples.size() < 4) throw WindowError("growth report '" + rep.name + "': too few samples");
  rep.lambda_min = samples.front().first;
  rep.lambda_max = samples.back().first;
  rep.exponent = loglog_slope(samples);

  auto stats = [&](std::size_t from) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0;
    for (std::size_t i = from; i < samples.size(); ++i) {
      lo = std::min(lo, samples[i].second);
      hi = std::max(hi, samples[i].second);
      sum += samples[i].second;
    }
    double mean = sum / static_cast<double>(samples.size() - from);
    return std::tuple{lo, hi, mean};
  };
  std::size_t half = samples.size() / 2;
  std::size_t quarter = samples.size() - (samples.size() - half) / 2;
  auto [lo_h, hi_h, mean_h] = stats(half);
  auto [lo_a, hi_a, mean_a] = stats(0);
  double mean_q = std::get<2>(stats(quarter));
  rep.constant = mean_h;
  rep.second_half_constant = mean_q;
  rep.diagnostic = (hi_h - lo_h) / std::abs(mean_h);
  rep.window_spread = (hi_a - lo_a) / std::abs(mean_a);
  rep.samples = std::move(samples);
  return rep;
}

std::vector<GrowthReport> asymptotic_constants(const SolitonProfile& profile, double lambda_min,
                                               double lambda_max, int samples) {
  if (!(lambda_min > 0.0) || !(lambda_max >= 2.0 * lambda_min) || samples < 8)
    throw WindowError("asymptotic window [" + std::to_string(lambda_min) + ", " +
                      std::to_string(lambda_max) + "] too short for a stable fit");
  if (lambda_max > profile.f_max())
    throw WindowError("asymptotic window reaches lambda = " + std::to_string(lambda_max) +
                      " but f(r_max) = " + std::to_string(profile.f_max()) + "; raise r_max");

  const double R0 = profile.R_origin();
  std::vector<std::pair<double, double>> Rs, Dsqrt, Dlam, RD2, Alam, Vlam2;
  for (int i = 0; i < samples; ++i) {
    double lambda = lambda_min * std::pow(lambda_max / lambda_min, double(i) / (samples - 1));
    if (i == samples - 1) lambda = lambda_max;
    double r = profile.invert_potential(lambda);
    ProfileState st = profile.query(r);
    double R = profile.curvature(r).R;
    double D = kPi * st.w;
    double A = 4.0 * kPi * st.w * st.w;
    double V = profile.volume(r);
    Rs.emplace_back(lambda, R * r / std::sqrt(R0));
    Dsqrt.emplace_back(lambda, D / std::sqrt(r) * std::pow(R0, 0.25));
    Dlam.emplace_back(lambda, D * std::sqrt(R0) / lambda);
    RD2.emplace_back(lambda, R * D * D);
    Alam.emplace_back(lambda, A * R0 / lambda);
    Vlam2.emplace_back(lambda, V * std::pow(R0, 1.5) / (lambda * lambda));
  }
  return {summarize("R_s", std::move(Rs)),           summarize("D_over_sqrt_s", std::move(Dsqrt)),
          summarize("D_over_lambda", std::move(Dlam)), summarize("R_D2", std::move(RD2)),
          summarize("A_over_lambda", std::move(Alam)), summarize("V_over_lambda2", std::move(Vlam2))};
}

const GrowthReport& find_report(const std::vector<GrowthReport>& reports, const std::string& name) {
  for (const auto& r : reports)
    if (r.name == name) return r;
  throw std::out_of_range("no growth report named " + name);
}

CurveLimitRecord curve_limits(const SolitonProfile& profile, double lambda_max) {
  if (lambda_max > profile.f_max() || !(lambda_max >= 8.0))
    throw WindowError("curve limits: lambda_max must lie in [8, f(r_max)]");
  CurveLimitRecord rec;
  rec.curve_id = "bryant-radial";
  auto at = [&](double lambda) {
    double r = profile.invert_potential(lambda);
    return std::pair{profile.query(r).fp, profile.curvature(r).R};
  };
  auto [z1, R1] = at(lambda_max);
  auto [z2, R2] = at(lambda_max / 2);
  auto [z4, R4] = at(lambda_max / 4);
  double zeta_a = richardson(z1, z2), zeta_b = richardson(z2, z4);
  double R_a = richardson(R1, R2), R_b = richardson(R2, R4);
  rec.zeta = zeta_a;
  rec.R_limit = R_a;
  rec.zeta_spread = std::abs(zeta_a - zeta_b);
  rec.R_spread = std::abs(R_a - R_b);
  rec.closure_error = std::abs(rec.zeta * rec.zeta + rec.R_limit - profile.R_origin());

  double prev = -1.0;
  for (int i = 0; i <= 64; ++i) {
    double lambda = lambda_max * i / 64.0;
    double z = lambda == 0.0 ? 0.0 : at(lambda).first;
    rec.zeta_samples.emplace_back(lambda, z);
    if (z < prev) rec.gradient_monotone = false;
    prev = z;
  }
  return rec;
}

CurveLimitRecord curve_limits(const CigarLine& model, double s0, double sigma0, double span) {
  const double a = model.scale, c2 = model.slope;
  auto grad = [&](double sigma) { return std::pair{c2, 2.0 * a * std::tanh(a * sigma)}; };
  auto [g0s, g0sig] = grad(sigma0);
  if (g0s * g0s + g0sig * g0sig == 0.0)
    throw std::invalid_argument("curve limits: start point is a critical point of f");
  if (!(span > 0.0)) throw std::invalid_argument("curve limits: span must be positive");

  using Integrator = DormandPrince45<double, 2>;
  Integrator::Options opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  Integrator stepper(opt);
  auto rhs = [&](double, const Integrator::State& x) {
    auto [gs, gsig] = grad(x[1]);
    double n2 = gs * gs + gsig * gsig;
    return Integrator::State(gs / n2, gsig / n2);
  };

  CurveLimitRecord rec;
  rec.curve_id = "cigar-line(s0=" + std::to_string(s0) + ",sigma0=" + std::to_string(sigma0) + ")";
  auto norm_at = [&](double sigma) {
    auto [gs, gsig] = grad(sigma);
    return std::hypot(gs, gsig);
  };
  auto R_at = [&](double sigma) {
    double c = std::cosh(a * sigma);
    return 4.0 * a * a / (c * c);
  };

  double prev = norm_at(sigma0);
  rec.zeta_samples.emplace_back(0.0, prev);
  auto observer = [&](double t, const Integrator::State& x, const Integrator::State&) {
    double z = norm_at(x[1]);
    if (z < prev * (1.0 - 1e-14)) rec.gradient_monotone = false;
    prev = z;
    if (t > rec.zeta_samples.back().first) rec.zeta_samples.emplace_back(t, z);
    return true;
  };
  Integrator::State x(s0, sigma0);
  std::vector<double> sigmas;
  double t_prev = 0.0;
  for (double t : {span / 4, span / 2, span}) {
    x = stepper.integrate(rhs, t_prev, x, t, observer).y_end;
    sigmas.push_back(x[1]);
    t_prev = t;
  }
  double z4 = norm_at(sigmas[0]), z2 = norm_at(sigmas[1]), z1 = norm_at(sigmas[2]);
  double R4 = R_at(sigmas[0]), R2 = R_at(sigmas[1]), R1 = R_at(sigmas[2]);
  double zeta_a = richardson(z1, z2), zeta_b = richardson(z2, z4);
  double R_a = richardson(R1, R2), R_b = richardson(R2, R4);
  rec.zeta = zeta_a;
  rec.R_limit = R_a;
  rec.zeta_spread = std::abs(zeta_a - zeta_b);
  rec.R_spread = std::abs(R_a - R_b);
  rec.closure_error = std::abs(rec.zeta * rec.zeta + rec.R_limit - (4.0 * a * a + c2 * c2));
  return rec;
}

namespace {

SandwichResult finish_sandwich(std::vector<std::pair<double, double>> samples, double delta) {
  SandwichResult out;
  out.delta = delta;
  if (samples.empty()) return out;
  out.max_ratio = -std::numeric_limits<double>::infinity();
  for (const auto& [s, q] : samples) out.max_ratio = std::max(out.max_ratio, q);
  out.ratio_at_end = samples.back().second;
  for (std::size_t i = samples.size(); i-- > 0;) {
    if (samples[i].second < 1.0 - delta) break;
    out.s_bar = samples[i].first;
    out.s_bar_found = true;
  }
  out.samples = std::move(samples);
  return out;
}

}  // namespace

SandwichResult sandwich_check(const SolitonProfile& profile, const std::vector<double>& s_values,
                              double delta) {
  std::vector<std::pair<double, double>> samples;
  for (double s : s_values) {
    if (!(s > 0.0)) throw std::invalid_argument("sandwich: distances must be positive");
    samples.emplace_back(s, profile.query(s).f / s);
  }
  return finish_sandwich(std::move(samples), delta);
}

SandwichResult sandwich_check(const CigarLine& model, const std::vector<double>& s_values,
                              double delta) {
  ProductPotential f = cigar_line_potential(model, 0.0, model.slope);
  std::vector<std::pair<double, double>> samples;
  for (double s : s_values) {
    if (!(s > 0.0)) throw std::invalid_argument("sandwich: distances must be positive");
    samples.emplace_back(s, f(s, 0.0).f / s);  // d((0, 0), (s, 0)) = s on the flat factor
  }
  return finish_sandwich(std::move(samples), delta);
}

AngleSample angle_check(const CigarLine& model, const ProductPoint& base,
                        const ProductPoint& target, double resolution) {
  ProductMetric metric(cigar_fiber(model.scale));
  ProductPotential f = cigar_line_potential(model, 0.0, model.slope);
  GeodesicPath<ProductPoint> path = geodesic(metric, base, target, resolution);
  ProductPotentialJet fq = f(target.s, target.sigma);
  AngleSample out;
  out.sigma = target.sigma;
  out.s = target.s;
  out.length = path.length;
  out.grad_norm = std::hypot(fq.f_s, fq.f_sigma);
  // N = grad f/|grad f| in the orthonormal frame (d/ds, d/dsigma, w^-1 d/dtheta).
  out.cos_theta = (path.tangent_at_end.axial * fq.f_s + path.tangent_at_end.radial * fq.f_sigma) /
                  out.grad_norm;
  out.lhs = out.grad_norm * out.cos_theta;
  out.rhs = (fq.f - f(base.s, base.sigma).f) / path.length;
  return out;
}

AngleSample angle_check(const SolitonProfile& profile, double r) {
  GeodesicPath<WarpedPoint> path =
      geodesic(profile.metric(), WarpedPoint{0.0, Eigen::Vector3d::UnitX()},
               WarpedPoint{r, Eigen::Vector3d::UnitX()}, 1e-10);
  ProfileState st = profile.query(r);
  AngleSample out;
  out.sigma = r;
  out.length = path.length;
  out.grad_norm = st.fp;
  out.cos_theta = path.tangent_at_end.radial;  // N = d/dr
  out.lhs = st.fp * out.cos_theta;
  out.rhs = st.f / path.length;
  return out;
}

std::vector<AngleSample> angle_profile(const CigarLine& model, const ProductPoint& base,
                                       double level, double sigma_max, int count) {
  if (!(model.slope > 0.0)) throw std::invalid_argument("angle profile: needs a positive slope");
  if (count < 2) throw std::invalid_argument("angle profile: need at least two targets");
  std::vector<AngleSample> out;
  for (int k = 0; k < count; ++k) {
    double sigma = sigma_max * k / (count - 1);
    double s = (level - 2.0 * log_cosh(model.scale * sigma)) / model.slope;
    out.push_back(angle_check(model, base, ProductPoint{s, sigma, 0.0}));
  }
  return out;
}

double unit_ball_volume(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return kPi;
    case 3: return 4.0 * kPi / 3.0;
  }
  throw std::invalid_argument("unit_ball_volume: only n = 1, 2, 3 are tabulated");
}

BishopGromovScan bishop_gromov_scan(const SolitonProfile& profile,
                                    const std::vector<double>& radii) {
  BishopGromovScan scan;
  if (radii.size() < 2) throw std::invalid_argument("bishop-gromov: need at least two radii");
  for (double r : radii) {
    if (!(r > 0.0)) throw std::invalid_argument("bishop-gromov: radii must be positive");
    scan.ratios.emplace_back(r, profile.volume(r) / (unit_ball_volume(3) * r * r * r));
  }
  scan.worst_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < scan.ratios.size(); ++i) {
    double d = scan.ratios[i].second - scan.ratios[i - 1].second;
    scan.worst_increase = std::max(scan.worst_increase, d);
    if (d > 0.0) scan.non_increasing = false;
  }
  scan.alpha = scan.ratios.back().second;
  scan.decay_exponent = loglog_slope(scan.ratios, scan.ratios.size() / 2);
  return scan;
}

}  // namespace soliton
