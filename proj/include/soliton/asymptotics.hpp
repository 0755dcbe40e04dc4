#pragma once

#include "soliton/bryant.hpp"
#include "soliton/model_spaces.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace soliton {

/// The requested window does not fit in the integrated range.
class WindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GrowthReport {
  std::string name;
  double lambda_min = 0, lambda_max = 0;
  double constant = 0;       // mean over the window's second half
  double exponent = 0;       // least-squares slope of log(value) against log(lambda)
  double diagnostic = 0;     // relative spread over the window's last half
  double window_spread = 0;  // relative spread over the whole window
  double second_half_constant = 0;  // mean over the last quarter
  std::vector<std::pair<double, double>> samples;  // (lambda, value)
};

/// Dimensionless reports, invariant under homothety:
///   R_s = R s / sqrt(R(O)), D_over_sqrt_s = D / sqrt(s) * R(O)^(1/4),
///   D_over_lambda = D sqrt(R(O)) / lambda, R_D2 = R D^2,
///   A_over_lambda = A R(O) / lambda, V_over_lambda2 = V R(O)^(3/2) / lambda^2,
/// where s = d(O, S_lambda) = r(lambda) and D = pi w is the inner diameter.
/// Throws WindowError if lambda_max > f(r_max), lambda_min <= 0 or lambda_max < 2 lambda_min.
std::vector<GrowthReport> asymptotic_constants(const SolitonProfile& profile, double lambda_min,
                                               double lambda_max, int samples = 64);

const GrowthReport& find_report(const std::vector<GrowthReport>& reports, const std::string& name);

/// Summary of a sampled positive series (used by the reports and by tests).
GrowthReport summarize(std::string name, std::vector<std::pair<double, double>> samples);

struct CurveLimitRecord {
  std::string curve_id;
  double zeta = 0;      // lim |grad f| along the integral curve of grad f/|grad f|^2
  double R_limit = 0;   // lim R along the curve
  double zeta_spread = 0;
  double R_spread = 0;
  double closure_error = 0;  // |zeta^2 + R_limit - R(O)|
  bool gradient_monotone = true;
  std::vector<std::pair<double, double>> zeta_samples;  // (lambda, |grad f|)
};

/// Radial integral curve on the Bryant profile, extrapolated in 1/lambda up to lambda_max.
CurveLimitRecord curve_limits(const SolitonProfile& profile, double lambda_max);

/// Integral curve of grad f/|grad f|^2 on R x cigar from (s0, sigma0), followed for
/// `span` units of f. Throws std::invalid_argument at a critical point of f.
CurveLimitRecord curve_limits(const CigarLine& model, double s0, double sigma0,
                              double span = 400.0);

struct SandwichResult {
  double max_ratio = 0;  // max f/s over the samples, must stay < 1
  double ratio_at_end = 0;
  double s_bar = 0;      // smallest sampled s with f/s >= 1 - delta from there on
  bool s_bar_found = false;
  double delta = 0.05;
  std::vector<std::pair<double, double>> samples;  // (s, f/s)
};

/// f/s at distance s from O on the Bryant profile (s = r).
SandwichResult sandwich_check(const SolitonProfile& profile, const std::vector<double>& s_values,
                              double delta = 0.05);

/// f/s along the s-axis of R x cigar measured from (0, 0); tends to the slope.
SandwichResult sandwich_check(const CigarLine& model, const std::vector<double>& s_values,
                              double delta = 0.05);

struct AngleSample {
  double sigma = 0, s = 0;
  double length = 0;
  double cos_theta = 0;
  double grad_norm = 0;
  double lhs = 0;  // |grad f(q)| cos theta
  double rhs = 0;  // (f(q) - f(base)) / length
  bool holds() const { return lhs >= rhs - 1e-12 * std::max(1.0, std::abs(rhs)); }
};

AngleSample angle_check(const CigarLine& model, const ProductPoint& base,
                        const ProductPoint& target, double resolution = 1e-9);

/// Bryant: base at the origin, target at radius r in any direction.
AngleSample angle_check(const SolitonProfile& profile, double r);

/// Targets on the level {f = level} at theta = 0 with sigma in [0, sigma_max].
std::vector<AngleSample> angle_profile(const CigarLine& model, const ProductPoint& base,
                                       double level, double sigma_max, int count);

/// Unit ball volume omega_n for n = 1, 2, 3.
double unit_ball_volume(int n);

struct BishopGromovScan {
  std::vector<std::pair<double, double>> ratios;  // (r, vol B(O, r)/(omega_3 r^3))
  double worst_increase = 0;                      // max adjacent increase (<= 0 when monotone)
  bool non_increasing = true;
  double alpha = 0;           // ratio at the largest radius
  double decay_exponent = 0;  // log-log slope of the ratio over the outer half
};

BishopGromovScan bishop_gromov_scan(const SolitonProfile& profile,
                                    const std::vector<double>& radii);

}  // namespace soliton
