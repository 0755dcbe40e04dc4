#include "soliton/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <numbers>
#include <set>

namespace soliton {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPi = 4.0 * kPi;

// Below this radius w'' of the interpolant is dominated by roundoff (h^-2 amplification on
// the tiny first steps); the series covers that range.
constexpr double kResidualFloor = 0.01;

using ProfilePtr = std::shared_ptr<const SolitonProfile>;

struct Context {
  const SuiteConfig& cfg;
  std::shared_future<ProfilePtr> bryant;
  std::shared_future<ProfilePtr> homothety;
  SuiteTables& tables;

  const SolitonProfile& profile() const { return *bryant.get(); }
};

using CheckFn = std::function<void(const Context&, CheckResult&)>;

struct Entry {
  CheckInfo info;
  CheckFn run;
};

void verdict(CheckResult& r, bool ok) { r.status = ok ? CheckStatus::pass : CheckStatus::fail; }

nlohmann::ordered_json band(double lo, double hi) { return nlohmann::ordered_json::array({lo, hi}); }

// Marks the check measured-only when the profile does not reach the level it needs.
bool level_out_of_reach(const SolitonProfile& p, double lambda, CheckResult& r) {
  if (lambda <= p.f_max()) return false;
  r.status = CheckStatus::measured_only;
  r.measured["f_at_r_max"] = p.f_max();
  r.note = "window too short: needs lambda = " + std::to_string(lambda) + " but f(r_max) = " +
           std::to_string(p.f_max()) + "; raise r_max";
  return true;
}

bool radius_out_of_reach(const SolitonProfile& p, double radius, CheckResult& r) {
  if (radius <= p.r_max()) return false;
  r.status = CheckStatus::measured_only;
  r.measured["r_max"] = p.r_max();
  r.note = "window too short: needs r = " + std::to_string(radius) + "; raise r_max";
  return true;
}

// Halton points in [lo, hi], deterministic stand-ins for random draws.
double halton(int index, int base, double lo, double hi) {
  double f = 1.0, x = 0.0;
  for (int i = index; i > 0; i /= base) {
    f /= base;
    x += f * (i % base);
  }
  return lo + (hi - lo) * x;
}

// ---------------------------------------------------------------------------------------------
// Bryant construction

void bryant_construction(const Context& ctx, CheckResult& r) {
  const SolitonProfile& p = ctx.profile();
  const double r_top = std::min(200.0, p.r_max());
  WarpedMetric metric(
      3,
      [&p](double x) {
        ProfileState s = p.interpolant_jet(x);
        return WarpJet<double>{s.w, s.wp, s.wpp, s.one_minus_wp};
      },
      p.r_max(), p.series().w3);
  RadialPotential potential = [&p](double x) {
    ProfileState s = p.interpolant_jet(x);
    return RadialPotentialJet{s.f, s.fp, s.fpp};
  };
  double residual = 0.0, drift = 0.0;
  const auto& n = p.nodes();
  for (std::size_t i = 0; i + 1 < n.size(); ++i) {
    double mid = 0.5 * (n[i].r + n[i + 1].r);
    if (mid >= kResidualFloor && mid <= r_top)
      residual = std::max(residual, soliton_residual(metric, potential, mid).max_abs());
  }
  for (const auto& node : n)
    if (node.r <= r_top)
      drift = std::max(drift, std::abs(scalar_curvature(node.w, node.one_minus_wp, node.fp) +
                                       node.fp * node.fp - p.R_origin()));
  const double res_tol = 1e-8 * ctx.cfg.tol_scale();
  const double drift_tol = 1e-9 * ctx.cfg.tol_scale();
  r.measured["max_residual"] = residual;
  r.measured["max_drift"] = drift;
  r.measured["nodes"] = n.size();
  r.measured["r_checked"] = r_top;
  r.expected["max_residual"] = res_tol;
  r.expected["max_drift"] = drift_tol;
  r.tolerance = drift_tol;
  if (r_top < 200.0) r.note = "profile ends before r = 200; checked up to r_max";
  verdict(r, residual <= res_tol && drift <= drift_tol);
}

void homothety_covariance(const Context& ctx, CheckResult& r) {
  const SolitonProfile& p = ctx.profile();
  const SolitonProfile& q = *ctx.homothety.get();
  // q solves with R(O) = 2, i.e. the metric g/2: r -> r/sqrt2, w -> w/sqrt2, f -> f.
  const double k = std::sqrt(2.0);
  const double r_top = std::min(200.0, std::min(p.r_max(), q.r_max() * k));
  double worst_w = 0.0, worst_f = 0.0, worst_fp = 0.0;
  for (int i = 0; i <= 400; ++i) {
    double x = 0.1 * std::pow(r_top / 0.1, i / 400.0);
    ProfileState a = p.query(x), b = q.query(x / k);
    worst_w = std::max(worst_w, std::abs(k * b.w - a.w) / a.w);
    worst_f = std::max(worst_f, std::abs(b.f - a.f) / std::max(1.0, a.f));
    worst_fp = std::max(worst_fp, std::abs(b.fp / k - a.fp));
  }
  const double tol = 1e-6;
  r.measured["w_rel_error"] = worst_w;
  r.measured["f_rel_error"] = worst_f;
  r.measured["fp_error"] = worst_fp;
  r.measured["r_checked"] = r_top;
  r.expected["max_error"] = tol;
  r.tolerance = tol;
  verdict(r, std::max({worst_w, worst_f, worst_fp}) <= tol);
}

// ---------------------------------------------------------------------------------------------
// Level sets

std::vector<double> scan_grid(const SuiteConfig& cfg) {
  return level_grid(cfg.level_min, cfg.level_max, cfg.level_count, false);
}

void detII_decreasing(const Context& ctx, CheckResult& r) {
  const SolitonProfile& p = ctx.profile();
  if (level_out_of_reach(p, ctx.cfg.level_max, r)) return;
  auto grid = scan_grid(ctx.cfg);
  MonotonicityScan scan = detII_monotonicity_scan(p, grid);
  ctx.tables.levels = growth_tables(p, grid).rows;
  r.measured["levels"] = grid.size();
  r.measured["violations"] = scan.detII_violations;
  r.measured["worst_increase"] = scan.detII_worst_increase;
  r.measured["first"] = scan.detII_first;
  r.measured["last"] = scan.detII_last;
  r.expected["violations"] = 0;
  verdict(r, scan.detII_violations == 0 && scan.detII_last < scan.detII_first);
}

void km_integral_bounded(const Context& ctx, CheckResult& r) {
  const SolitonProfile& p = ctx.profile();
  if (level_out_of_reach(p, ctx.cfg.level_max, r)) return;
  MonotonicityScan scan = detII_monotonicity_scan(p, scan_grid(ctx.cfg));
  r.measured["violations"] = scan.km_violations;
  r.measured["min"] = scan.km_min;
  r.measured["max"] = scan.km_max;
  r.measured["half_level"] = scan.km_half_level ? nlohmann::ordered_json(*scan.km_half_level)
                                                : nlohmann::ordered_json(nullptr);
  r.expected["band"] = band(0.0, kFourPi);
  r.expected["half_level_at_most"] = 100.0;
  verdict(r, scan.km_violations == 0 && scan.km_min > 0.0 && scan.km_max < kFourPi &&
                 scan.km_half_level && *scan.km_half_level <= 100.0);
}

void gauss_bonnet_closure(const Context& ctx, CheckResult& r) {
  const SolitonProfile& p = ctx.profile();
  if (level_out_of_reach(p, ctx.cfg.level_max, r)) return;
  double worst = 0.0;
  for (double lambda : scan_grid(ctx.cfg))
    worst = std::max(worst, std::abs(record(p, lambda).gauss_bonnet() - kFourPi));
  const double tol = 1e-9;
  r.measured["max_abs_error"] = worst;
  r.expected["value"] = kFourPi;
  r.tolerance = tol;
  verdict(r, worst <= tol);
}

std::vector<DoublingRow> doubling_rows(const SolitonProfile& p) {
  return growth_tables(p, level_grid(50.0, 200.0, 16, false)).doubling;
}

void doubling_check(const Context& ctx, CheckResult& r, bool area) {
  const SolitonProfile& p = ctx.profile();
  if (level_out_of_reach(p, 200.0, r)) return;
  double lo = area ? 1.9 : 3.6, hi = area ? 2.1 : 4.4;
  double min_ratio = 1e300, max_ratio = 0.0;
  int rows = 0;
  for (const DoublingRow& d : doubling_rows(p)) {
    if (d.lambda < 50.0 || d.lambda > 100.0) continue;
    double v = area ? d.area_ratio : d.volume_ratio;
    min_ratio = std::min(min_ratio, v);
    max_ratio = std::max(max_ratio, v);
    ++rows;
  }
  r.measured["min_ratio"] = min_ratio;
  r.measured["max_ratio"] = max_ratio;
  r.measured["rows"] = rows;
  r.expected["band"] = band(lo, hi);
  verdict(r, rows >= 2 && min_ratio >= lo && max_ratio <= hi);
}

using FdFn = FiniteDifferenceCheck (*)(const SolitonProfile&, double, double);

void fd_check(const Context& ctx, CheckResult& r, FdFn fn) {
  const SolitonProfile& p = ctx.profile();
  if (level_out_of_reach(p, 200.0, r)) return;
  const double tol = 1e-4, min_gain = 3.5;
  double worst = 0.0, worst_gain = 1e300;
  auto rows = nlohmann::ordered_json::array();
  for (double lambda : {10.0, 50.0, 100.0, 200.0}) {
    double h = default_fd_step(p, lambda);
    FiniteDifferenceCheck a = fn(p, lambda, h), b = fn(p, lambda, 0.5 * h);
    double gain = a.rel_error() / b.rel_error();
    worst = std::max(worst, a.rel_error());
    worst_gain = std::min(worst_gain, gain);
    rows.push_back({{"lambda", lambda}, {"h", h}, {"rel_error", a.rel_error()},
                    {"rel_error_half_h", b.rel_error()}, {"gain", gain}});
  }
  r.measured["worst_rel_error"] = worst;
  r.measured["worst_gain"] = worst_gain;
  r.measured["rows"] = rows;
  r.expected["rel_error_at_most"] = tol;
  r.expected["gain_at_least"] = min_gain;
  r.tolerance = tol;
  if (worst <= tol && worst_gain < min_gain)
    r.note = "halving h does not reduce the error: the difference quotient sits on the solver "
             "error floor, tighten tol";
  verdict(r, worst <= tol && worst_gain >= min_gain);
}

void scalar_curvature_decreasing(const Context& ctx, CheckResult& r) {
  const SolitonProfile& p = ctx.profile();
  if (radius_out_of_reach(p, 200.0, r)) return;
  int violations = 0;
  double prev = p.R_origin();
  for (const auto& node : p.nodes()) {
    double R = p.curvature(node.r).R;
    if (!(R < prev) && node.r > p.eps()) ++violations;
    prev = R;
  }
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i < 32; ++i) {
    double x = 50.0 * std::pow(4.0, i / 31.0);
    samples.emplace_back(x, p.curvature(x).R);
  }
  double exponent = summarize("R", samples).exponent;
  double R200 = p.curvature(200.0).R;
  r.measured["violations"] = violations;
  r.measured["R_at_200"] = R200;
  r.measured["decay_exponent"] = exponent;
  r.expected["R_at_200_at_most"] = 0.05;
  r.expected["decay_exponent"] = band(-1.1, -0.9);
  verdict(r, violations == 0 && R200 <= 0.05 && exponent >= -1.1 && exponent <= -0.9);
}

void ambient_diameter_bound(const Context& ctx, CheckResult& r) {
  const SolitonProfile& p = ctx.profile();
  if (level_out_of_reach(p, 200.0, r)) return;
  bool ok = true;
  auto rows = nlohmann::ordered_json::array();
  for (double lambda : {10.0, 50.0, 200.0}) {
    double inner = record(p, lambda).diameter_inner;
    double ambient = ambient_diameter(p, lambda);
    ok = ok && ambient <= inner * (1.0 + 1e-9) && ambient >= 2.0 * p.query(p.invert_potential(lambda)).w;
    rows.push_back({{"lambda", lambda}, {"ambient", ambient}, {"inner", inner},
                    {"ratio", ambient / inner}});
  }
  r.measured["rows"] = rows;
  r.expected["band"] = "2 w <= ambient <= pi w";
  verdict(r, ok);
}

void diameter_drop(const Context& ctx, CheckResult& r) {
  const SolitonProfile& p = ctx.profile();
  if (level_out_of_reach(p, 200.0, r)) return;
  const std::vector<std::pair<double, double>> pairs = {
      {200, 50}, {200, 100}, {200, 150}, {150, 50}, {150, 100},
      {100, 50}, {100, 20},  {60, 50},   {180, 120}, {120, 80}};
  double min_slack = 1e300, worst_beta = 0.0;
  auto rows = nlohmann::ordered_json::array();
  for (auto [a, b] : pairs) {
    DiameterDrop d = diameter_drop_bound(p, a, b);
    min_slack = std::min(min_slack, d.slack());
    if (b >= 50.0) worst_beta = std::max(worst_beta, std::abs(d.beta_b - 1.0));
    rows.push_back({{"a", a}, {"b", b}, {"slack", d.slack()}, {"beta_b", d.beta_b}});
  }
  r.measured["min_slack"] = min_slack;
  r.measured["worst_beta_deviation"] = worst_beta;
  r.measured["rows"] = rows;
  r.expected["slack_at_least"] = 0.0;
  r.expected["beta_deviation_at_most"] = 0.1;
  verdict(r, min_slack >= 0.0 && worst_beta <= 0.1);
}

// ---------------------------------------------------------------------------------------------
// Asymptotics on the profile

std::vector<GrowthReport> window_reports(const Context& ctx) {
  return asymptotic_constants(ctx.profile(), ctx.cfg.window_min, ctx.cfg.window_max);
}

void report_fields(CheckResult& r, const GrowthReport& g) {
  r.measured["constant"] = g.constant;
  r.measured["exponent"] = g.exponent;
  r.measured["diagnostic"] = g.diagnostic;
  r.measured["window_spread"] = g.window_spread;
  r.measured["window"] = band(g.lambda_min, g.lambda_max);
}

void curvature_decay_Rs(const Context& ctx, CheckResult& r) {
  if (level_out_of_reach(ctx.profile(), ctx.cfg.window_max, r)) return;
  auto reports = window_reports(ctx);
  ctx.tables.growth = reports;
  const GrowthReport& g = find_report(reports, "R_s");
  report_fields(r, g);
  double lo = 1e300, hi = 0.0;
  for (auto [l, v] : g.samples) lo = std::min(lo, v), hi = std::max(hi, v);
  r.measured["band"] = band(lo, hi);
  r.expected["band"] = band(0.1, 10.0);
  r.expected["window_spread_at_most"] = 0.1;
  verdict(r, lo >= 0.1 && hi <= 10.0 && g.window_spread <= 0.1);
}

void diameter_ratio_decay(const Context& ctx, CheckResult& r) {
  const SolitonProfile& p = ctx.profile();
  if (level_out_of_reach(p, 200.0, r)) return;
  const GrowthReport& g = find_report(asymptotic_constants(p, 10.0, 200.0), "D_over_lambda");
  int increases = 0;
  for (std::size_t i = 1; i < g.samples.size(); ++i)
    if (!(g.samples[i].second < g.samples[i - 1].second)) ++increases;
  double terminal = g.samples.back().second;
  r.measured["increases"] = increases;
  r.measured["value_at_10"] = g.samples.front().second;
  r.measured["terminal"] = terminal;
  r.measured["exponent"] = g.exponent;
  r.expected["terminal_at_most"] = 0.25;
  r.expected["increases"] = 0;
  if (terminal > 0.25)
    r.note = "decreasing like lambda^(-1/2) but still above 0.25 at lambda = 200";
  verdict(r, increases == 0 && terminal <= 0.25);
}

void diameter_sqrt_growth(const Context& ctx, CheckResult& r) {
  if (level_out_of_reach(ctx.profile(), ctx.cfg.window_max, r)) return;
  const GrowthReport& g = find_report(window_reports(ctx), "D_over_sqrt_s");
  report_fields(r, g);
  r.expected["window_spread_at_most"] = 0.1;
  verdict(r, g.window_spread <= 0.1);
}

void curvature_diameter_constant(const Context& ctx, CheckResult& r) {
  if (level_out_of_reach(ctx.profile(), ctx.cfg.window_max, r)) return;
  const GrowthReport& g = find_report(window_reports(ctx), "R_D2");
  report_fields(r, g);
  double pi2 = kPi * kPi;
  r.measured["C_over_pi2"] = g.constant / pi2;
  r.measured["C_over_2pi2"] = g.constant / (2.0 * pi2);
  r.measured["nearer"] = std::abs(g.constant - pi2) < std::abs(g.constant - 2.0 * pi2)
                             ? "pi^2"
                             : "2 pi^2";
  r.expected["band"] = band(pi2, 3.0 * pi2);
  r.expected["window_spread_at_most"] = 0.1;
  r.note = "stated constant pi^2; the round S^2 of diameter 1 has R = 2 pi^2";
  verdict(r, g.constant >= pi2 && g.constant <= 3.0 * pi2 && g.window_spread <= 0.1);
}

void curve_limits_bryant(const Context& ctx, CheckResult& r) {
  const SolitonProfile& p = ctx.profile();
  if (level_out_of_reach(p, ctx.cfg.window_max, r)) return;
  CurveLimitRecord c = curve_limits(p, ctx.cfg.window_max);
  r.measured["zeta"] = c.zeta;
  r.measured["R_limit"] = c.R_limit;
  r.measured["zeta_spread"] = c.zeta_spread;
  r.measured["R_spread"] = c.R_spread;
  r.measured["closure_error"] = c.closure_error;
  r.measured["gradient_monotone"] = c.gradient_monotone;
  r.expected["zeta"] = 1.0;
  r.expected["R_limit"] = 0.0;
  r.tolerance = 1e-3;
  verdict(r, std::abs(c.zeta - 1.0) <= 1e-3 && std::abs(c.R_limit) <= 1e-3 &&
                 c.closure_error <= 1e-3 && c.gradient_monotone);
}

void sandwich_bryant(const Context& ctx, CheckResult& r) {
  const SolitonProfile& p = ctx.profile();
  if (radius_out_of_reach(p, 200.0, r)) return;
  std::vector<double> s;
  for (int i = 1; i <= 40; ++i) s.push_back(5.0 * i);
  SandwichResult sw = sandwich_check(p, s);
  r.measured["max_ratio"] = sw.max_ratio;
  r.measured["ratio_at_200"] = sw.ratio_at_end;
  r.measured["s_bar"] = sw.s_bar_found ? nlohmann::ordered_json(sw.s_bar) : nlohmann::ordered_json(nullptr);
  r.expected["band_beyond_s_bar"] = band(1.0 - sw.delta, 1.0);
  verdict(r, sw.max_ratio < 1.0 && sw.s_bar_found && sw.ratio_at_end >= 1.0 - sw.delta);
}

void angle_bryant_radial(const Context& ctx, CheckResult& r) {
  const SolitonProfile& p = ctx.profile();
  if (radius_out_of_reach(p, 200.0, r)) return;
  double worst = 0.0;
  bool holds = true;
  for (double x : {1.0, 10.0, 50.0, 100.0, 200.0}) {
    AngleSample a = angle_check(p, x);
    worst = std::max(worst, 1.0 - a.cos_theta);
    holds = holds && a.holds();
  }
  r.measured["max_one_minus_cos"] = worst;
  r.measured["inequality_holds"] = holds;
  r.expected["cos_theta"] = 1.0;
  r.tolerance = 1e-9;
  verdict(r, worst <= 1e-9 && holds);
}

void bishop_gromov(const Context& ctx, CheckResult& r) {
  const SolitonProfile& p = ctx.profile();
  if (radius_out_of_reach(p, 200.0, r)) return;
  std::vector<double> radii;
  for (int i = 1; i <= 20; ++i) radii.push_back(10.0 * i);
  BishopGromovScan scan = bishop_gromov_scan(p, radii);
  double alpha_100 = scan.ratios[9].second;
  r.measured["worst_increase"] = scan.worst_increase;
  r.measured["alpha_at_100"] = alpha_100;
  r.measured["alpha_at_200"] = scan.alpha;
  r.measured["decay_exponent"] = scan.decay_exponent;
  r.expected["alpha_at_most"] = 0.05;
  verdict(r, scan.non_increasing && scan.alpha <= 0.05 && scan.alpha < alpha_100);
}

void pick_bryant_refusal(const Context& ctx, CheckResult& r) {
  const SolitonProfile& p = ctx.profile();
  if (level_out_of_reach(p, 40.0, r)) return;
  PickOutcome out = pick_points(make_model(BryantNumeric{p}), default_pick_schedule(), 6);
  const PickRefusal* ref = std::get_if<PickRefusal>(&out);
  if (!ref) {
    r.note = "picking did not refuse";
    verdict(r, false);
    return;
  }
  r.measured["reason"] = ref->reason;
  r.measured["RD2_bound"] = ref->RD2_bound;
  r.measured["first_half_max"] = ref->first_half_max;
  r.measured["second_half_max"] = ref->second_half_max;
  r.expected["outcome"] = "refusal with finite bound";
  verdict(r, std::isfinite(ref->RD2_bound) && ref->RD2_bound > 0.0);
}

// ---------------------------------------------------------------------------------------------
// Model spaces

void model_residuals(const Context& ctx, CheckResult& r) {
  ProductGrid grid;
  auto sup_over = [&](const ModelSpace& m, auto&& value) {
    double worst = 0.0;
    for (int i = 0; i < grid.n_s; ++i)
      for (int j = 0; j < grid.n_sigma; ++j)
        worst = std::max(worst, value(m, ProductPoint{grid.s(i), grid.sigma(j), 0.0}));
    return worst;
  };
  auto residual = [](const ModelSpace& m, const ProductPoint& q) { return m.residual(q).max_abs(); };
  bool ok = true;
  ModelSpace cigar = make_model(Cigar{1.0});
  double cigar_res = sup_over(cigar, residual);
  r.measured["cigar"] = cigar_res;
  ok = ok && cigar_res <= 1e-10;
  for (double rhat : ctx.cfg.rhat) {
    ModelSpace m = make_model(CigarLine::from_rhat(rhat));
    double res = sup_over(m, residual);
    double drift = sup_over(m, [](const ModelSpace& mm, const ProductPoint& q) {
      return std::abs(mm.conserved(q) - 1.0);
    });
    r.measured["cigar_line_rhat_" + std::to_string(rhat)] = {{"residual", res}, {"conserved_drift", drift}};
    ok = ok && res <= 1e-10 && drift <= 1e-12;
  }
  // R x S^2 is not a soliton for any potential of this form; its residual must not vanish.
  grid.sigma_max = kPi - 0.05;  // the round fiber of radius 1 ends at pi
  double cyl = sup_over(make_model(RoundCylinder{1.0}), residual);
  r.measured["round_cylinder"] = cyl;
  r.expected["soliton_residual_at_most"] = 1e-10;
  r.expected["round_cylinder_residual_at_least"] = 0.1;
  r.tolerance = 1e-10;
  verdict(r, ok && cyl >= 0.1);
}

void affine_family(const Context& ctx, CheckResult& r) {
  double worst = 0.0;
  for (double rhat : ctx.cfg.rhat) {
    CigarLine m = CigarLine::from_rhat(rhat);
    for (int k = 1; k <= 10; ++k)
      worst = std::max(worst, potential_family_residual(m, halton(k, 2, -5.0, 5.0),
                                                        halton(k, 3, -5.0, 5.0)));
  }
  r.measured["max_residual"] = worst;
  r.measured["draws"] = 10;
  r.expected["max_residual"] = 1e-10;
  r.tolerance = 1e-10;
  verdict(r, worst <= 1e-10);
}

void rigidity(const Context& ctx, CheckResult& r) {
  CigarLine m = CigarLine::from_rhat(ctx.cfg.rhat.front());
  const std::vector<std::pair<std::string, Perturbation>> perturbations = {
      {"s^2", [](double s, double) { return s * s; }},
      {"sigma^2", [](double, double g) { return g * g; }},
      {"s*sigma", [](double s, double g) { return s * g; }},
      {"sin(s/2)", [](double s, double) { return std::sin(0.5 * s); }},
      {"cos(sigma)", [](double, double g) { return std::cos(g); }},
  };
  double worst = 0.0;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& [name, pert] : perturbations) {
    std::vector<std::pair<double, double>> xy;
    for (double eps : {1e-2, 1e-3, 1e-4}) xy.emplace_back(eps, potential_rigidity_probe(m, pert, eps).residual);
    double slope = std::log(xy.back().second / xy.front().second) /
                   std::log(xy.back().first / xy.front().first);
    worst = std::max(worst, std::abs(slope - 1.0));
    rows.push_back({{"perturbation", name}, {"slope", slope}, {"kappa", xy.back().second / xy.back().first}});
  }
  r.measured["worst_slope_deviation"] = worst;
  r.measured["rows"] = rows;
  r.expected["slope"] = 1.0;
  r.tolerance = 0.1;
  verdict(r, worst <= 0.1);
}

void slice_extinction(const Context& ctx, CheckResult& r) {
  const double a0 = 1.0;
  SliceEvolution ev = cylinder_slice_evolution(a0, a0 * a0, 200);
  ctx.tables.slices = ev;
  const auto& s = ev.series;
  bool bound = true, decreasing = true;
  std::size_t last = 0;
  for (std::size_t k = 0; k < s.size() && !s[k].extinct; ++k) last = k;
  for (std::size_t k = 1; k <= last; ++k) {
    double dA = (s[k].area - s[k - 1].area) / (s[k].tau - s[k - 1].tau);
    decreasing = decreasing && s[k].area < s[k - 1].area;
    bound = bound && dA <= s[k].half_total_R + 1e-9 && s[k].dA_dtau <= s[k].half_total_R;
  }
  // Linear extrapolation of the last two areas to zero.
  double slope = (s[last].area - s[last - 1].area) / (s[last].tau - s[last - 1].tau);
  double t_zero = s[last].tau - s[last].area / slope;
  double err = std::abs(t_zero - a0 * a0 / 2.0);
  r.measured["extinction_time"] = t_zero;
  r.measured["first_extinct_tau"] = last + 1 < s.size() ? s[last + 1].tau : -1.0;
  r.measured["area_decreasing"] = decreasing;
  r.measured["bound_holds"] = bound;
  r.expected["extinction_time"] = a0 * a0 / 2.0;
  r.tolerance = 1e-12;
  verdict(r, err <= 1e-12 && decreasing && bound && last + 1 < s.size());
}

void angle_obstruction(const Context& ctx, CheckResult& r) {
  bool ok = true;
  for (double rhat : ctx.cfg.rhat) {
    CigarLine m = CigarLine::from_rhat(rhat);
    auto samples = angle_profile(m, ProductPoint{-100.0, 0.0, 0.0}, 20.0, 200.0, 41);
    double min_cos = 2.0;
    bool holds = true;
    for (const AngleSample& a : samples) {
      min_cos = std::min(min_cos, a.cos_theta);
      holds = holds && a.holds();
    }
    double limit = std::sqrt(1.0 - rhat) + 0.05;
    r.measured["rhat_" + std::to_string(rhat)] = {{"min_cos_theta", min_cos},
                                                  {"cos_theta_on_axis", samples.front().cos_theta},
                                                  {"inequality_holds", holds},
                                                  {"limit", limit}};
    ok = ok && holds && min_cos <= limit && samples.front().cos_theta >= 1.0 - 1e-9;
    if (rhat == ctx.cfg.rhat.front()) {
      ctx.tables.angles = samples;
      ctx.tables.angle_rhat = rhat;
    }
  }
  r.expected["min_cos_theta_at_most"] = "sqrt(1 - rhat) + 0.05";
  verdict(r, ok);
}

void sandwich_cigar_line(const Context& ctx, CheckResult& r) {
  bool ok = true;
  for (double rhat : ctx.cfg.rhat) {
    CigarLine m = CigarLine::from_rhat(rhat);
    std::vector<double> s;
    for (int i = 1; i <= 40; ++i) s.push_back(5.0 * i);
    SandwichResult sw = sandwich_check(m, s);
    CurveLimitRecord c = curve_limits(m, 0.0, 0.0);
    r.measured["rhat_" + std::to_string(rhat)] = {{"ratio_at_end", sw.ratio_at_end},
                                                  {"max_ratio", sw.max_ratio},
                                                  {"zeta_axis", c.zeta}};
    ok = ok && sw.max_ratio < 1.0 && std::abs(sw.ratio_at_end - c.zeta) <= 1e-9;
  }
  r.expected["ratio_limit"] = "zeta of the axis curve, sqrt(1 - rhat)";
  r.tolerance = 1e-9;
  verdict(r, ok);
}

void curve_limits_cigar_line(const Context& ctx, CheckResult& r) {
  bool ok = true;
  for (double rhat : ctx.cfg.rhat) {
    CigarLine m = CigarLine::from_rhat(rhat);
    CurveLimitRecord axis = curve_limits(m, 0.0, 0.0);
    CurveLimitRecord off = curve_limits(m, 0.0, 8.0);
    r.measured["rhat_" + std::to_string(rhat)] = {
        {"axis_zeta", axis.zeta},       {"axis_R", axis.R_limit},
        {"axis_closure", axis.closure_error}, {"off_axis_zeta", off.zeta},
        {"off_axis_R", off.R_limit},    {"off_axis_closure", off.closure_error}};
    ok = ok && std::abs(axis.zeta - std::sqrt(1.0 - rhat)) <= 1e-9 &&
         std::abs(axis.R_limit - rhat) <= 1e-9 && std::abs(off.zeta - 1.0) <= 1e-6 &&
         std::abs(off.R_limit) <= 1e-6 && axis.closure_error <= 1e-9 &&
         off.closure_error <= 1e-6 && axis.gradient_monotone && off.gradient_monotone;
  }
  r.expected["axis"] = "zeta = sqrt(1 - rhat), R = rhat";
  r.expected["off_axis"] = "zeta -> 1, R -> 0";
  r.tolerance = 1e-6;
  verdict(r, ok);
}

void pick_cigar_line(const Context& ctx, CheckResult& r) {
  CigarLine m = CigarLine::from_rhat(ctx.cfg.rhat.front());
  PickOptions opt;
  opt.mesh = ctx.cfg.mesh;
  PickOutcome out = pick_points(make_model(m), default_pick_schedule(), ctx.cfg.pick_jmax, opt);
  const PickSequence* seq = std::get_if<PickSequence>(&out);
  if (!seq) {
    r.note = "unexpected refusal: " + std::get<PickRefusal>(out).reason;
    verdict(r, false);
    return;
  }
  ctx.tables.pick = *seq;
  PickAudit audit = audit_pick(m, *seq, ctx.cfg.mesh);
  r.measured["points"] = seq->points.size();
  r.measured["candidates_examined"] = seq->candidates_examined;
  r.measured["precondition_growth"] = seq->precondition_growth;
  r.measured["a"] = audit.a;
  r.measured["b"] = audit.b;
  r.measured["c"] = audit.c;
  r.measured["d"] = audit.d;
  r.measured["blowup"] = audit.blowup;
  r.measured["worst_mesh_change"] = audit.worst_mesh_change;
  r.expected["points"] = ctx.cfg.pick_jmax;
  r.expected["worst_mesh_change_at_most"] = 1e-2;
  if (!audit.failures.empty()) r.note = audit.failures.front();
  verdict(r, audit.ok() && static_cast<int>(seq->points.size()) == ctx.cfg.pick_jmax &&
                 audit.worst_mesh_change <= 1e-2);
}

// ---------------------------------------------------------------------------------------------

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    const std::vector<std::string> B{"bryant"};
    const std::vector<std::string> none;
    std::vector<Entry> e = {
        {{"ambient-diameter-bound", "2 w <= d_M(antipodes of S_lambda) <= pi w", B},
         ambient_diameter_bound},
        {{"angle-bryant-radial", "|grad f| cos(theta) >= (f(q) - f(O))/s, theta = 0 radially", B},
         angle_bryant_radial},
        {{"angle-obstruction", "min cos(theta) over a far level set <= sqrt(1 - rhat) + 0.05", none},
         angle_obstruction},
        {{"area-linear-growth", "A(2 lambda)/A(lambda) in [1.9, 2.1] on [50, 100]", B},
         [](const Context& c, CheckResult& r) { doubling_check(c, r, true); }},
        {{"bishop-gromov-monotone", "vol B(O, r)/(omega_3 r^3) non-increasing, alpha(200) <= 0.05", B},
         bishop_gromov},
        {{"bryant-construction", "Ric = Hess f and R + |grad f|^2 = R(O) along the profile", B},
         bryant_construction},
        {{"coarea-area-derivative", "dA/dlambda = integral of H/|grad f| over S_lambda", B},
         [](const Context& c, CheckResult& r) { fd_check(c, r, area_ode_check); }},
        {{"coarea-flux-derivative", "d/dlambda integral 1/|grad f| = 2 integral K_M/|grad f|^3", B},
         [](const Context& c, CheckResult& r) { fd_check(c, r, coarea_second_derivative_check); }},
        {{"coarea-volume", "dV/dlambda = integral of 1/|grad f| over S_lambda", B},
         [](const Context& c, CheckResult& r) { fd_check(c, r, volume_coarea_check); }},
        {{"curvature-decay-Rs", "1/c < R s < c on the window", B}, curvature_decay_Rs},
        {{"curvature-diameter-constant", "R D_lambda^2 -> C in [pi^2, 3 pi^2]", B},
         curvature_diameter_constant},
        {{"curve-limits-bryant", "zeta^2 + R_Gamma = R(O) with zeta -> 1, R_Gamma -> 0", B},
         curve_limits_bryant},
        {{"curve-limits-cigar-line", "zeta^2 + R_Gamma = R(O) along integral curves of grad f", none},
         curve_limits_cigar_line},
        {{"cylinder-slice-extinction", "a^2(tau) = a0^2 - 2 tau, dA/dtau <= -(1/2) integral R da", none},
         slice_extinction},
        {{"detII-decreasing", "integral of det II over S_lambda strictly decreasing", B},
         detII_decreasing},
        {{"diameter-drop-bound", "D_b >= D_a - 2 beta_b (a - b)", B}, diameter_drop},
        {{"diameter-ratio-decay", "D_lambda/lambda decreasing to 0, <= 0.25 at lambda = 200", B},
         diameter_ratio_decay},
        {{"diameter-sqrt-growth", "(1/c) sqrt(s) < D_lambda < c sqrt(s)", B}, diameter_sqrt_growth},
        {{"gauss-bonnet-closure", "integral K_M + integral det II = 4 pi on every level", B},
         gauss_bonnet_closure},
        {{"homothety-covariance", "profile unique up to homothety (r, w, f) -> (r/k, w/k, f)",
          {"bryant", "homothety"}},
         homothety_covariance},
        {{"km-integral-bounded", "0 < integral K_M da < 4 pi, increasing, > 2 pi by lambda = 100", B},
         km_integral_bounded},
        {{"model-soliton-residuals", "Ric = Hess f on cigar and R x cigar, not on R x S^2", none},
         model_residuals},
        {{"point-picking-bryant-refusal", "limsup R D^2 < infinity refuses point picking", B},
         pick_bryant_refusal},
        {{"point-picking-cigar-line", "R(p) <= (1 + delta_j) R(q_j) on B(q_j, r_j), r_j^2 R(q_j) increasing",
          none},
         pick_cigar_line},
        {{"potential-affine-family", "Hess(c1 + c2 s + 2 ln cosh(a sigma)) = Ric", none},
         affine_family},
        {{"potential-rigidity", "|Hess(f + eps u) - Ric| grows linearly in eps", none}, rigidity},
        {{"sandwich-bryant", "(1 - delta) s <= f < s beyond s_bar", B}, sandwich_bryant},
        {{"sandwich-cigar-line", "f/s -> zeta along the axis curve", none}, sandwich_cigar_line},
        {{"scalar-curvature-decreasing", "R strictly decreasing along r, R(200) <= 0.05, R ~ r^-1", B},
         scalar_curvature_decreasing},
        {{"volume-quadratic-growth", "V(2 lambda)/V(lambda) in [3.6, 4.4] on [50, 100]", B},
         [](const Context& c, CheckResult& r) { doubling_check(c, r, false); }},
    };
    std::sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) { return a.info.id < b.info.id; });
    return e;
  }();
  return table;
}

}  // namespace

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::measured_only: return "measured-only";
  }
  return "fail";
}

int SuiteRun::count(CheckStatus status) const {
  return static_cast<int>(std::count_if(results.begin(), results.end(),
                                        [&](const CheckResult& r) { return r.status == status; }));
}

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> infos = [] {
    std::vector<CheckInfo> out;
    for (const Entry& e : entries()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

std::vector<std::string> select_checks(const std::string& selector) {
  std::vector<std::string> out;
  for (const CheckInfo& c : check_registry())
    if (selector == "all" || c.id == selector || c.id.rfind(selector, 0) == 0) out.push_back(c.id);
  if (out.empty()) throw ConfigError("no check matches '" + selector + "'");
  return out;
}

std::pair<double, double> parse_window(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("window must look like a:b, got '" + text + "'");
  try {
    std::size_t used_a = 0, used_b = 0;
    std::string a = text.substr(0, colon), b = text.substr(colon + 1);
    double lo = std::stod(a, &used_a), hi = std::stod(b, &used_b);
    if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument("trailing text");
    if (!(lo > 0.0 && hi > lo)) throw ConfigError("window needs 0 < a < b, got '" + text + "'");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ConfigError("window must look like a:b, got '" + text + "'");
  }
}

void validate(const SuiteConfig& c) {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("config: " + what);
  };
  need(c.r_max >= 10.0, "r_max must be at least 10");
  need(c.tol >= 1e-12 && c.tol <= 1e-6, "tol must lie in [1e-12, 1e-6]");
  need(c.eps_seed > 0.0 && c.eps_seed <= 1e-3, "eps_seed must lie in (0, 1e-3]");
  need(c.window_min > 0.0 && c.window_max >= 2.0 * c.window_min,
       "window needs 0 < min and max >= 2 min");
  need(c.level_min > 0.0 && c.level_max > c.level_min && c.level_count >= 2,
       "levels need 0 < min < max and count >= 2");
  need(!c.rhat.empty(), "rhat list must not be empty");
  for (double r : c.rhat) need(r > 0.0 && r < 1.0, "rhat values must lie in (0, 1)");
  need(c.pick_jmax >= 1 && c.pick_jmax <= 20, "pick_jmax must lie in [1, 20]");
  need(c.mesh.n_sigma >= 2 && c.mesh.n_theta >= 4 && c.mesh.stencil >= 1, "mesh too coarse");
}

SuiteConfig suite_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  static const std::set<std::string> known = {"r_max",     "tol",      "eps_seed", "window",
                                              "levels",    "rhat",     "pick_jmax", "mesh",
                                              "out_dir",   "timings"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError("config: unknown key '" + key + "'");
  SuiteConfig c;
  try {
    c.r_max = j.value("r_max", c.r_max);
    c.tol = j.value("tol", c.tol);
    c.eps_seed = j.value("eps_seed", c.eps_seed);
    if (j.contains("window")) {
      // "a:b" or [a, b]; the report echoes the array form.
      const auto& w = j.at("window");
      if (w.is_array() && w.size() == 2) {
        c.window_min = w[0].get<double>();
        c.window_max = w[1].get<double>();
        if (!(c.window_min > 0.0 && c.window_max > c.window_min))
          throw ConfigError("config: window needs 0 < a < b");
      } else {
        std::tie(c.window_min, c.window_max) = parse_window(w.get<std::string>());
      }
    }
    if (j.contains("levels")) {
      const auto& l = j.at("levels");
      c.level_min = l.value("min", c.level_min);
      c.level_max = l.value("max", c.level_max);
      c.level_count = l.value("count", c.level_count);
    }
    if (j.contains("rhat")) c.rhat = j.at("rhat").get<std::vector<double>>();
    c.pick_jmax = j.value("pick_jmax", c.pick_jmax);
    if (j.contains("mesh")) {
      const auto& m = j.at("mesh");
      c.mesh.n_sigma = m.value("n_sigma", c.mesh.n_sigma);
      c.mesh.n_theta = m.value("n_theta", c.mesh.n_theta);
      c.mesh.stencil = m.value("stencil", c.mesh.stencil);
    }
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    c.timings = j.value("timings", c.timings);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

nlohmann::ordered_json to_json(const SuiteConfig& c) {
  return {{"r_max", c.r_max},
          {"tol", c.tol},
          {"eps_seed", c.eps_seed},
          {"window", band(c.window_min, c.window_max)},
          {"levels", {{"min", c.level_min}, {"max", c.level_max}, {"count", c.level_count}}},
          {"rhat", c.rhat},
          {"pick_jmax", c.pick_jmax},
          {"mesh", {{"n_sigma", c.mesh.n_sigma}, {"n_theta", c.mesh.n_theta}, {"stencil", c.mesh.stencil}}}};
}

SuiteRun run_suite(const SuiteConfig& config, const std::vector<std::string>& ids) {
  validate(config);
  std::vector<const Entry*> selected;
  std::set<std::string> needs;
  for (const Entry& e : entries()) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), e.info.id) == ids.end()) continue;
    selected.push_back(&e);
    needs.insert(e.info.needs.begin(), e.info.needs.end());
  }
  for (const std::string& id : ids)
    if (std::none_of(entries().begin(), entries().end(),
                     [&](const Entry& e) { return e.info.id == id; }))
      throw ConfigError("unknown check '" + id + "'");

  SuiteRun run;
  auto solve = [](double eps, double c, double r_max, double tol) {
    return std::make_shared<const SolitonProfile>(integrate(seed(eps, c), r_max, tol));
  };
  std::shared_future<ProfilePtr> bryant, homothety;
  if (needs.count("bryant"))
    bryant = std::async(std::launch::async, solve, config.eps_seed, 1.0 / 3.0, config.r_max,
                        config.tol).share();
  if (needs.count("homothety"))
    homothety = std::async(std::launch::async, solve, config.eps_seed / std::sqrt(2.0), 2.0 / 3.0,
                           config.r_max / std::sqrt(2.0), config.tol).share();

  Context ctx{config, bryant, homothety, run.tables};
  std::vector<std::future<CheckResult>> pending;
  for (const Entry* e : selected) {
    pending.push_back(std::async(std::launch::async, [&ctx, e] {
      CheckResult r;
      r.id = e->info.id;
      r.statement = e->info.statement;
      auto t0 = std::chrono::steady_clock::now();
      bool dependency_ok = true;
      for (const std::string& need : e->info.needs) {
        auto& fut = need == "bryant" ? ctx.bryant : ctx.homothety;
        try {
          fut.get();
        } catch (const std::exception& ex) {
          r.status = CheckStatus::fail;
          r.note = "dependency '" + need + "' failed: " + ex.what();
          dependency_ok = false;
          break;
        }
      }
      if (dependency_ok) {
        try {
          e->run(ctx, r);
        } catch (const WindowError& ex) {
          r.status = CheckStatus::measured_only;
          r.note = std::string("window too short: ") + ex.what();
        } catch (const std::exception& ex) {
          r.status = CheckStatus::fail;
          r.note = std::string("error: ") + ex.what();
        }
      }
      r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
      return r;
    }));
  }
  for (auto& p : pending) run.results.push_back(p.get());
  if (bryant.valid()) {
    try {
      run.profile = *bryant.get();
    } catch (const std::exception&) {
    }
  }
  return run;
}

}  // namespace soliton
