#include "soliton/levelset.hpp"

#include "soliton/geodesic.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace soliton {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double k4Pi = 4.0 * std::numbers::pi;

void require(bool ok, const char* what, double lambda) {
  if (!ok)
    throw std::logic_error(std::string("level set record at lambda = ") + std::to_string(lambda) +
                           ": " + what);
}

}  // namespace

LevelSetRecord record(const SolitonProfile& profile, double lambda) {
  LevelSetRecord rec;
  rec.lambda = lambda;
  rec.r = profile.invert_potential(lambda);
  if (rec.r == 0.0) {
    rec.detII_integral = k4Pi;
    rec.induced_K_integral = k4Pi;
    rec.mean_curvature = std::numeric_limits<double>::infinity();
    rec.R = profile.R_origin();
    rec.Ric_tan = profile.R_origin() / 3.0;
    return rec;
  }
  ProfileState st = profile.query(rec.r);
  double y = st.one_minus_wp;
  rec.w = st.w;
  rec.area = k4Pi * st.w * st.w;
  rec.diameter_inner = kPi * st.w;
  rec.grad_norm = st.fp;
  rec.mean_curvature = 2.0 * st.wp / st.w;
  rec.detII_integral = k4Pi * st.wp * st.wp;
  rec.km_integral = k4Pi * y * (2.0 - y);
  rec.induced_K_integral = rec.area / (st.w * st.w);
  rec.volume = profile.volume(rec.r);
  rec.coarea_flux = rec.area / st.fp;
  CurvatureSample<double> k = profile.curvature(rec.r);
  rec.R = k.R;
  rec.Ric_tan = k.Ric_tan;

  require(std::abs(rec.induced_K_integral - rec.gauss_bonnet()) <= 1e-10, "Gauss equation",
          lambda);
  require(rec.detII_integral > 0.0 && rec.detII_integral <= k4Pi, "int det II outside (0, 4pi]",
          lambda);
  require(rec.km_integral >= 0.0 && rec.km_integral < k4Pi, "int K_M outside [0, 4pi)", lambda);
  require(rec.grad_norm >= 0.0 && rec.grad_norm < 1.0, "|grad f| outside [0, 1)", lambda);
  return rec;
}

double ambient_diameter(const SolitonProfile& profile, double lambda) {
  double r = profile.invert_potential(lambda);
  if (r == 0.0) return 0.0;
  return meridian_geodesic(profile.metric(), r, r, kPi, 1e-8).length;
}

double FiniteDifferenceCheck::rel_error() const { return std::abs(lhs - rhs) / std::abs(rhs); }

double default_fd_step(const SolitonProfile& profile, double lambda) {
  double h = 1e-3 * lambda;
  double r = profile.invert_potential(lambda);
  const auto& n = profile.nodes();
  auto it = std::upper_bound(n.begin(), n.end(), r,
                             [](double v, const ProfileNode& node) { return v < node.r; });
  if (it != n.begin() && it != n.end()) {
    double spacing = it->f - std::prev(it)->f;
    h = std::min(h, spacing);
  }
  return h;
}

FiniteDifferenceCheck area_ode_check(const SolitonProfile& profile, double lambda, double h) {
  if (!(h > 0.0) || lambda - h < 0.0) throw RangeError("area_ode_check: lambda - h below 0");
  auto area = [&](double l) {
    double w = profile.query(profile.invert_potential(l)).w;
    return k4Pi * w * w;
  };
  ProfileState st = profile.query(profile.invert_potential(lambda));
  FiniteDifferenceCheck c{lambda, h, (area(lambda + h) - area(lambda - h)) / (2.0 * h),
                          2.0 * k4Pi * st.w * st.wp / st.fp};
  return c;
}

FiniteDifferenceCheck coarea_second_derivative_check(const SolitonProfile& profile,
                                                     double lambda, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("coarea check: h must be positive");
  if (lambda - h < kCoareaFloor)
    throw RangeError("coarea check: lambda - h below the floor " + std::to_string(kCoareaFloor));
  auto flux = [&](double l) {
    ProfileState st = profile.query(profile.invert_potential(l));
    return k4Pi * st.w * st.w / st.fp;
  };
  ProfileState st = profile.query(profile.invert_potential(lambda));
  double y = st.one_minus_wp;
  return {lambda, h, (flux(lambda + h) - flux(lambda - h)) / (2.0 * h),
          2.0 * k4Pi * y * (2.0 - y) / (st.fp * st.fp * st.fp)};
}

FiniteDifferenceCheck volume_coarea_check(const SolitonProfile& profile, double lambda, double h) {
  if (!(h > 0.0) || lambda - h < 0.0) throw RangeError("volume check: lambda - h below 0");
  auto vol = [&](double l) { return profile.volume(profile.invert_potential(l)); };
  ProfileState st = profile.query(profile.invert_potential(lambda));
  return {lambda, h, (vol(lambda + h) - vol(lambda - h)) / (2.0 * h),
          k4Pi * st.w * st.w / st.fp};
}

MonotonicityScan detII_monotonicity_scan(const SolitonProfile& profile,
                                         const std::vector<double>& lambda_grid) {
  MonotonicityScan scan;
  if (lambda_grid.empty()) return scan;
  std::vector<LevelSetRecord> recs;
  recs.reserve(lambda_grid.size());
  for (double l : lambda_grid) recs.push_back(record(profile, l));
  scan.km_min = scan.km_max = recs.front().km_integral;
  scan.detII_first = recs.front().detII_integral;
  scan.detII_last = recs.back().detII_integral;
  scan.detII_worst_increase = -std::numeric_limits<double>::infinity();
  scan.km_worst_decrease = -std::numeric_limits<double>::infinity();
  scan.R_worst_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& cur = recs[i];
    scan.km_min = std::min(scan.km_min, cur.km_integral);
    scan.km_max = std::max(scan.km_max, cur.km_integral);
    if (!scan.km_half_level && cur.km_integral > 0.5 * k4Pi) scan.km_half_level = cur.lambda;
    if (i == 0) continue;
    const auto& prev = recs[i - 1];
    double d_det = cur.detII_integral - prev.detII_integral;
    double d_km = prev.km_integral - cur.km_integral;
    double d_R = cur.R - prev.R;
    scan.detII_worst_increase = std::max(scan.detII_worst_increase, d_det);
    scan.km_worst_decrease = std::max(scan.km_worst_decrease, d_km);
    scan.R_worst_increase = std::max(scan.R_worst_increase, d_R);
    scan.detII_violations += d_det >= 0.0;
    scan.km_violations += d_km >= 0.0;
    scan.R_violations += d_R >= 0.0;
  }
  return scan;
}

GrowthTables growth_tables(const SolitonProfile& profile, const std::vector<double>& lambda_grid) {
  GrowthTables t;
  t.min_R_times_lambda = std::numeric_limits<double>::quiet_NaN();
  for (double l : lambda_grid) {
    t.rows.push_back(record(profile, l));
    const auto& rec = t.rows.back();
    if (l >= 50.0) {
      double v = rec.R * l;
      if (!(t.min_R_times_lambda <= v)) t.min_R_times_lambda = v;
    }
    if (l > 0.0 && 2.0 * l <= profile.f_max()) {
      LevelSetRecord twice = record(profile, 2.0 * l);
      t.doubling.push_back({l, twice.area / rec.area, twice.volume / rec.volume});
    }
  }
  return t;
}

DiameterDrop diameter_drop_bound(const SolitonProfile& profile, double a, double b) {
  if (!(b > 1.0) || a < b) throw std::invalid_argument("diameter_drop_bound: need a >= b > 1");
  DiameterDrop d;
  d.a = a;
  d.b = b;
  double r_b = profile.invert_potential(b);
  d.D_a = kPi * profile.query(profile.invert_potential(a)).w;
  d.D_b = kPi * profile.query(r_b).w;
  // S_b and S_{b-1} are concentric spheres: every point of S_b is r(b) - r(b-1) away.
  d.beta_b = r_b - profile.invert_potential(b - 1.0);
  d.lower_bound = d.D_a - 2.0 * d.beta_b * (a - b);
  return d;
}

std::vector<double> level_grid(double min, double max, int count, bool log_spacing) {
  if (count < 2 || !(max > min) || (log_spacing && !(min > 0.0)))
    throw std::invalid_argument("level grid: need count >= 2, max > min (and min > 0 for log)");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) {
    double t = static_cast<double>(i) / (count - 1);
    g[i] = log_spacing ? min * std::pow(max / min, t) : min + (max - min) * t;
  }
  g.back() = max;
  return g;
}

void write_levels_csv(std::ostream& out, const std::vector<LevelSetRecord>& rows,
                      bool with_gauss_bonnet) {
  out << "lambda,r,area,diameter,grad_norm,detII_int,km_int,volume,R,R_times_lambda";
  if (with_gauss_bonnet) out << ",gauss_bonnet";
  out << '\n';
  char buf[512];
  for (const auto& r : rows) {
    int n = std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g",
                          r.lambda, r.r, r.area, r.diameter_inner, r.grad_norm, r.detII_integral,
                          r.km_integral, r.volume, r.R, r.R * r.lambda);
    out.write(buf, n);
    if (with_gauss_bonnet) {
      n = std::snprintf(buf, sizeof buf, ",%.12g", r.gauss_bonnet());
      out.write(buf, n);
    }
    out << '\n';
  }
}

}  // namespace soliton
