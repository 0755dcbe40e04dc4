#include "soliton/bryant.hpp"

#include "soliton/dormand_prince.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace soliton {

namespace {

constexpr double kPi = std::numbers::pi;

SeriesSeed make_series(double eps, double c) {
  SeriesSeed s;
  s.eps = eps;
  s.c = c;
  s.w3 = -c / 12.0;
  s.w5 = 29.0 * c * c / 2400.0;
  s.p3 = -2.0 * c * c / 15.0;
  ProfileState st = series_state(s, eps);
  s.w = st.w;
  s.wp = st.wp;
  s.one_minus_wp = st.one_minus_wp;
  s.f = st.f;
  s.fp = st.fp;
  return s;
}

double series_volume(const SeriesSeed& s, double r) {
  double r2 = r * r;
  double r3 = r2 * r;
  return 4.0 * kPi * r3 *
         (1.0 / 3.0 + r2 * (2.0 * s.w3 / 5.0 + r2 * (s.w3 * s.w3 + 2.0 * s.w5) / 7.0));
}

// g = x' = w''.
double accel(const Eigen::Vector4d& u) {
  double w = u[0], y = u[1], p = u[3];
  return y * (2.0 - y) / w - p * (1.0 - y);
}

Eigen::Vector4d second_derivative(const Eigen::Vector4d& u) {
  double w = u[0], y = u[1], p = u[3];
  double g = accel(u);
  double g_w = -y * (2.0 - y) / (w * w);
  double g_y = (2.0 - 2.0 * y) / w + p;
  double g_p = -(1.0 - y);
  double dg = g_w * (1.0 - y) - g_y * g - g_p * 2.0 * g / w;
  return {g, -dg, -2.0 * g / w, -2.0 * dg / w + 2.0 * g * (1.0 - y) / (w * w)};
}

Eigen::Vector4d as_state(const ProfileNode& n) { return {n.w, n.one_minus_wp, n.f, n.fp}; }

// Quintic Hermite basis on [0, 1].
struct Hermite5 {
  double h0, h1, h2, h3, h4, h5;
  explicit Hermite5(double t) {
    double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
    h3 = 0.5 * (t3 - 2 * t4 + t5);
    h4 = -4 * t3 + 7 * t4 - 3 * t5;
    h5 = 10 * t3 - 15 * t4 + 6 * t5;
  }
};

// First and second t-derivatives of the same basis.
struct Hermite5Prime {
  double h0, h1, h2, h3, h4, h5;
  explicit Hermite5Prime(double t) {
    double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    h0 = -30 * t2 + 60 * t3 - 30 * t4;
    h1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    h2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
    h3 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
    h4 = -12 * t2 + 28 * t3 - 15 * t4;
    h5 = 30 * t2 - 60 * t3 + 30 * t4;
  }
};

struct Hermite5Second {
  double h0, h1, h2, h3, h4, h5;
  explicit Hermite5Second(double t) {
    double t2 = t * t, t3 = t2 * t;
    h0 = -60 * t + 180 * t2 - 120 * t3;
    h1 = -36 * t + 96 * t2 - 60 * t3;
    h2 = 0.5 * (2 - 18 * t + 36 * t2 - 20 * t3);
    h3 = 0.5 * (6 * t - 24 * t2 + 20 * t3);
    h4 = -24 * t + 84 * t2 - 60 * t3;
    h5 = 60 * t - 180 * t2 + 120 * t3;
  }
};

// 4-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGaussX = {-0.8611363115940526, -0.3399810435848563,
                                           0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGaussW = {0.3478548451374538, 0.6521451548625461,
                                           0.6521451548625461, 0.3478548451374538};

}  // namespace

SeriesSeed seed(double eps, double c) {
  if (!(eps > 0.0) || eps > 1e-3) throw std::invalid_argument("seed: eps must lie in (0, 1e-3]");
  if (!(c > 0.0)) throw std::invalid_argument("seed: central Hessian must be positive");
  SeriesSeed s = make_series(eps, c);

  // The truncated series must satisfy both ODE components up to the dropped orders.
  ProfileState st = series_state(s, eps);
  Eigen::Vector4d u(st.w, st.one_minus_wp, st.f, st.fp);
  double g = accel(u);
  double res_x = std::abs(st.wpp - g);
  double res_p = std::abs(st.fpp + 2.0 * g / st.w);
  if (res_x > eps * eps * c || res_p > eps * eps * c)
    throw std::logic_error("seed: series inconsistent with the soliton ODE");
  return s;
}

ProfileState series_state(const SeriesSeed& s, double r) {
  double r2 = r * r;
  ProfileState st;
  st.r = r;
  st.w = r * (1.0 + r2 * (s.w3 + r2 * s.w5));
  st.one_minus_wp = -r2 * (3.0 * s.w3 + 5.0 * s.w5 * r2);
  st.wp = 1.0 - st.one_minus_wp;
  st.wpp = r * (6.0 * s.w3 + 20.0 * s.w5 * r2);
  st.f = r2 * (0.5 * s.c + 0.25 * s.p3 * r2);
  st.fp = r * (s.c + s.p3 * r2);
  st.fpp = s.c + 3.0 * s.p3 * r2;
  return st;
}

Eigen::Vector4d soliton_rhs(const Eigen::Vector4d& u) {
  double g = accel(u);
  return {1.0 - u[1], -g, u[3], -2.0 * g / u[0]};
}

double scalar_curvature(double w, double one_minus_wp, double fp) {
  double y = one_minus_wp;
  return -2.0 * y * (2.0 - y) / (w * w) + 4.0 * fp * (1.0 - y) / w;
}

SolitonProfile::SolitonProfile(std::vector<ProfileNode> nodes, double R_origin, double tol) {
  if (nodes.size() < 2) throw std::invalid_argument("SolitonProfile: need at least two nodes");
  if (!(R_origin > 0.0)) throw std::invalid_argument("SolitonProfile: R_origin must be positive");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i].r > nodes[i - 1].r))
      throw std::invalid_argument("SolitonProfile: radii must be strictly increasing");
  if (!(nodes.front().r > 0.0))
    throw std::invalid_argument("SolitonProfile: first node must lie off the pole");

  auto d = std::make_shared<Data>();
  d->seed = make_series(nodes.front().r, R_origin / 3.0);
  d->tol = tol;
  d->nodes = std::move(nodes);
  const auto& n = d->nodes;
  d->d1.reserve(n.size());
  d->d2.reserve(n.size());
  for (const auto& node : n) {
    Eigen::Vector4d u = as_state(node);
    d->d1.push_back(soliton_rhs(u));
    d->d2.push_back(second_derivative(u));
    double drift = scalar_curvature(node.w, node.one_minus_wp, node.fp) + node.fp * node.fp -
                   R_origin;
    d->max_drift = std::max(d->max_drift, std::abs(drift));
  }
  data_ = d;

  // Cumulative ball volumes at nodes, Gauss-Legendre on the interpolant of w.
  d->cumulative_volume.resize(n.size());
  d->cumulative_volume[0] = series_volume(d->seed, n[0].r);
  for (std::size_t i = 0; i + 1 < n.size(); ++i) {
    double a = n[i].r, b = n[i + 1].r;
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) {
      double x = 0.5 * (a + b) + 0.5 * (b - a) * kGaussX[k];
      double w = state_at(i, x)[0];
      sum += kGaussW[k] * w * w;
    }
    d->cumulative_volume[i + 1] = d->cumulative_volume[i] + 4.0 * kPi * 0.5 * (b - a) * sum;
  }
}

std::size_t SolitonProfile::interval(double r) const {
  const auto& n = data_->nodes;
  auto it = std::upper_bound(n.begin(), n.end(), r,
                             [](double v, const ProfileNode& node) { return v < node.r; });
  std::size_t i = static_cast<std::size_t>(it - n.begin());
  if (i == 0) return 0;
  return std::min(i - 1, n.size() - 2);
}

Eigen::Vector4d SolitonProfile::state_at(std::size_t i, double r) const {
  const auto& n = data_->nodes;
  double h = n[i + 1].r - n[i].r;
  double t = (r - n[i].r) / h;
  if (t == 0.0) return as_state(n[i]);
  if (t == 1.0) return as_state(n[i + 1]);
  Hermite5 b(t);
  return b.h0 * as_state(n[i]) + h * b.h1 * data_->d1[i] + h * h * b.h2 * data_->d2[i] +
         b.h5 * as_state(n[i + 1]) + h * b.h4 * data_->d1[i + 1] +
         h * h * b.h3 * data_->d2[i + 1];
}

template <class Basis>
Eigen::Vector4d SolitonProfile::combine(std::size_t i, double t, double scale) const {
  const auto& n = data_->nodes;
  double h = n[i + 1].r - n[i].r;
  Basis b(t);
  return (b.h0 * as_state(n[i]) + h * b.h1 * data_->d1[i] + h * h * b.h2 * data_->d2[i] +
          b.h5 * as_state(n[i + 1]) + h * b.h4 * data_->d1[i + 1] +
          h * h * b.h3 * data_->d2[i + 1]) *
         scale;
}

ProfileState SolitonProfile::interpolant_jet(double r) const {
  if (!(r >= 0.0) || r > r_max()) throw RangeError("interpolant_jet: radius outside [0, r_max]");
  if (r < eps()) return series_state(data_->seed, r);
  std::size_t i = interval(r);
  const auto& n = data_->nodes;
  double h = n[i + 1].r - n[i].r;
  double t = (r - n[i].r) / h;
  Eigen::Vector4d u = combine<Hermite5>(i, t, 1.0);
  Eigen::Vector4d du = combine<Hermite5Prime>(i, t, 1.0 / h);
  Eigen::Vector4d ddu = combine<Hermite5Second>(i, t, 1.0 / (h * h));
  ProfileState st;
  st.r = r;
  st.w = u[0];
  st.wp = du[0];
  st.one_minus_wp = 1.0 - du[0];
  st.wpp = ddu[0];
  st.f = u[2];
  st.fp = du[2];
  st.fpp = ddu[2];
  return st;
}

ProfileState SolitonProfile::query(double r) const {
  if (!(r >= 0.0) || r > r_max())
    throw RangeError("SolitonProfile: radius " + std::to_string(r) + " outside [0, " +
                     std::to_string(r_max()) + "]");
  if (r < eps()) return series_state(data_->seed, r);
  Eigen::Vector4d u = state_at(interval(r), r);
  double g = accel(u);
  ProfileState st;
  st.r = r;
  st.w = u[0];
  st.one_minus_wp = u[1];
  st.wp = 1.0 - u[1];
  st.wpp = g;
  st.f = u[2];
  st.fp = u[3];
  st.fpp = -2.0 * g / u[0];
  return st;
}

CurvatureSample<double> SolitonProfile::curvature(double r) const {
  ProfileState st = query(r);
  return warped_curvature(3, r, WarpJet<double>{st.w, st.wp, st.wpp, st.one_minus_wp},
                          data_->seed.w3);
}

double SolitonProfile::invert_potential(double lambda) const {
  if (!(lambda >= 0.0)) throw RangeError("invert_potential: level must be non-negative");
  if (lambda > f_max())
    throw RangeError("invert_potential: level " + std::to_string(lambda) +
                     " exceeds f(r_max) = " + std::to_string(f_max()) +
                     "; integrate to a larger r_max");
  if (lambda == 0.0) return 0.0;

  const auto& n = data_->nodes;
  double lo, hi;
  if (lambda <= n.front().f) {
    lo = 0.0;
    hi = n.front().r;
  } else {
    auto it = std::lower_bound(n.begin(), n.end(), lambda,
                               [](const ProfileNode& node, double v) { return node.f < v; });
    std::size_t i = static_cast<std::size_t>(it - n.begin());
    if (n[i].f == lambda) return n[i].r;
    lo = n[i - 1].r;
    hi = n[i].r;
  }

  // Newton on f(r) - lambda, safeguarded by the bracket.
  double r = lambda <= n.front().f ? std::sqrt(2.0 * lambda / data_->seed.c)
                                   : lo + (hi - lo) * 0.5;
  r = std::clamp(r, lo, hi);
  for (int it = 0; it < 100; ++it) {
    ProfileState st = query(r);
    double F = st.f - lambda;
    if (F > 0.0) hi = r; else lo = r;
    if (F == 0.0) break;
    double next = r - F / st.fp;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - r) <= 1e-15 * r) {
      r = next;
      break;
    }
    r = next;
  }
  return r;
}

double SolitonProfile::volume(double r) const {
  if (!(r >= 0.0) || r > r_max()) throw RangeError("volume: radius outside the profile");
  if (r <= eps()) return series_volume(data_->seed, r);
  std::size_t i = interval(r);
  double a = data_->nodes[i].r;
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) {
    double x = 0.5 * (a + r) + 0.5 * (r - a) * kGaussX[k];
    double w = state_at(i, x)[0];
    sum += kGaussW[k] * w * w;
  }
  return data_->cumulative_volume[i] + 4.0 * kPi * 0.5 * (r - a) * sum;
}

WarpedMetric SolitonProfile::metric() const {
  SolitonProfile self = *this;
  auto jet = [self](double r) {
    ProfileState st = self.query(r);
    return WarpJet<double>{st.w, st.wp, st.wpp, st.one_minus_wp};
  };
  return WarpedMetric(3, jet, r_max(), data_->seed.w3);
}

RadialPotential SolitonProfile::potential() const {
  SolitonProfile self = *this;
  return [self](double r) {
    ProfileState st = self.query(r);
    return RadialPotentialJet{st.f, st.fp, st.fpp};
  };
}

SolitonProfile integrate(const SeriesSeed& s, double r_max, double tol, IntegrateStats* stats) {
  if (!(r_max >= 10.0)) throw std::invalid_argument("integrate: r_max must be at least 10");
  if (!(tol >= 1e-12 && tol <= 1e-6))
    throw std::invalid_argument("integrate: tol must lie in [1e-12, 1e-6]");

  using Integrator = DormandPrince45<double, 4>;
  Integrator::Options opt;
  opt.rtol = tol;
  opt.atol = 1e-6 * tol;
  opt.h_init = s.eps;
  Integrator stepper(opt);

  std::vector<ProfileNode> nodes;
  nodes.reserve(4096);
  const double fp_limit = std::sqrt(3.0 * s.c);
  auto observer = [&](double r, const Integrator::State& u, const Integrator::State&) {
    ProfileNode node{r, u[0], u[1], u[2], u[3]};
    if (!(node.w > 0.0)) throw IntegrationError("integrate: w lost positivity", r);
    if (!(node.one_minus_wp >= 0.0 && node.one_minus_wp < 1.0))
      throw IntegrationError("integrate: w' left (0, 1]", r);
    if (!(node.fp >= 0.0 && node.fp < fp_limit))
      throw IntegrationError("integrate: f' left [0, sqrt(R(O)))", r);
    if (!nodes.empty()) {
      const ProfileNode& prev = nodes.back();
      if (!(node.one_minus_wp > prev.one_minus_wp))
        throw IntegrationError("integrate: w' not strictly decreasing", r);
      if (!(node.fp > prev.fp)) throw IntegrationError("integrate: f' not strictly increasing", r);
      if (!(node.f > prev.f)) throw IntegrationError("integrate: f not strictly increasing", r);
    }
    nodes.push_back(node);
    return true;
  };
  auto rhs = [](double, const Integrator::State& u) { return soliton_rhs(u); };

  Integrator::State u0(s.w, s.one_minus_wp, s.f, s.fp);
  auto run = stepper.integrate(rhs, s.eps, u0, r_max, observer);
  if (stats) {
    stats->accepted = run.accepted;
    stats->rejected = run.rejected;
  }
  return SolitonProfile(std::move(nodes), 3.0 * s.c, tol);
}

}  // namespace soliton
