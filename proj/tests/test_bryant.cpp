#include "doctest.h"

#include "soliton/bryant.hpp"

#include <Eigen/Core>

#include <cmath>
#include <numbers>

using namespace soliton;

namespace {

constexpr double kPi = std::numbers::pi;

const SolitonProfile& profile() {
  static const SolitonProfile p = integrate(seed(1e-4), 60.0, 1e-10);
  return p;
}

// Ric = Hess f for the warped metric, written in (w, x = w', f, p = f'):
//   x' = (1 - x^2)/w - p x,   p' = -2 x'/w.
Eigen::Vector4d naive_rhs(const Eigen::Vector4d& s) {
  double w = s[0], x = s[1], p = s[3];
  double xp = (1 - x * x) / w - p * x;
  return {x, xp, p, -2 * xp / w};
}

// Fixed-step classical RK4, started from the series at r0.
Eigen::Vector4d rk4_to(double c, double r0, double r1, double h) {
  SeriesSeed s = seed(1e-4, c);
  ProfileState st = series_state(s, r0);
  Eigen::Vector4d y(st.w, st.wp, st.f, st.fp);
  int n = static_cast<int>(std::lround((r1 - r0) / h));
  double dh = (r1 - r0) / n;
  for (int i = 0; i < n; ++i) {
    Eigen::Vector4d k1 = naive_rhs(y), k2 = naive_rhs(y + 0.5 * dh * k1),
                    k3 = naive_rhs(y + 0.5 * dh * k2), k4 = naive_rhs(y + dh * k3);
    y += dh / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return y;
}

double series_residual(const SeriesSeed& s, double r) {
  ProfileState st = series_state(s, r);
  Eigen::Vector4d y(st.w, st.wp, st.f, st.fp);
  Eigen::Vector4d rhs = naive_rhs(y);
  return std::max(std::abs(st.wpp - rhs[1]), std::abs(st.fpp - rhs[3]));
}

}  // namespace

TEST_CASE("series seed solves the ODE to high order") {
  for (double c : {1.0 / 3.0, 1.0}) {
    SeriesSeed s = seed(1e-4, c);
    CHECK(s.w == doctest::Approx(1e-4).epsilon(1e-8));
    CHECK(s.fp == doctest::Approx(c * 1e-4).epsilon(1e-6));
    CHECK(s.f == doctest::Approx(0.5 * c * 1e-8).epsilon(1e-6));
    // Truncation after the r^5 term leaves a residual of order r^4 at least.
    double e1 = series_residual(s, 0.04), e2 = series_residual(s, 0.02);
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 < 1e-5);
  }
}

TEST_CASE("seed rejects bad arguments") {
  CHECK_THROWS_AS(seed(0.0), std::invalid_argument);
  CHECK_THROWS_AS(seed(0.1), std::invalid_argument);
  CHECK_THROWS_AS(seed(1e-4, -1.0), std::invalid_argument);
}

TEST_CASE("profile agrees with an independent fixed-step RK4") {
  const SolitonProfile& p = profile();
  for (double r : {1.0, 5.0, 20.0}) {
    Eigen::Vector4d ref = rk4_to(1.0 / 3.0, 0.01, r, 2e-4);
    ProfileState q = p.query(r);
    CHECK(q.w == doctest::Approx(ref[0]).epsilon(1e-7));
    CHECK(q.wp == doctest::Approx(ref[1]).epsilon(1e-7));
    CHECK(q.f == doctest::Approx(ref[2]).epsilon(1e-7));
    CHECK(q.fp == doctest::Approx(ref[3]).epsilon(1e-7));
  }
}

TEST_CASE("monotonicity and the conserved quantity along the nodes") {
  const SolitonProfile& p = profile();
  CHECK(p.max_drift() < 1e-9);
  double prev_R = 1e300, prev_wp = 2;
  for (const ProfileNode& n : p.nodes()) {
    double R = scalar_curvature(n.w, n.one_minus_wp, n.fp);
    CHECK(R < prev_R);
    CHECK(1 - n.one_minus_wp < prev_wp);
    CHECK(n.fp < 1.0);
    prev_R = R;
    prev_wp = 1 - n.one_minus_wp;
  }
  CHECK(p.curvature(0.0).R == doctest::Approx(1.0));
}

TEST_CASE("query hands over from the series continuously") {
  const SolitonProfile& p = profile();
  ProfileState below = p.query(p.eps() * (1 - 1e-9)), above = p.query(p.eps() * (1 + 1e-9));
  CHECK(below.w == doctest::Approx(above.w).epsilon(1e-8));
  CHECK(below.fp == doctest::Approx(above.fp).epsilon(1e-6));
  CHECK_THROWS_AS(p.query(p.r_max() + 1.0), RangeError);
  CHECK_THROWS_AS(p.query(-1.0), RangeError);
}

TEST_CASE("interpolant jet agrees with the ODE jet") {
  const SolitonProfile& p = profile();
  for (double r : {0.05, 0.7, 3.3, 17.0, 45.0}) {
    ProfileState a = p.query(r), b = p.interpolant_jet(r);
    CHECK(std::abs(a.wp - b.wp) < 1e-8);
    CHECK(std::abs(a.wpp - b.wpp) < 1e-6);
    CHECK(std::abs(a.fp - b.fp) < 1e-8);
    CHECK(std::abs(a.fpp - b.fpp) < 1e-6);
  }
  CHECK_THROWS_AS(p.interpolant_jet(p.r_max() * 2), RangeError);
}

TEST_CASE("invert_potential is the inverse of f") {
  const SolitonProfile& p = profile();
  for (double lambda : {0.001, 0.5, 3.0, 20.0, 0.9 * p.f_max()}) {
    double r = p.invert_potential(lambda);
    CHECK(p.query(r).f == doctest::Approx(lambda).epsilon(1e-10));
  }
  CHECK_THROWS_AS(p.invert_potential(-1.0), RangeError);
  CHECK_THROWS_AS(p.invert_potential(2 * p.f_max()), RangeError);
}

TEST_CASE("ball volume matches composite Simpson of 4 pi w^2") {
  const SolitonProfile& p = profile();
  for (double r : {0.5, 4.0, 30.0}) {
    const int n = 4000;
    double h = r / n, sum = 0;
    for (int i = 0; i <= n; ++i) {
      double w = p.query(i * h).w;
      double weight = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
      sum += weight * 4 * kPi * w * w;
    }
    CHECK(p.volume(r) == doctest::Approx(sum * h / 3).epsilon(1e-8));
  }
  CHECK(p.volume(1e-3) == doctest::Approx(4.0 / 3.0 * kPi * 1e-9).epsilon(1e-4));
}

TEST_CASE("scaling the central Hessian is a homothety") {
  // w_c(r) = w_{1/3}(k r)/k and f_c(r) = f_{1/3}(k r) with k^2 = 3c.
  const SolitonProfile& base = profile();
  double c = 4.0 / 3.0, k = 2.0;
  SolitonProfile scaled = integrate(seed(1e-4 / k, c), 25.0, 1e-10);
  for (double r : {0.3, 2.0, 10.0, 25.0}) {
    ProfileState a = scaled.query(r), b = base.query(k * r);
    CHECK(a.w == doctest::Approx(b.w / k).epsilon(1e-7));
    CHECK(a.f == doctest::Approx(b.f).epsilon(1e-7));
    CHECK(a.fp == doctest::Approx(k * b.fp).epsilon(1e-7));
  }
}

TEST_CASE("integrate validates its arguments") {
  CHECK_THROWS_AS(integrate(seed(1e-4), 5.0, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(integrate(seed(1e-4), 50.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(SolitonProfile({ProfileNode{1.0}}, 1.0, 1e-10), std::invalid_argument);
}
