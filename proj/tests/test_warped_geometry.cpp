#include "doctest.h"

#include "soliton/model_spaces.hpp"
#include "soliton/warped_geometry.hpp"

#include <cmath>
#include <numbers>

using namespace soliton;

namespace {

constexpr double kPi = std::numbers::pi;

WarpedMetric from_function(int dim, std::function<double(double)> w, double domain,
                           double pole_w3) {
  // Derivatives by high-order central differences so the jet is independent of any closed form.
  auto jet = [w](double r) {
    double h = 1e-3 * std::max(1.0, r);
    double d1 = (-w(r + 2 * h) + 8 * w(r + h) - 8 * w(r - h) + w(r - 2 * h)) / (12 * h);
    double d2 = (-w(r + 2 * h) + 16 * w(r + h) - 30 * w(r) + 16 * w(r - h) - w(r - 2 * h)) /
                (12 * h * h);
    return WarpJet<double>{w(r), d1, d2, 1.0 - d1};
  };
  return WarpedMetric(dim, jet, domain, pole_w3);
}

// Brioschi formula for an orthogonal chart with E = 1, F = 0: K = -(sqrt G)_rr / sqrt G,
// evaluated from G alone by finite differences.
double brioschi(const std::function<double(double)>& G, double r) {
  double h = 1e-3;
  auto sq = [&](double x) { return std::sqrt(G(x)); };
  double d2 = (sq(r + h) - 2 * sq(r) + sq(r - h)) / (h * h);
  return -d2 / sq(r);
}

}  // namespace

TEST_CASE("constant curvature warps") {
  SUBCASE("round sphere") {
    WarpedMetric m(3, [](double r) {
      return WarpJet<double>{std::sin(r), std::cos(r), -std::sin(r), 2 * std::pow(std::sin(r / 2), 2)};
    }, kPi, -1.0 / 6.0);
    for (double r : {1e-8, 1e-3, 0.5, 1.5, 3.0}) {
      auto k = curvature_at(m, r);
      CHECK(*k.K_rad == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(k.K_sph == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(k.R == doctest::Approx(6.0).epsilon(1e-9));
    }
  }
  SUBCASE("hyperbolic space") {
    WarpedMetric m(3, [](double r) {
      return WarpJet<double>{std::sinh(r), std::cosh(r), std::sinh(r), -2 * std::pow(std::sinh(r / 2), 2)};
    }, 10.0, 1.0 / 6.0);
    for (double r : {1e-7, 0.1, 2.0, 8.0}) {
      auto k = curvature_at(m, r);
      CHECK(*k.K_rad == doctest::Approx(-1.0).epsilon(1e-9));
      CHECK(k.K_sph == doctest::Approx(-1.0).epsilon(1e-9));
    }
  }
  SUBCASE("flat space") {
    WarpedMetric m(3, [](double r) { return WarpJet<double>{r, 1.0, 0.0, 0.0}; }, 100.0, 0.0);
    auto k = curvature_at(m, 3.0);
    CHECK(*k.K_rad == 0.0);
    CHECK(k.K_sph == 0.0);
  }
}

TEST_CASE("Gauss curvature agrees with the Brioschi formula on 100+ points") {
  // Generic positive warp, no closed-form curvature needed.
  auto w = [](double r) { return std::tanh(r) * (1.0 + 0.2 * std::sin(r)); };
  WarpedMetric m = from_function(2, w, 20.0, 0.0);
  double worst = 0.0;
  for (int i = 0; i < 120; ++i) {
    double r = 0.2 + 0.15 * i;
    double oracle = brioschi([&](double x) { return w(x) * w(x); }, r);
    double k = curvature_at(m, r).K_sph;
    worst = std::max(worst, std::abs(k - oracle) / std::max(1e-2, std::abs(oracle)));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("cigar curvature from the conformal chart") {
  // (dx^2 + dy^2)/(1 + x^2 + y^2): K = -Laplacian(log phi)/(2 phi), phi = 1/(1 + x^2 + y^2),
  // evaluated by finite differences in Cartesian coordinates.
  auto log_phi = [](double x, double y) { return -std::log1p(x * x + y * y); };
  WarpedMetric fiber = cigar_fiber(1.0);
  double worst = 0.0;
  int n = 0;
  for (int i = 0; i < 25; ++i)
    for (int j = 0; j < 5; ++j, ++n) {
      double rad = 0.05 + 0.2 * i, t = 0.3 + 1.1 * j;
      double x = rad * std::cos(t), y = rad * std::sin(t), h = 1e-3;
      double lap = (log_phi(x + h, y) + log_phi(x - h, y) + log_phi(x, y + h) +
                    log_phi(x, y - h) - 4 * log_phi(x, y)) / (h * h);
      double phi = 1.0 / (1.0 + rad * rad);
      double oracle = -lap / (2 * phi);
      double k = curvature_at(fiber, cigar_rho(rad)).K_sph;
      worst = std::max(worst, std::abs(k - oracle) / oracle);
    }
  CHECK(n >= 100);
  CHECK(worst < 1e-5);
}

TEST_CASE("dimension-3 identities hold on a generic warp") {
  auto w = [](double r) { return r / std::sqrt(1.0 + 0.3 * r * r); };
  WarpedMetric m = from_function(3, w, 30.0, -0.15);
  for (int i = 1; i <= 50; ++i) {
    double r = 0.3 * i;
    auto k = curvature_at(m, r);
    REQUIRE(k.K_rad);
    CHECK(k.Ric_rad == doctest::Approx(2 * *k.K_rad));
    CHECK(k.Ric_tan == doctest::Approx(*k.K_rad + k.K_sph));
    CHECK(k.R == doctest::Approx(2 * k.Ric_tan + k.Ric_rad));
  }
}

TEST_CASE("dimension 2 leaves K_rad empty") {
  auto k = curvature_at(cigar_fiber(1.0), 1.0);
  CHECK_FALSE(k.K_rad.has_value());
  CHECK(k.R == doctest::Approx(2 * k.K_sph));
}

TEST_CASE("pole series joins the closed form continuously") {
  auto fiber = cigar_fiber(1.0);
  double below = curvature_at(fiber, 0.5 * kPoleCutoff).K_sph;
  double above = curvature_at(fiber, 2.0 * kPoleCutoff).K_sph;
  CHECK(below == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(above == doctest::Approx(below).epsilon(1e-6));
}

TEST_CASE("range errors outside the domain") {
  auto fiber = round_fiber(1.0);
  CHECK_THROWS_AS(fiber.jet(4.0), RangeError);
  CHECK_THROWS_AS(fiber.jet(-0.1), RangeError);
}

TEST_CASE("cigar solves the soliton equation with R + |grad f|^2 = 4a^2") {
  for (double a : {0.5, 1.0, 2.0}) {
    ModelSpace m = make_model(Cigar{a});
    for (double sigma : {0.01, 0.5, 2.0, 6.0}) {
      ProductPoint p{0.0, sigma / a, 0.0};
      CHECK(m.residual(p).max_abs() < 1e-10);
      CHECK(m.conserved(p) == doctest::Approx(4 * a * a).epsilon(1e-12));
    }
  }
}

TEST_CASE("log_cosh is stable for large arguments") {
  CHECK(log_cosh(1000.0) == doctest::Approx(1000.0 - std::log(2.0)));
  CHECK(log_cosh(0.3) == doctest::Approx(std::log(std::cosh(0.3))).epsilon(1e-14));
}
