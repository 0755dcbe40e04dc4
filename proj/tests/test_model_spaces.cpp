#include "doctest.h"

#include "soliton/model_spaces.hpp"

#include <cmath>
#include <numbers>

using namespace soliton;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("affine family: every c1, c2 is a soliton potential") {
  CigarLine m{0.7, 0.0};
  for (double c1 : {-3.0, 0.0, 2.5})
    for (double c2 : {-1.0, 0.0, 0.4, 5.0}) CHECK(potential_family_residual(m, c1, c2) < 1e-9);
}

TEST_CASE("non-affine perturbations break the equation linearly in eps") {
  CigarLine m{0.5, 0.3};
  // Hess(eps s^2) = 2 eps ds^2 and the canonical potential is exact, so the residual is 2 eps.
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    auto probe = potential_rigidity_probe(m, [](double s, double) { return s * s; }, eps);
    CHECK(probe.kappa == doctest::Approx(2.0).epsilon(1e-6));
  }
  auto a = potential_rigidity_probe(m, [](double, double sigma) { return std::cos(sigma); }, 1e-2);
  auto b = potential_rigidity_probe(m, [](double, double sigma) { return std::cos(sigma); }, 1e-3);
  CHECK(std::log10(a.residual / b.residual) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("affine perturbations and bad eps are refused") {
  CigarLine m{1.0, 0.0};
  CHECK_THROWS_AS(potential_rigidity_probe(m, [](double s, double) { return 3 + 2 * s; }, 1e-3),
                  std::invalid_argument);
  CHECK_THROWS_AS(potential_rigidity_probe(m, [](double s, double) { return s * s; }, 0.0),
                  std::invalid_argument);
}

TEST_CASE("from_rhat normalises R + |grad f|^2 to 1") {
  for (double rhat : {0.1, 0.5, 0.9}) {
    CigarLine c = CigarLine::from_rhat(rhat);
    CHECK(c.rhat() == doctest::Approx(rhat));
    ModelSpace m = make_model(c);
    for (double sigma : {0.02, 1.0, 7.0}) {
      ProductPoint p{1.5, sigma, 0.4};
      CHECK(m.conserved(p) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(m.residual(p).max_abs() < 1e-10);
    }
    CHECK(m.curvature(ProductPoint{0.0, 1e-8, 0.0}).R == doctest::Approx(rhat).epsilon(1e-9));
  }
}

TEST_CASE("round cylinder is not a soliton for the zero potential") {
  ModelSpace m = make_model(RoundCylinder{2.0});
  ProductPoint p{0.0, 1.0, 0.0};
  // R = 2/a^2 on the sphere factor of radius a.
  CHECK(m.curvature(p).R == doctest::Approx(0.5));
  CHECK(m.residual(p).max_abs() == doctest::Approx(0.25));
}

TEST_CASE("sphere slice shrinks linearly in area and dies at a0^2/2") {
  auto ev = cylinder_slice_evolution(1.5, 1.5, 300);
  CHECK(ev.extinction_time == doctest::Approx(1.125));
  for (std::size_t k = 0; k + 1 < ev.series.size(); ++k) {
    const SlicePoint& a = ev.series[k];
    if (a.extinct) {
      CHECK(a.area == 0.0);
      continue;
    }
    double a2 = a.area / (4 * kPi);
    CHECK(a2 == doctest::Approx(2.25 - 2 * a.tau).epsilon(1e-12));
    // d/dtau of the area is minus the total scalar curvature 2/a^2 of the slice.
    CHECK(a.dA_dtau == doctest::Approx(-(2 / a2) * a.area));
    CHECK(a.half_total_R == doctest::Approx(0.5 * a.dA_dtau));
    const SlicePoint& b = ev.series[k + 1];
    if (!b.extinct) CHECK((b.area - a.area) / (b.tau - a.tau) == doctest::Approx(a.dA_dtau));
  }
  CHECK(ev.series.back().extinct);
  CHECK_THROWS_AS(cylinder_slice_evolution(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("model specs parse and validate") {
  auto v = parse_model_spec({{"model", "cigar-line"}, {"rhat", 0.36}});
  REQUIRE(std::holds_alternative<CigarLine>(v));
  CHECK(std::get<CigarLine>(v).slope == doctest::Approx(0.8));
  CHECK(std::get<Cigar>(parse_model_spec({{"model", "cigar"}, {"scale", 2.0}})).scale == 2.0);
  CHECK(std::get<RoundCylinder>(parse_model_spec({{"model", "round-cylinder"}})).radius == 1.0);
  CHECK_THROWS_AS(parse_model_spec({{"model", "torus"}}), std::invalid_argument);
  CHECK_THROWS_AS(parse_model_spec({{"scale", 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(parse_model_spec({{"model", "cigar"}, {"scale", "big"}}), std::invalid_argument);
  CHECK_THROWS_AS(parse_model_spec({{"model", "cigar"}, {"scale", -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(parse_model_spec({{"model", "bryant"}}), std::invalid_argument);
  CHECK_THROWS_AS(make_model(RoundCylinder{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_model(CigarLine{-1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("cigar chart change is an inverse pair") {
  for (double r : {0.0, 0.3, 5.0, 100.0}) CHECK(cigar_radius(cigar_rho(r)) == doctest::Approx(r));
}

TEST_CASE("numeric Bryant model reports the profile normalisation") {
  ModelSpace m = make_model(BryantNumeric{integrate(seed(1e-4), 20.0, 1e-10)});
  CHECK(m.R_origin() == doctest::Approx(1.0));
  ProductPoint p{0.0, 5.0, 0.0};
  CHECK(m.conserved(p) == doctest::Approx(1.0).epsilon(1e-8));
}
