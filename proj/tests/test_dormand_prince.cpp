#include "doctest.h"

#include "soliton/dormand_prince.hpp"

#include <cmath>

using soliton::DormandPrince45;

TEST_CASE("exponential decay matches the exact solution") {
  using DP = DormandPrince45<double, 1>;
  DP::Options opt;
  opt.rtol = 1e-11;
  DP dp(opt);
  auto stats = dp.integrate([](double, const DP::State& y) { return DP::State(-y); }, 0.0,
                            DP::State(1.0), 5.0);
  CHECK(stats.completed);
  CHECK(stats.t_end == 5.0);
  CHECK(std::abs(stats.y_end[0] - std::exp(-5.0)) < 1e-12);
}

TEST_CASE("harmonic oscillator keeps its energy") {
  using DP = DormandPrince45<double, 2>;
  DP::Options opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  DP dp(opt);
  double worst = 0;
  dp.integrate([](double, const DP::State& y) { return DP::State(y[1], -y[0]); }, 0.0,
               DP::State(1.0, 0.0), 20.0, [&](double t, const DP::State& y, const DP::State&) {
                 worst = std::max(worst, std::abs(y[0] - std::cos(t)));
                 return true;
               });
  CHECK(worst < 1e-10);
}

TEST_CASE("observer can stop the run") {
  using DP = DormandPrince45<double, 1>;
  DP dp(DP::Options{});
  auto stats = dp.integrate([](double, const DP::State&) { return DP::State(1.0); }, 0.0,
                            DP::State(0.0), 10.0,
                            [](double t, const DP::State&, const DP::State&) { return t < 1.0; });
  CHECK_FALSE(stats.completed);
  CHECK(stats.t_end >= 1.0);
  CHECK(stats.t_end < 10.0);
}

TEST_CASE("blow-up ends in step underflow") {
  using DP = DormandPrince45<double, 1>;
  DP dp(DP::Options{});
  // y' = y^2, y(0) = 1 blows up at t = 1.
  CHECK_THROWS_AS(dp.integrate([](double, const DP::State& y) { return DP::State(y[0] * y[0]); },
                               0.0, DP::State(1.0), 2.0),
                  std::runtime_error);
}

TEST_CASE("reversed interval is rejected") {
  using DP = DormandPrince45<double, 1>;
  DP dp(DP::Options{});
  CHECK_THROWS_AS(dp.integrate([](double, const DP::State& y) { return y; }, 1.0, DP::State(1.0), 0.0),
                  std::invalid_argument);
}
