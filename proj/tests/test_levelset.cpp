#include "doctest.h"

#include "soliton/levelset.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <queue>
#include <sstream>

using namespace soliton;

namespace {

constexpr double kPi = std::numbers::pi;

const SolitonProfile& profile() {
  static const SolitonProfile p = integrate(seed(1e-4), 120.0, 1e-10);
  return p;
}

// Shortest path between (r0, 0) and (r0, pi) in the totally geodesic plane dr^2 + w^2 dphi^2,
// by Dijkstra on a polar grid with the pole as a single node.
double dijkstra_antipodal(const SolitonProfile& p, double r0) {
  const int N = 120, M = 240, k = 4;
  auto rad = [&](int i) { return r0 * i / N; };
  auto id = [&](int i, int j) { return i == 0 ? 0 : 1 + (i - 1) * M + ((j % M) + M) % M; };
  std::vector<double> dist(1 + N * M, 1e300);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> q;
  int src = id(N, 0), dst = id(N, M / 2);
  dist[src] = 0;
  q.emplace(0.0, src);
  while (!q.empty()) {
    auto [d, u] = q.top();
    q.pop();
    if (d > dist[u]) continue;
    if (u == dst) return d;
    if (u == 0) {
      for (int j = 0; j < M; ++j) {
        int v = id(1, j);
        if (d + rad(1) < dist[v]) q.emplace(dist[v] = d + rad(1), v);
      }
      continue;
    }
    int i = 1 + (u - 1) / M, j = (u - 1) % M;
    if (i == 1 && d + rad(1) < dist[0]) q.emplace(dist[0] = d + rad(1), 0);
    for (int di = -k; di <= k; ++di)
      for (int dj = -k; dj <= k; ++dj) {
        int ni = i + di;
        if ((di == 0 && dj == 0) || ni < 1 || ni > N) continue;
        double dr = rad(ni) - rad(i), dphi = 2 * kPi * dj / M;
        double wm = p.query(0.5 * (rad(ni) + rad(i))).w;
        double len = std::sqrt(dr * dr + wm * wm * dphi * dphi);
        int v = id(ni, j + dj);
        if (d + len < dist[v]) q.emplace(dist[v] = d + len, v);
      }
  }
  return dist[dst];
}

}  // namespace

TEST_CASE("records match closed forms from the profile") {
  const SolitonProfile& p = profile();
  for (double lambda : {0.5, 5.0, 40.0, 100.0}) {
    LevelSetRecord rec = record(p, lambda);
    double r = p.invert_potential(lambda);
    ProfileState st = p.query(r);
    CHECK(rec.r == doctest::Approx(r));
    CHECK(rec.area == doctest::Approx(4 * kPi * st.w * st.w));
    CHECK(rec.diameter_inner == doctest::Approx(kPi * st.w));
    CHECK(rec.detII_integral == doctest::Approx(4 * kPi * st.wp * st.wp));
    CHECK(rec.gauss_bonnet() == doctest::Approx(4 * kPi).epsilon(1e-12));
    CHECK(rec.grad_norm == doctest::Approx(st.fp));
    CHECK(rec.coarea_flux == doctest::Approx(rec.area / st.fp));
    CHECK(rec.volume == doctest::Approx(p.volume(r)));
    CHECK(rec.R + st.fp * st.fp == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK_THROWS_AS(record(p, -1.0), RangeError);
  CHECK_THROWS_AS(record(p, 2 * p.f_max()), RangeError);
}

TEST_CASE("finite-difference identities hold and converge") {
  const SolitonProfile& p = profile();
  for (double lambda : {10.0, 50.0, 100.0}) {
    double h = default_fd_step(p, lambda);
    CHECK(area_ode_check(p, lambda, h).rel_error() < 1e-6);
    CHECK(volume_coarea_check(p, lambda, h).rel_error() < 1e-6);
    CHECK(coarea_second_derivative_check(p, lambda, h).rel_error() < 1e-5);
    double coarse = area_ode_check(p, lambda, 16 * h).rel_error();
    CHECK(coarse > area_ode_check(p, lambda, 4 * h).rel_error());
  }
  CHECK_THROWS_AS(coarea_second_derivative_check(p, 0.05, 0.01), RangeError);
  CHECK_THROWS_AS(area_ode_check(p, 0.5, 1.0), RangeError);
}

TEST_CASE("monotonicity scan finds no violations") {
  MonotonicityScan scan = detII_monotonicity_scan(profile(), level_grid(0.1, 100.0, 150, true));
  CHECK(scan.detII_violations == 0);
  CHECK(scan.km_violations == 0);
  CHECK(scan.R_violations == 0);
  CHECK(scan.km_max <= 4 * kPi);
  CHECK(scan.detII_first > scan.detII_last);
  REQUIRE(scan.km_half_level);
  CHECK(*scan.km_half_level > 0.1);
}

TEST_CASE("growth tables and doubling ratios") {
  GrowthTables t = growth_tables(profile(), level_grid(10.0, 100.0, 10, false));
  REQUIRE(t.rows.size() == 10);
  for (const DoublingRow& d : t.doubling) {
    // Area is asymptotically linear and volume quadratic in lambda.
    CHECK(d.area_ratio == doctest::Approx(2.0).epsilon(0.1));
    CHECK(d.volume_ratio == doctest::Approx(4.0).epsilon(0.15));
  }
  CHECK(t.min_R_times_lambda > 0.5);
}

TEST_CASE("diameter drop bound") {
  const SolitonProfile& p = profile();
  DiameterDrop d = diameter_drop_bound(p, 80.0, 40.0);
  CHECK(d.D_a == doctest::Approx(kPi * p.query(p.invert_potential(80.0)).w));
  CHECK(d.beta_b == doctest::Approx(p.invert_potential(40.0) - p.invert_potential(39.0)));
  CHECK(d.slack() >= 0.0);
  CHECK_THROWS_AS(diameter_drop_bound(p, 10.0, 20.0), std::invalid_argument);
  CHECK_THROWS_AS(diameter_drop_bound(p, 10.0, 1.0), std::invalid_argument);
}

TEST_CASE("ambient diameter agrees with a graph search and sits below the inner one") {
  const SolitonProfile& p = profile();
  for (double lambda : {0.5, 3.0, 15.0}) {
    double amb = ambient_diameter(p, lambda);
    double r = p.invert_potential(lambda);
    double graph = dijkstra_antipodal(p, r);
    CHECK(amb <= kPi * p.query(r).w * (1 + 1e-9));
    CHECK(amb <= 2 * r * (1 + 1e-9));
    CHECK(amb <= graph * (1 + 1e-3));
    CHECK(amb >= 0.98 * graph);
  }
}

TEST_CASE("level grid and CSV layout") {
  auto lin = level_grid(1.0, 3.0, 5, false);
  CHECK(lin == std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0});
  auto lg = level_grid(1.0, 1000.0, 4, true);
  CHECK(lg.front() == 1.0);
  CHECK(lg.back() == doctest::Approx(1000.0));
  CHECK(lg[1] == doctest::Approx(10.0));
  CHECK_THROWS_AS(level_grid(0.0, 1.0, 4, true), std::invalid_argument);
  CHECK_THROWS_AS(level_grid(1.0, 1.0, 4, false), std::invalid_argument);

  std::ostringstream out;
  write_levels_csv(out, {record(profile(), 2.0)}, true);
  std::string header = out.str().substr(0, out.str().find('\n'));
  CHECK(header == "lambda,r,area,diameter,grad_norm,detII_int,km_int,volume,R,R_times_lambda,gauss_bonnet");
  std::ostringstream plain;
  write_levels_csv(plain, {record(profile(), 2.0)});
  CHECK(plain.str().find("gauss_bonnet") == std::string::npos);
}
