#include "soliton/level_mesh.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

namespace soliton {

namespace {

constexpr double kPi = std::numbers::pi;

void check_model(const CigarLine& model, double level) {
  if (!(model.slope > 0.0)) throw std::invalid_argument("cap mesh: slope must be positive");
  if (!(level > 0.0)) throw std::invalid_argument("cap mesh: level must be positive");
}

struct CapMetric {
  double a, slope;
  // Coefficients E (dsigma^2) and G (dtheta^2) of the induced metric.
  double E(double sigma) const {
    double dp = 2.0 * a * std::tanh(a * sigma) / slope;
    return 1.0 + dp * dp;
  }
  double G(double sigma) const {
    double w = std::tanh(a * sigma) / a;
    return w * w;
  }
};

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double cap_sigma(const CigarLine& model, double level) {
  check_model(model, level);
  // acosh(e^{level/2}) without overflow.
  return (0.5 * level + std::log1p(std::sqrt(-std::expm1(-level)))) / model.scale;
}

double cap_meridian_length(const CigarLine& model, double level) {
  double sc = cap_sigma(model, level);
  CapMetric m{model.scale, model.slope};
  std::function<double(double)> f = [&](double s) { return std::sqrt(m.E(s)); };
  double fa = f(0.0), fb = f(sc), fm = f(0.5 * sc);
  return simpson(f, 0.0, sc, fa, fm, fb, sc / 6.0 * (fa + 4.0 * fm + fb), 1e-12 * sc, 40);
}

double cap_mesh_diameter(const CigarLine& model, double level, const CapMeshOptions& opt) {
  if (opt.n_sigma < 2 || opt.n_theta < 4 || opt.stencil < 1)
    throw std::invalid_argument("cap mesh: resolution too small");
  const double sc = cap_sigma(model, level);
  const CapMetric m{model.scale, model.slope};
  const int N = opt.n_sigma, M = opt.n_theta, k = opt.stencil;

  // Rings graded towards the tip, where the cap bends.
  std::vector<double> sigma(N + 1);
  for (int i = 0; i <= N; ++i) {
    double t = static_cast<double>(i) / N;
    sigma[i] = sc * t * (0.5 + 0.5 * t);
  }
  auto id = [&](int i, int j) { return i == 0 ? 0 : 1 + (i - 1) * M + ((j % M) + M) % M; };
  const int n_nodes = 1 + N * M;

  auto edge = [&](int i0, int i1, double dtheta) {
    double s0 = sigma[i0], s1 = sigma[i1];
    double ds = s1 - s0;
    if (i0 == 0 || i1 == 0) {
      // Meridian segment from the pole: two-point Gauss on sqrt(E).
      double lo = std::min(s0, s1), hi = std::max(s0, s1);
      double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo) / std::sqrt(3.0);
      return 0.5 * (hi - lo) * (std::sqrt(m.E(c - r)) + std::sqrt(m.E(c + r)));
    }
    double sm = 0.5 * (s0 + s1);
    return std::sqrt(m.E(sm) * ds * ds + m.G(sm) * dtheta * dtheta);
  };

  auto eccentricity = [&](int source) {
    std::vector<double> dist(n_nodes, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
      auto [d, u] = queue.top();
      queue.pop();
      if (d > dist[u]) continue;
      auto relax = [&](int v, double len) {
        if (d + len < dist[v]) {
          dist[v] = d + len;
          queue.emplace(dist[v], v);
        }
      };
      if (u == 0) {
        for (int i = 1; i <= std::min(k, N); ++i)
          for (int j = 0; j < M; ++j) relax(id(i, j), edge(0, i, 0.0));
        continue;
      }
      int i = 1 + (u - 1) / M, j = (u - 1) % M;
      for (int di = -k; di <= k; ++di) {
        int ni = i + di;
        if (ni < 0 || ni > N) continue;
        if (ni == 0) {
          relax(0, edge(i, 0, 0.0));
          continue;
        }
        for (int dj = -k; dj <= k; ++dj) {
          if ((di == 0 && dj == 0) || std::gcd(std::abs(di), std::abs(dj)) != 1) continue;
          relax(id(ni, j + dj), edge(i, ni, 2.0 * kPi * dj / M));
        }
      }
    }
    double ecc = 0.0;
    for (double d : dist) ecc = std::max(ecc, d);
    return ecc;
  };

  // Eccentricity depends only on the ring; sample the tip, the middle and the rim.
  return std::max({eccentricity(0), eccentricity(id(N / 2, 0)), eccentricity(id(N, 0))});
}

CapDiameter cap_diameter(const CigarLine& model, double level, const CapMeshOptions& opt) {
  CapMeshOptions fine = opt;
  fine.n_sigma *= 2;
  fine.n_theta *= 2;
  return {cap_mesh_diameter(model, level, opt), cap_mesh_diameter(model, level, fine)};
}

}  // namespace soliton
