#include "soliton/point_picking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace soliton {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

PickRefusal bounded_refusal(const std::vector<double>& rd2, const std::string& what) {
  std::size_t half = rd2.size() / 2;
  PickRefusal ref;
  ref.first_half_max = *std::max_element(rd2.begin(), rd2.begin() + half);
  ref.second_half_max = *std::max_element(rd2.begin() + half, rd2.end());
  ref.RD2_bound = std::max(ref.first_half_max, ref.second_half_max);
  ref.reason = "R*D^2 bounded on " + what + " (sup " + std::to_string(ref.RD2_bound) + ")";
  return ref;
}

bool looks_bounded(const PickRefusal& r) { return r.second_half_max <= 1.1 * r.first_half_max; }

// Level whose cap diameter equals target, by the Illinois variant of regula falsi.
double level_for_diameter(const CigarLine& model, double target, const CapMeshOptions& mesh,
                          std::map<double, double>& cache) {
  auto D = [&](double level) {
    auto it = cache.find(level);
    if (it != cache.end()) return it->second;
    double d = cap_mesh_diameter(model, level, mesh);
    cache.emplace(level, d);
    return d;
  };
  // The meridian length is a lower bound for D, so L(hi) >= target brackets from above.
  double hi = 1.0;
  while (cap_meridian_length(model, hi) < target) hi *= 2.0;
  double lo_l = 0.0, hi_l = hi;
  for (int it = 0; it < 200 && hi_l - lo_l > 1e-12 * hi_l; ++it) {
    double mid = 0.5 * (lo_l + hi_l);
    (cap_meridian_length(model, mid) < target ? lo_l : hi_l) = mid;
  }
  hi = hi_l;
  double g_hi = D(hi) - target;
  double lo = 0.5 * hi;
  double g_lo = D(lo) - target;
  while (g_lo >= 0.0) {
    hi = lo;
    g_hi = g_lo;
    lo *= 0.5;
    if (lo < 1e-8) throw std::runtime_error("point picking: cannot bracket the diameter");
    g_lo = D(lo) - target;
  }
  int side = 0;
  double x = hi;
  for (int it = 0; it < 60; ++it) {
    x = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
    double g = D(x) - target;
    if (std::abs(g) <= 1e-10 * target || hi - lo <= 1e-12 * hi) break;
    if (g > 0.0) {
      hi = x;
      g_hi = g;
      if (side == 1) g_lo *= 0.5;
      side = 1;
    } else {
      lo = x;
      g_lo = g;
      if (side == -1) g_hi *= 0.5;
      side = -1;
    }
  }
  return x;
}

}  // namespace

PickSchedule default_pick_schedule() {
  return {[](int j) { return 1.0 / std::sqrt(static_cast<double>(j)); },
          [](int j) { return static_cast<double>(j) * j; }};
}

void validate_schedule(const PickSchedule& schedule, int max_j) {
  if (!schedule.eps || !schedule.A) throw std::invalid_argument("pick schedule: missing function");
  for (int j = 1; j < max_j; ++j) {
    double e0 = schedule.eps(j), e1 = schedule.eps(j + 1);
    double a0 = schedule.A(j), a1 = schedule.A(j + 1);
    if (!(e0 > 0.0 && e1 <= e0)) throw std::invalid_argument("pick schedule: eps_j must decrease");
    if (!(a0 > 0.0 && a1 >= a0)) throw std::invalid_argument("pick schedule: A_j must increase");
    if (!(a1 * e1 * e1 > a0 * e0 * e0))
      throw std::invalid_argument("pick schedule: A_j eps_j^2 must increase");
  }
}

PickOutcome pick_points(const ModelSpace& model, const PickSchedule& schedule, int j_max,
                        const PickOptions& options) {
  if (j_max < 1) throw std::invalid_argument("pick_points: j_max must be positive");
  validate_schedule(schedule, options.max_candidate);

  return std::visit(
      overloaded{
          [&](const BryantNumeric& m) -> PickOutcome {
            const SolitonProfile& p = m.profile;
            std::vector<double> rd2;
            double lo = 10.0, hi = p.f_max();
            for (int i = 0; i < 32; ++i) {
              double r = p.invert_potential(lo * std::pow(hi / lo, i / 31.0));
              double D = kPi * p.query(r).w;
              rd2.push_back(p.curvature(r).R * D * D);
            }
            PickRefusal ref = bounded_refusal(rd2, "the Bryant profile");
            if (!looks_bounded(ref)) ref.reason = "point picking is implemented on R x cigar only";
            return ref;
          },
          [&](const Cigar& m) -> PickOutcome {
            std::vector<double> rd2;
            for (int i = 1; i <= 32; ++i) {
              double sigma = 0.5 * i / m.scale;
              double c = std::cosh(m.scale * sigma);
              double D = kPi * std::tanh(m.scale * sigma) / m.scale;
              rd2.push_back(4.0 * m.scale * m.scale / (c * c) * D * D);
            }
            return bounded_refusal(rd2, "the cigar");
          },
          [&](const RoundCylinder&) -> PickOutcome {
            return PickRefusal{"the canonical potential is constant: no level sets", 0, 0, 0};
          },
          [&](const CigarLine& m) -> PickOutcome {
            if (!(m.slope > 0.0))
              return PickRefusal{"slope 0: level sets are not caps over the line", 0, 0, 0};
            const double rhat = m.rhat();
            std::map<double, double> cache;

            // Measured precondition: sup over each level of R D^2 is rhat D^2 (R peaks on the axis).
            std::vector<double> rd2;
            for (int i = 0; i < 8; ++i) {
              double level = std::pow(2.0, i);
              double D = cap_mesh_diameter(m, level, options.mesh);
              cache.emplace(level, D);
              rd2.push_back(rhat * D * D);
            }
            PickRefusal probe = bounded_refusal(rd2, "R x cigar");
            if (looks_bounded(probe)) return probe;

            PickSequence seq;
            seq.precondition_growth = probe.second_half_max / probe.first_half_max;
            std::map<int, PickedPoint> candidates;
            auto candidate = [&](int j) -> const PickedPoint& {
              auto it = candidates.find(j);
              if (it != candidates.end()) return it->second;
              PickedPoint q;
              q.j = j;
              q.eps = schedule.eps(j);
              q.A = schedule.A(j);
              q.sigma_j = std::sqrt(q.A / rhat);
              q.level = level_for_diameter(m, q.sigma_j, options.mesh, cache);
              q.s = q.level / m.slope;
              q.r = q.eps * q.sigma_j;
              q.delta = 3.0 * q.eps < 1.0 ? std::pow(1.0 - 3.0 * q.eps, -2.0) - 1.0
                                          : std::numeric_limits<double>::infinity();
              q.R = rhat;
              q.D = q.sigma_j;
              q.distance = q.s;
              q.lambda = q.distance / q.r;
              ++seq.candidates_examined;
              return candidates.emplace(j, q).first->second;
            };
            auto disjoint = [&](const PickedPoint& q) {
              for (const auto& p : seq.points)
                if (!(std::abs(q.s - p.s) > q.r + p.r)) return false;
              return true;
            };

            seq.points.push_back(candidate(1));
            int last = 1;
            while (static_cast<int>(seq.points.size()) < j_max) {
              // Gallop to a disjoint candidate, then bisect back to the first one.
              int step = 1, hi = -1, lo = last;
              while (last + step <= options.max_candidate) {
                if (disjoint(candidate(last + step))) {
                  hi = last + step;
                  break;
                }
                lo = last + step;
                step *= 2;
              }
              if (hi < 0) {
                if (!disjoint(candidate(options.max_candidate))) break;
                hi = options.max_candidate;
              }
              while (hi - lo > 1) {
                int mid = (lo + hi) / 2;
                (disjoint(candidate(mid)) ? hi : lo) = mid;
              }
              seq.points.push_back(candidate(hi));
              last = hi;
            }
            return seq;
          },
      },
      model.variant);
}

PickAudit audit_pick(const CigarLine& model, const PickSequence& seq, const CapMeshOptions& mesh) {
  PickAudit audit;
  const auto& pts = seq.points;
  const double a = model.scale;
  auto R_at = [&](double sigma) {
    double c = std::cosh(a * sigma);
    return 4.0 * a * a / (c * c);
  };
  auto fail = [&](bool& flag, const std::string& msg) {
    flag = false;
    audit.failures.push_back(msg);
  };

  std::vector<double> rd2;
  for (const auto& q : pts) {
    // Ball about (s, 0): d((s, 0), (s', sigma')) = hypot(s' - s, sigma') on the product.
    constexpr int n = 81;
    double sup_R = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double ds = q.r * (2.0 * i / (n - 1) - 1.0);
        double sig = q.r * k / (n - 1);
        if (ds * ds + sig * sig <= q.r * q.r) sup_R = std::max(sup_R, R_at(sig));
      }
    double measured = sup_R / R_at(0.0) - 1.0;
    audit.measured_delta.push_back(measured);
    if (!(measured <= q.delta))
      fail(audit.a, "(a) fails at j = " + std::to_string(q.j));

    CapDiameter d = cap_diameter(model, q.level, mesh);
    audit.worst_mesh_change = std::max(audit.worst_mesh_change, d.rel_change());
    rd2.push_back(R_at(0.0) * d.fine * d.fine);
  }
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i].r2R() > pts[i - 1].r2R()))
      fail(audit.b, "(b) r^2 R not increasing at j = " + std::to_string(pts[i].j));
    if (!(pts[i].lambda > pts[i - 1].lambda))
      fail(audit.c, "(c) lambda not increasing at j = " + std::to_string(pts[i].j));
    if (!(rd2[i] > rd2[i - 1]))
      fail(audit.blowup, "R D^2 not increasing at j = " + std::to_string(pts[i].j));
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t k = i + 1; k < pts.size(); ++k)
      if (!(std::abs(pts[i].s - pts[k].s) > pts[i].r + pts[k].r))
        fail(audit.d, "(d) balls " + std::to_string(pts[i].j) + " and " + std::to_string(pts[k].j) +
                          " intersect");
  return audit;
}

}  // namespace soliton
