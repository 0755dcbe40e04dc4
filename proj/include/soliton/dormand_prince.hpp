#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace soliton {

/// Embedded Dormand-Prince 5(4) pair with FSAL and a PI-free step controller.
///
/// The error norm is the max over components of |err_i| / (atol + rtol * max(|y_i|, |y_new_i|)),
/// so a tiny atol gives pure relative control, which is what the pole region of the
/// soliton ODE needs (1 - w' is O(r^2) there).
template <typename Scalar, int N>
class DormandPrince45 {
 public:
  using State = Eigen::Matrix<Scalar, N, 1>;

  struct Options {
    Scalar rtol = Scalar(1e-10);
    Scalar atol = Scalar(1e-16);
    Scalar h_init = Scalar(0);  // 0 selects a heuristic first step
    Scalar h_max = std::numeric_limits<Scalar>::infinity();
    Scalar h_min = Scalar(1e-14);
    long max_steps = 2'000'000;
  };

  struct Stats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evaluations = 0;
    Scalar t_end = Scalar(0);
    State y_end;
    bool completed = false;  // false when the observer stopped the run
  };

  explicit DormandPrince45(Options options) : opt_(options) {}

  /// Integrates y' = rhs(t, y) from t0 to t1 (t1 > t0). observer(t, y, dydt) is called on the
  /// initial point and after every accepted step; returning false stops the integration.
  template <class Rhs, class Observer>
  Stats integrate(Rhs&& rhs, Scalar t0, const State& y0, Scalar t1, Observer&& observer) const {
    if (!(t1 > t0)) throw std::invalid_argument("DormandPrince45: t1 must exceed t0");
    Stats stats;
    Scalar t = t0;
    State y = y0;
    State k1 = rhs(t, y);
    ++stats.rhs_evaluations;
    if (!observer(t, y, k1)) {
      stats.t_end = t;
      stats.y_end = y;
      return stats;
    }

    Scalar h = opt_.h_init > Scalar(0) ? opt_.h_init : initial_step(t0, y, k1, t1);
    State k2, k3, k4, k5, k6, k7, y_new, err;

    while (t < t1) {
      if (stats.accepted + stats.rejected >= opt_.max_steps)
        throw std::runtime_error("DormandPrince45: step budget exhausted");
      h = std::min({h, opt_.h_max, t1 - t});
      bool last = (t + h >= t1);

      k2 = rhs(t + c2 * h, (y + h * (a21 * k1)).eval());
      k3 = rhs(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
      k4 = rhs(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
      k5 = rhs(t + c5 * h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
      k6 = rhs(t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
      y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = rhs(t + h, y_new);
      stats.rhs_evaluations += 6;
      err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      Scalar norm = Scalar(0);
      for (int i = 0; i < y.size(); ++i) {
        using std::abs;
        using std::max;
        Scalar scale = opt_.atol + opt_.rtol * max(abs(y[i]), abs(y_new[i]));
        Scalar ratio = abs(err[i]) / scale;
        // inf or NaN from a step into a singularity; max() alone would drop a NaN
        if (!(ratio <= std::numeric_limits<Scalar>::max())) ratio = Scalar(1e10);
        norm = max(norm, ratio);
      }

      if (norm <= Scalar(1)) {
        t = last ? t1 : t + h;
        y = y_new;
        k1 = k7;
        ++stats.accepted;
        if (!observer(t, y, k1)) {
          stats.t_end = t;
          stats.y_end = y;
          return stats;
        }
        Scalar grow = norm > Scalar(0) ? Scalar(0.9) * std::pow(norm, Scalar(-0.2)) : Scalar(5);
        h *= std::clamp(grow, Scalar(0.2), Scalar(5));
      } else {
        ++stats.rejected;
        Scalar shrink = Scalar(0.9) * std::pow(norm, Scalar(-0.2));
        h *= std::clamp(shrink, Scalar(0.1), Scalar(0.9));
        if (h < opt_.h_min) throw std::runtime_error("DormandPrince45: step size underflow");
      }
    }
    stats.t_end = t;
    stats.y_end = y;
    stats.completed = true;
    return stats;
  }

  template <class Rhs>
  Stats integrate(Rhs&& rhs, Scalar t0, const State& y0, Scalar t1) const {
    return integrate(std::forward<Rhs>(rhs), t0, y0, t1,
                     [](Scalar, const State&, const State&) { return true; });
  }

 private:
  Scalar initial_step(Scalar t0, const State& y, const State& dy, Scalar t1) const {
    using std::abs;
    Scalar d0 = Scalar(0), d1 = Scalar(0);
    for (int i = 0; i < y.size(); ++i) {
      Scalar scale = opt_.atol + opt_.rtol * abs(y[i]);
      d0 = std::max(d0, abs(y[i]) / scale);
      d1 = std::max(d1, abs(dy[i]) / scale);
    }
    Scalar h = (d0 < Scalar(1e-5) || d1 < Scalar(1e-5)) ? Scalar(1e-6) : Scalar(0.01) * d0 / d1;
    return std::min(h, (t1 - t0));
  }

  Options opt_;

  static constexpr Scalar c2 = Scalar(1) / 5, c3 = Scalar(3) / 10, c4 = Scalar(4) / 5,
                          c5 = Scalar(8) / 9;
  static constexpr Scalar a21 = Scalar(1) / 5;
  static constexpr Scalar a31 = Scalar(3) / 40, a32 = Scalar(9) / 40;
  static constexpr Scalar a41 = Scalar(44) / 45, a42 = Scalar(-56) / 15, a43 = Scalar(32) / 9;
  static constexpr Scalar a51 = Scalar(19372) / 6561, a52 = Scalar(-25360) / 2187,
                          a53 = Scalar(64448) / 6561, a54 = Scalar(-212) / 729;
  static constexpr Scalar a61 = Scalar(9017) / 3168, a62 = Scalar(-355) / 33,
                          a63 = Scalar(46732) / 5247, a64 = Scalar(49) / 176,
                          a65 = Scalar(-5103) / 18656;
  static constexpr Scalar b1 = Scalar(35) / 384, b3 = Scalar(500) / 1113, b4 = Scalar(125) / 192,
                          b5 = Scalar(-2187) / 6784, b6 = Scalar(11) / 84;
  static constexpr Scalar e1 = Scalar(71) / 57600, e3 = Scalar(-71) / 16695,
                          e4 = Scalar(71) / 1920, e5 = Scalar(-17253) / 339200,
                          e6 = Scalar(22) / 525, e7 = Scalar(-1) / 40;
};

}  // namespace soliton
