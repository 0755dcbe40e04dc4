#pragma once

// Rotationally symmetric steady soliton on R^3, g = dr^2 + w(r)^2 g_{S^2}, Ric = Hess f.
// With x = w' the radial and tangential components of Ric = Hess f read
//   f'' = -2 x'/w,    f' x / w = -x'/w + (1 - x^2)/w^2,
// i.e.  x' = (1 - x^2)/w - f' x,   (f')' = -2 x'/w.
// The state that is actually integrated is (w, y = 1 - w', f, f'), see docs/curvature.md.

#include "soliton/warped_geometry.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace soliton {

/// Smooth-pole expansion
///   w  = r + w3 r^3 + w5 r^5,      w3 = -c/12,  w5 = 29 c^2/2400
///   f' = c r + p3 r^3,             p3 = -2 c^2/15
/// with c = f''(0) = R(O)/3.
struct SeriesSeed {
  double eps = 1e-4;
  double c = 1.0 / 3.0;
  double w3 = 0, w5 = 0, p3 = 0;
  double w = 0, wp = 1, one_minus_wp = 0, f = 0, fp = 0;
};

SeriesSeed seed(double eps, double c = 1.0 / 3.0);

/// State and derivatives of the series at radius r (valid for r <~ 1e-3).
struct ProfileState {
  double r = 0;
  double w = 0, wp = 1, one_minus_wp = 0, wpp = 0;
  double f = 0, fp = 0, fpp = 0;
};
ProfileState series_state(const SeriesSeed& s, double r);

/// Right-hand side of the integrated system in the variables u = (w, 1 - w', f, f').
Eigen::Vector4d soliton_rhs(const Eigen::Vector4d& u);

/// Scalar curvature and R + f'^2 of a state, without cancellation near the pole.
double scalar_curvature(double w, double one_minus_wp, double fp);

/// Integration aborted because an invariant of the true solution failed.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double radius)
      : std::runtime_error(what), radius_(radius) {}
  double radius() const { return radius_; }

 private:
  double radius_;
};

struct ProfileNode {
  double r = 0, w = 0, one_minus_wp = 0, f = 0, fp = 0;
};

/// Sampled solution on the integrator's accepted nodes. Immutable and cheap to copy.
class SolitonProfile {
 public:
  /// Builds a profile from nodes (e.g. loaded from JSON). The first node must be the seed
  /// radius; c is recovered from R_origin = 3c.
  SolitonProfile(std::vector<ProfileNode> nodes, double R_origin, double tol);

  const std::vector<ProfileNode>& nodes() const { return data_->nodes; }
  double eps() const { return data_->nodes.front().r; }
  double r_max() const { return data_->nodes.back().r; }
  double tol() const { return data_->tol; }
  double R_origin() const { return 3.0 * data_->seed.c; }
  const SeriesSeed& series() const { return data_->seed; }
  double f_max() const { return data_->nodes.back().f; }

  /// max |R + f'^2 - R(O)| over nodes.
  double max_drift() const { return data_->max_drift; }

  /// Interpolated state; second derivatives come from the ODE right-hand side.
  /// Below eps the series is used. Throws RangeError beyond r_max.
  ProfileState query(double r) const;
  CurvatureSample<double> curvature(double r) const;

  /// Jet of the interpolating polynomials themselves: w', w'', f' and f'' by differentiating
  /// the w and f interpolants instead of evaluating the ODE, so a soliton residual built from
  /// it measures the discrete solution. The series is used below eps.
  ProfileState interpolant_jet(double r) const;

  /// Unique r with f(r) = lambda.
  double invert_potential(double lambda) const;

  /// Volume of the geodesic ball B(O, r): integral of 4 pi w^2 from 0 to r.
  double volume(double r) const;

  WarpedMetric metric() const;
  RadialPotential potential() const;

 private:
  struct Data {
    std::vector<ProfileNode> nodes;
    std::vector<Eigen::Vector4d> d1, d2;  // first and second r-derivatives of the state
    std::vector<double> cumulative_volume;
    SeriesSeed seed;
    double tol = 0;
    double max_drift = 0;
  };
  std::shared_ptr<const Data> data_;

  std::size_t interval(double r) const;
  Eigen::Vector4d state_at(std::size_t i, double r) const;
  template <class Basis>
  Eigen::Vector4d combine(std::size_t i, double t, double scale) const;
};

struct IntegrateStats {
  long accepted = 0;
  long rejected = 0;
};

/// Adaptive Dormand-Prince integration from the seed to r_max with relative tolerance tol.
/// Monotonicity invariants are certified on every accepted node; violation throws
/// IntegrationError. R + f'^2 is monitored (reported by max_drift), never enforced.
SolitonProfile integrate(const SeriesSeed& seed, double r_max, double tol,
                         IntegrateStats* stats = nullptr);

}  // namespace soliton
