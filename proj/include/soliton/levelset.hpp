#pragma once

// Level sets S_lambda = f^-1(lambda) of the rotationally symmetric soliton are round spheres
// of radius w(r(lambda)). With N = d/dr both principal curvatures are w'/w, so
//   area = 4 pi w^2, int det II = 4 pi w'^2, int K_M(e1, e2) = 4 pi (1 - w'^2),
//   d area/d lambda = 8 pi w w'/f', coarea flux = int 1/|grad f| = 4 pi w^2/f',
//   d flux/d lambda = 8 pi (1 - w'^2)/f'^3.

#include "soliton/bryant.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace soliton {

struct LevelSetRecord {
  double lambda = 0;
  double r = 0;
  double w = 0;
  double area = 0;
  double diameter_inner = 0;                  // pi w
  std::optional<double> diameter_ambient;     // filled only by ambient_diameter
  double grad_norm = 0;
  double mean_curvature = 0;
  double detII_integral = 0;
  double km_integral = 0;
  double induced_K_integral = 0;
  double volume = 0;
  double coarea_flux = 0;
  double R = 0;
  double Ric_tan = 0;

  double gauss_bonnet() const { return km_integral + detII_integral; }
};

/// Throws RangeError for levels outside [0, f(r_max)] and std::logic_error if a record
/// invariant fails.
LevelSetRecord record(const SolitonProfile& profile, double lambda);

/// Geodesic distance in M between antipodal points of S_lambda (the inner diameter pi w is an
/// upper bound for it).
double ambient_diameter(const SolitonProfile& profile, double lambda);

struct FiniteDifferenceCheck {
  double lambda = 0;
  double h = 0;
  double lhs = 0;  // centered difference
  double rhs = 0;  // closed form
  double rel_error() const;
};

/// Default step 1e-3 * lambda, clamped to the solver grid spacing near r(lambda).
double default_fd_step(const SolitonProfile& profile, double lambda);

/// d area/d lambda vs integral of H/|grad f|.
FiniteDifferenceCheck area_ode_check(const SolitonProfile& profile, double lambda, double h);

/// Below this level f' -> 0 makes both sides of the coarea check blow up.
inline constexpr double kCoareaFloor = 0.1;

/// d/dlambda of the coarea flux vs 8 pi (1 - w'^2)/f'^3; refuses lambda < kCoareaFloor.
FiniteDifferenceCheck coarea_second_derivative_check(const SolitonProfile& profile,
                                                     double lambda, double h);

/// d volume/d lambda vs coarea flux.
FiniteDifferenceCheck volume_coarea_check(const SolitonProfile& profile, double lambda, double h);

struct MonotonicityScan {
  double detII_worst_increase = 0;
  int detII_violations = 0;
  double km_worst_decrease = 0;
  int km_violations = 0;
  double R_worst_increase = 0;
  int R_violations = 0;
  double km_min = 0, km_max = 0;
  double detII_first = 0, detII_last = 0;
  /// First grid level where km_integral exceeds half of 4 pi (nullopt if never).
  std::optional<double> km_half_level;
};

MonotonicityScan detII_monotonicity_scan(const SolitonProfile& profile,
                                         const std::vector<double>& lambda_grid);

struct DoublingRow {
  double lambda = 0;
  double area_ratio = 0;    // A(2 lambda)/A(lambda)
  double volume_ratio = 0;  // V(2 lambda)/V(lambda)
};

struct GrowthTables {
  std::vector<LevelSetRecord> rows;
  std::vector<DoublingRow> doubling;  // for grid levels with 2 lambda in range
  double min_R_times_lambda = 0;      // over rows with lambda >= 50
};

GrowthTables growth_tables(const SolitonProfile& profile, const std::vector<double>& lambda_grid);

struct DiameterDrop {
  double a = 0, b = 0;
  double D_a = 0, D_b = 0;
  double beta_b = 0;  // r(b) - r(b - 1): distance from S_b to S_{b-1}
  double lower_bound = 0;
  double slack() const { return D_b - lower_bound; }
};

/// Requires a >= b > 1.
DiameterDrop diameter_drop_bound(const SolitonProfile& profile, double a, double b);

std::vector<double> level_grid(double min, double max, int count, bool log_spacing);

/// Header: lambda,r,area,diameter,grad_norm,detII_int,km_int,volume,R,R_times_lambda and,
/// when with_gauss_bonnet, a trailing gauss_bonnet column.
void write_levels_csv(std::ostream& out, const std::vector<LevelSetRecord>& rows,
                      bool with_gauss_bonnet = false);

}  // namespace soliton
