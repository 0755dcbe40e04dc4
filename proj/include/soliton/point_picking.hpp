#pragma once

#include "soliton/level_mesh.hpp"
#include "soliton/model_spaces.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace soliton {

struct PickSchedule {
  std::function<double(int)> eps;
  std::function<double(int)> A;
};

/// eps_j = j^(-1/2), A_j = j^2, so A_j eps_j^2 = j.
PickSchedule default_pick_schedule();

/// Rejects schedules where eps_j does not decrease, A_j does not increase or A_j eps_j^2 does
/// not increase on j = 1..max_j.
void validate_schedule(const PickSchedule& schedule, int max_j);

struct PickedPoint {
  int j = 0;
  double eps = 0, A = 0;
  double sigma_j = 0;  // largest diameter with sup R D^2 <= A_j below it
  double level = 0;    // f(q_j)
  double s = 0;        // q_j = (s, sigma = 0)
  double r = 0;        // eps_j sigma_j
  double delta = 0;    // (1 - 3 eps_j)^-2 - 1, infinite when 3 eps_j >= 1
  double R = 0;        // R(q_j)
  double D = 0;        // mesh diameter of the level through q_j
  double distance = 0; // d(q_j, O) with O = (0, 0)
  double lambda = 0;   // distance / r
  double r2R() const { return r * r * R; }
  double RD2() const { return R * D * D; }
};

struct PickSequence {
  std::vector<PickedPoint> points;
  int candidates_examined = 0;
  double precondition_growth = 0;  // second-half / first-half max of R D^2
};

struct PickRefusal {
  std::string reason;
  double RD2_bound = 0;  // measured sup of R D^2 over the probe window
  double first_half_max = 0;
  double second_half_max = 0;
};

using PickOutcome = std::variant<PickSequence, PickRefusal>;

struct PickOptions {
  int max_candidate = 400;
  CapMeshOptions mesh{};
};

/// Point picking on R x cigar. Bryant and other models with bounded R D^2 (second-half max of
/// the probe window <= 1.1 x first-half max) get a PickRefusal carrying the measured bound.
PickOutcome pick_points(const ModelSpace& model, const PickSchedule& schedule, int j_max,
                        const PickOptions& options = {});

struct PickAudit {
  bool a = true;  // sup_{B(q_j, r_j)} R <= (1 + delta_j) R(q_j)
  bool b = true;  // r_j^2 R(q_j) strictly increasing
  bool c = true;  // lambda_j strictly increasing
  bool d = true;  // balls pairwise disjoint
  bool blowup = true;  // R(q_j) D^2(q_j) strictly increasing
  std::vector<double> measured_delta;
  double worst_mesh_change = 0;  // Richardson change of D at the picked levels
  std::vector<std::string> failures;
  bool ok() const { return a && b && c && d && blowup; }
};

/// Independent re-check: brute-force scan of R over each ball, diameters re-meshed at double
/// resolution, all pairwise distances.
PickAudit audit_pick(const CigarLine& model, const PickSequence& seq,
                     const CapMeshOptions& mesh = {});

}  // namespace soliton
