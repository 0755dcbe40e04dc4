#pragma once

// Level surfaces {slope * s + 2 ln cosh(a sigma) = level} of R x cigar are graphs
// s = (level - 2 ln cosh(a sigma)) / slope over the fiber. They are not compact, so the
// diameter is taken on the cap {s >= 0}, i.e. sigma in [0, sigma_cap], with induced metric
//   (1 + pi'(sigma)^2 / slope^2) dsigma^2 + w(sigma)^2 dtheta^2,   pi = 2 ln cosh(a sigma).

#include "soliton/model_spaces.hpp"

namespace soliton {

struct CapMeshOptions {
  int n_sigma = 48;  // rings excluding the pole
  int n_theta = 32;
  int stencil = 3;   // neighbor offsets up to this many cells in each direction
};

/// sigma where the level surface crosses s = 0.
double cap_sigma(const CigarLine& model, double level);

/// Length of a meridian of the cap (a lower bound for its inner diameter), by adaptive
/// Simpson quadrature; used as an independent oracle for the mesh.
double cap_meridian_length(const CigarLine& model, double level);

/// Inner diameter of the cap from Dijkstra on a graded (sigma, theta) mesh.
double cap_mesh_diameter(const CigarLine& model, double level, const CapMeshOptions& opt = {});

struct CapDiameter {
  double coarse = 0;
  double fine = 0;  // at doubled resolution in both directions
  double rel_change() const { return std::abs(fine - coarse) / fine; }
};

CapDiameter cap_diameter(const CigarLine& model, double level, const CapMeshOptions& opt = {});

}  // namespace soliton
