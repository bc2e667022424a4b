#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "funtf/frames.hpp"
#include "funtf/linalg.hpp"

namespace funtf {

struct MinimizerConfig {
  int max_iters = 20000;
  // Stop descending and test for criticality once the full tangential
  // gradient norm falls below this.
  double grad_tol = 1e-9;
  // Initial line-search step; a non-positive value means "pick automatically
  // from the current top Rayleigh quotient" (1 / (4 lambda_max estimate)).
  double step_init = 0.0;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  // Starting angle scale for an escape move at a non-minimizing critical
  // point; halved until the potential strictly decreases.
  double saddle_delta = 0.1;
  // Rayleigh quotients closer than this are treated as one eigenvalue group.
  double eig_group_tol = 1e-6;
  // Certification tolerance used for the convergence test: frame operator
  // deviation (count >= dim) or max off-diagonal Gram entry (count < dim).
  double conv_tol = kDefaultCertTol;
  std::uint64_t seed = 0;
  bool record_trajectory = false;
};

// Grouping of the vectors of a critical system by the eigenvalue of the
// frame operator they belong to, largest eigenvalue first.
struct EigenPartition {
  struct Group {
    double eigenvalue;
    std::vector<std::size_t> members;  // ascending indices into the system
  };
  std::vector<Group> groups;
  double residual;  // max over i of |S u_i - <S u_i, u_i> u_i|
};

// A second-order descent direction out of a non-minimizing critical point:
// rotate each top-group vector u_i towards `direction` by angle
// coeffs[i] * delta. The potential then drops by about
// predicted_curvature * delta^2.
struct SaddleEscape {
  std::vector<std::size_t> indices;  // members of the top eigenvalue group
  std::vector<double> coeffs;        // dependence coefficients, sum of squares 1
  Vec direction;                     // a unit vector from the smallest-eigenvalue group
  double predicted_curvature;        // 2 (lambda - mu) * sum of squared coeffs
};

struct TrajectoryPoint {
  int iteration;
  double potential;
  double grad_norm;
};

struct MinimizeReport {
  UnitVectorSystem final_system;
  double final_potential;
  int iterations;
  int saddle_escapes;
  bool converged;
  std::vector<TrajectoryPoint> trajectory;  // filled when requested
};

// Tangential gradient of the frame potential at each vector:
// grad_i = 4 (S u_i - <S u_i, u_i> u_i), orthogonal to u_i.
std::vector<Vec> fp_gradient(const UnitVectorSystem& sys);

// Move every vector along a great circle: u_i -> cos(delta_i) u_i +
// sin(delta_i) v_i. Each direction must be unit and orthogonal to its vector
// within 1e-8, or zero to leave that vector in place (bit-unchanged).
UnitVectorSystem geodesic_step(const UnitVectorSystem& sys, const std::vector<Vec>& directions,
                               const std::vector<double>& deltas);

// Classifies a critical system (every residual |S u_i - rho_i u_i| at most
// crit_tol) by clustering Rayleigh quotients; returns nullopt when the system
// is not critical at that tolerance.
std::optional<EigenPartition> eigen_partition(const UnitVectorSystem& sys, double crit_tol,
                                              double group_tol = 1e-6);

// Builds the escape move from the top group's linear dependence; nullopt when
// the partition has a single group (nothing below to rotate towards). Throws
// NumericError if the top group's Gram matrix is unexpectedly non-singular.
std::optional<SaddleEscape> saddle_escape_direction(const UnitVectorSystem& sys,
                                                    const EigenPartition& part);

// Armijo-backtracked geodesic descent of the frame potential, with the escape
// move applied whenever the gradient vanishes away from the global minimum.
// Monotone in the potential; converged means certified at cfg.conv_tol.
MinimizeReport minimize(const UnitVectorSystem& start, const MinimizerConfig& cfg = {});

// Independent runs from seeds base_seed, base_seed + 1, ... in parallel.
// Results are ordered by seed and do not depend on the thread count.
std::vector<MinimizeReport> minimize_random_starts(std::size_t dim, std::size_t count,
                                                   int starts, std::uint64_t base_seed,
                                                   const MinimizerConfig& cfg = {});

}  // namespace funtf
