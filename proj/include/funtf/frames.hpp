#pragma once

#include <cstdint>
#include <vector>

#include "funtf/linalg.hpp"

namespace funtf {

// Default tolerance for certifying tightness / orthonormality.
inline constexpr double kDefaultCertTol = 1e-8;

// A finite system of unit vectors in R^dim. Construction renormalizes rows
// whose norm is off by at most 1e-6 and rejects anything worse; rows that are
// already unit to machine precision are stored bit-unchanged.
class UnitVectorSystem {
 public:
  UnitVectorSystem(std::size_t dim, std::vector<Vec> rows);

  // count i.i.d. directions: standard normal coordinates, normalized.
  // Identical (dim, count, seed) always produces identical bits.
  static UnitVectorSystem random(std::size_t dim, std::size_t count, std::uint64_t seed);

  std::size_t dim() const { return dim_; }
  std::size_t count() const { return rows_.size(); }
  const Vec& vector(std::size_t i) const { return rows_[i]; }
  const std::vector<Vec>& vectors() const { return rows_; }

 private:
  std::size_t dim_;
  std::vector<Vec> rows_;
};

struct FrameCertificate {
  double potential;
  double lower_bound;
  // Hilbert-Schmidt distance of the frame operator from (count/dim) * I.
  double frame_operator_deviation;
  // trace(S) / dim; equals count/dim up to rounding.
  double lambda_estimate;
  bool is_tight;
  bool is_orthonormal_set;
};

// S = sum of u_i u_i^T (dim x dim).
SymMatrix frame_operator(const UnitVectorSystem& sys);

// G_ij = <u_i, u_j> (count x count).
SymMatrix gram_matrix(const UnitVectorSystem& sys);

// Sum of squared pairwise inner products, diagonal included. Equals both
// |S|^2 and |G|^2 in the Hilbert-Schmidt norm.
double frame_potential(const UnitVectorSystem& sys);

// Greatest lower bound of the potential over systems of `count` unit vectors
// in R^dim: count when count <= dim (orthonormal sets), count^2/dim otherwise
// (tight frames).
double potential_lower_bound(std::size_t dim, std::size_t count);

// is_tight: S within tol of (count/dim) * I. is_orthonormal_set: count <= dim
// and all off-diagonal Gram entries within tol of zero.
FrameCertificate certify(const UnitVectorSystem& sys, double tol = kDefaultCertTol);

}  // namespace funtf
