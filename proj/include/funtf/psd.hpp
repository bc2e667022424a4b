#pragma once

#include <utility>
#include <vector>

#include "funtf/linalg.hpp"

namespace funtf {

// Non-degenerate centred ellipsoid {x : x^T M x = 1} with M positive
// definite (smallest eigenvalue above 1e-12).
class Ellipsoid {
 public:
  explicit Ellipsoid(SymMatrix form);
  const SymMatrix& form() const { return form_; }
  std::size_t dim() const { return form_.dim(); }

 private:
  SymMatrix form_;
};

// A sum-of-rank-ones witness: M is reconstructed as the sum of v v^T over
// unit vectors v, with the Hilbert-Schmidt reconstruction error recorded.
struct Decomposition {
  std::vector<Vec> vectors;
  double reconstruction_residual;
};

// Common length sqrt(dim / trace(M)) of an orthogonal system of equal-norm
// points on the ellipsoid of M.
double rho_target(const SymMatrix& form);

// An orthogonal system of dim points on the ellipsoid, all of norm
// rho_target: the first point comes from a bisection between the shortest
// and longest semi-axis directions, the rest by recursing on the section of
// the ellipsoid by the first point's orthogonal hyperplane.
std::vector<Vec> equal_norm_orthogonal(const Ellipsoid& e);

// Splits off the top unit eigenvector: returns (w, M - w w^T). Requires the
// top eigenvalue to be at least 1 so the remainder stays positive
// semidefinite.
std::pair<Vec, SymMatrix> deflate_once(const SymMatrix& m);

// Writes a positive semidefinite M with trace(M) = count as a sum of `count`
// rank-one tensors of unit vectors: repeated deflation while count exceeds
// the effective dimension, then the equal-norm orthogonal construction on
// the remaining ellipsoid. Singular M is handled by restricting to its
// range; count must be at least rank(M).
Decomposition decompose_unit_norm(const SymMatrix& m, int count);

}  // namespace funtf
