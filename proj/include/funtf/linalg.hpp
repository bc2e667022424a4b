#pragma once

#include <cstddef>
#include <vector>

namespace funtf {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm_sq(const Vec& a);
double norm(const Vec& a);
// a / |a|; rejects the zero vector.
Vec normalized(const Vec& a);

// Dense row-major matrix. Deliberately minimal: storage, element access and
// the few arithmetic helpers the library needs.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols);  // zero-filled
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const double& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Vec matvec(const Matrix& a, const Vec& x);

// Symmetric matrix with symmetry guaranteed by construction: every write
// lands on both (i, j) and (j, i), so the two entries are always bit-equal.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t n);  // zero-filled
  static SymMatrix identity(std::size_t n);
  static SymMatrix scaled_identity(std::size_t n, double c);

  // Accepts a square matrix that should be symmetric up to noise, stores the
  // average (a_ij + a_ji) / 2 and warns on stderr when the asymmetry exceeds
  // 1e-9. max_asymmetry_out, when given, receives the worst |a_ij - a_ji|.
  static SymMatrix symmetrized(const Matrix& a, double* max_asymmetry_out = nullptr);

  std::size_t dim() const { return mat_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }
  void set(std::size_t i, std::size_t j, double v);

  double trace() const;
  const Matrix& mat() const { return mat_; }

 private:
  Matrix mat_;
};

// Eigenvalues in non-decreasing order, paired unit eigenvectors. The sign of
// each eigenvector is fixed by making its first coordinate of magnitude
// above 1e-12 positive, so equal inputs give bit-equal outputs.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  std::vector<Vec> eigenvectors;
};

// Rank-one matrix u v^T.
Matrix outer(const Vec& u, const Vec& v);

// Entrywise (Hilbert-Schmidt) inner product and norm of square matrices.
double hs_inner(const Matrix& a, const Matrix& b);
double hs_inner(const SymMatrix& a, const SymMatrix& b);
double hs_norm(const Matrix& a);
double hs_norm(const SymMatrix& a);

// Cyclic Jacobi diagonalization. Sweeps rotate every off-diagonal pair in a
// fixed order until the off-diagonal norm drops below 1e-12 * |M|; throws
// NumericError if 100 sweeps are not enough.
EigenDecomposition eigh_symmetric(const SymMatrix& m);

// B^T M B for an orthonormal set of columns B = [b_1 ... b_k]: the matrix of
// the quadratic form restricted to span(b_1, ..., b_k) in that basis.
SymMatrix restrict_quadratic_form(const SymMatrix& m, const std::vector<Vec>& basis);

// Orthonormal basis of the hyperplane orthogonal to x (n - 1 vectors),
// built from a Householder reflection. Deterministic in x.
std::vector<Vec> orthonormal_complement(const Vec& x);

}  // namespace funtf
