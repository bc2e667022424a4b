#include "funtf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "funtf/errors.hpp"

namespace funtf {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw ArgumentError(msg);
}

void require_same_dim(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    std::ostringstream os;
    os << "vector dimension mismatch: " << a.size() << " vs " << b.size();
    throw ArgumentError(os.str());
  }
}

}  // namespace

double dot(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_sq(const Vec& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

Vec normalized(const Vec& a) {
  const double n = norm(a);
  require(n > 0.0, "cannot normalize the zero vector");
  Vec out(a);
  for (double& v : out) v /= n;
  return out;
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  require(rows >= 1 && cols >= 1, "matrix dimensions must be at least 1");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix shape mismatch in +");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix shape mismatch in -");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
  return out;
}

Vec matvec(const Matrix& a, const Vec& x) {
  require(a.cols() == x.size(), "matrix-vector dimension mismatch");
  Vec y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

SymMatrix::SymMatrix(std::size_t n) : mat_(n, n) {}

SymMatrix SymMatrix::identity(std::size_t n) { return scaled_identity(n, 1.0); }

SymMatrix SymMatrix::scaled_identity(std::size_t n, double c) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.mat_(i, i) = c;
  return m;
}

SymMatrix SymMatrix::symmetrized(const Matrix& a, double* max_asymmetry_out) {
  require(a.rows() == a.cols(), "symmetrized() needs a square matrix");
  const std::size_t n = a.rows();
  SymMatrix m(n);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      worst = std::max(worst, std::fabs(a(i, j) - a(j, i)));
      m.set(i, j, 0.5 * (a(i, j) + a(j, i)));
    }
  }
  if (worst > 1e-9) {
    std::fprintf(stderr, "warning: symmetrizing a matrix with asymmetry %.3e\n", worst);
  }
  if (max_asymmetry_out != nullptr) *max_asymmetry_out = worst;
  return m;
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  mat_(i, j) = v;
  mat_(j, i) = v;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += mat_(i, i);
  return t;
}

Matrix outer(const Vec& u, const Vec& v) {
  require_same_dim(u, v);
  Matrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * v[j];
  return m;
}

double hs_inner(const Matrix& a, const Matrix& b) {
  require(a.rows() == a.cols() && b.rows() == b.cols(), "hs_inner needs square matrices");
  require(a.rows() == b.rows(), "hs_inner needs matrices of equal size");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

double hs_inner(const SymMatrix& a, const SymMatrix& b) { return hs_inner(a.mat(), b.mat()); }

double hs_norm(const Matrix& a) { return std::sqrt(hs_inner(a, a)); }

double hs_norm(const SymMatrix& a) { return hs_norm(a.mat()); }

namespace {

double offdiag_norm(const std::vector<double>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t p = 0; p + 1 < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) s += a[p * n + q] * a[p * n + q];
  return std::sqrt(2.0 * s);
}

// Flip each eigenvector so its first coordinate of magnitude above 1e-12 is
// positive. Keeps repeated runs (and platforms) on the same representative.
void fix_sign(Vec& v) {
  for (double x : v) {
    if (std::fabs(x) > 1e-12) {
      if (x < 0.0)
        for (double& y : v) y = -y;
      return;
    }
  }
}

}  // namespace

EigenDecomposition eigh_symmetric(const SymMatrix& m) {
  const std::size_t n = m.dim();
  EigenDecomposition out;
  if (n == 1) {
    out.eigenvalues = {m(0, 0)};
    out.eigenvectors = {Vec{1.0}};
    return out;
  }

  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j);
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double tol = 1e-12 * hs_norm(m);
  const int max_sweeps = 100;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (offdiag_norm(a, n) <= tol) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        // Smaller-magnitude root of t^2 + 2 t theta - 1 = 0; the guard keeps
        // theta^2 from overflowing when apq is denormal-tiny.
        double t;
        if (std::fabs(theta) > 1e150) {
          t = 1.0 / (2.0 * theta);
        } else {
          t = ((theta >= 0.0) ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a[p * n + p] -= t * apq;
        a[q * n + q] += t * apq;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a[r * n + p];
          const double arq = a[r * n + q];
          a[r * n + p] = arp - s * (arq + tau * arp);
          a[p * n + r] = a[r * n + p];
          a[r * n + q] = arq + s * (arp - tau * arq);
          a[q * n + r] = a[r * n + q];
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v[r * n + p];
          const double vrq = v[r * n + q];
          v[r * n + p] = vrp - s * (vrq + tau * vrp);
          v[r * n + q] = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }
  const double residual = offdiag_norm(a, n);
  if (residual > tol) {
    std::ostringstream os;
    os << "jacobi eigensolver did not converge in " << max_sweeps
       << " sweeps: off-diagonal norm " << residual << " > tolerance " << tol;
    throw NumericError(os.str());
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i * n + i] < a[j * n + j]; });

  out.eigenvalues.resize(n);
  out.eigenvectors.assign(n, Vec(n, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t col = order[k];
    out.eigenvalues[k] = a[col * n + col];
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors[k][r] = v[r * n + col];
    fix_sign(out.eigenvectors[k]);
  }
  return out;
}

SymMatrix restrict_quadratic_form(const SymMatrix& m, const std::vector<Vec>& basis) {
  const std::size_t n = m.dim();
  const std::size_t k = basis.size();
  require(k >= 1, "restriction basis must contain at least one vector");
  require(k <= n, "restriction basis has more vectors than the ambient dimension");
  for (const Vec& b : basis)
    require(b.size() == n, "restriction basis vector has the wrong dimension");
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      const double expected = (i == j) ? 1.0 : 0.0;
      if (std::fabs(dot(basis[i], basis[j]) - expected) > 1e-10) {
        std::ostringstream os;
        os << "restriction basis is not orthonormal: |<b_" << i << ", b_" << j
           << "> - " << expected << "| > 1e-10";
        throw ArgumentError(os.str());
      }
    }
  }

  std::vector<Vec> mb(k);
  for (std::size_t j = 0; j < k; ++j) mb[j] = matvec(m.mat(), basis[j]);
  SymMatrix out(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) out.set(i, j, dot(basis[i], mb[j]));
  return out;
}

std::vector<Vec> orthonormal_complement(const Vec& x) {
  const std::size_t n = x.size();
  require(n >= 1, "orthonormal_complement needs a nonempty vector");
  const Vec xhat = normalized(x);
  std::vector<Vec> out;
  if (n == 1) return out;

  // Householder vector w = xhat + sign(xhat_0) e_0. The reflection
  // I - 2 w w^T / |w|^2 maps e_0 onto -sign(xhat_0) xhat, so its remaining
  // columns are an orthonormal basis of the hyperplane orthogonal to x.
  Vec w(xhat);
  const double sgn = (xhat[0] >= 0.0) ? 1.0 : -1.0;
  w[0] += sgn;
  const double beta = 2.0 / norm_sq(w);

  out.assign(n - 1, Vec(n, 0.0));
  for (std::size_t j = 1; j < n; ++j) {
    Vec& col = out[j - 1];
    for (std::size_t i = 0; i < n; ++i) col[i] = -beta * w[i] * w[j];
    col[j] += 1.0;
  }
  return out;
}

}  // namespace funtf
