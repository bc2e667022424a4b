#include "funtf/psd.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "funtf/errors.hpp"

namespace funtf {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

double quad_form(const SymMatrix& m, const Vec& x) { return dot(x, matvec(m.mat(), x)); }

// The equal-norm orthogonal construction on the ellipsoid of a positive
// definite form. Callers guarantee positive definiteness.
std::vector<Vec> equal_norm_impl(const SymMatrix& m) {
  const std::size_t n = m.dim();
  if (n == 1) return {Vec{1.0 / std::sqrt(m(0, 0))}};

  const EigenDecomposition eig = eigh_symmetric(m);
  const double lo = eig.eigenvalues.front();
  const double hi = eig.eigenvalues.back();
  const double tr = m.trace();
  const double target = static_cast<double>(n) / tr;  // |x|^2 to aim for

  if (hi - lo <= 1e-13 * hi) {
    // Sphere: every point already has the target norm, take the eigenbasis.
    const double scale = 1.0 / std::sqrt(tr / static_cast<double>(n));
    std::vector<Vec> out;
    out.reserve(n);
    for (const Vec& q : eig.eigenvectors) {
      Vec z(q);
      for (double& v : z) v *= scale;
      out.push_back(std::move(z));
    }
    return out;
  }

  // Walk the arc from the shortest point of the ellipsoid (top eigenvector
  // direction) to the longest (bottom eigenvector direction); the squared
  // norm of the radial point moves from 1/hi below the target to 1/lo above
  // it, so a sign change is bracketed. No monotonicity is assumed.
  const Vec& u_hi = eig.eigenvectors.back();
  const Vec& u_lo = eig.eigenvectors.front();
  Vec u(n);
  const auto objective = [&](double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    for (std::size_t j = 0; j < n; ++j) u[j] = c * u_hi[j] + s * u_lo[j];
    return norm_sq(u) / quad_form(m, u) - target;
  };

  double a = 0.0;
  double b = kHalfPi;
  const double fa = objective(a);
  const double fb = objective(b);
  if (fa > 1e-12 || fb < -1e-12) {
    std::ostringstream os;
    os << "ellipsoid bisection failed to bracket a sign change: f(0) = " << fa
       << ", f(pi/2) = " << fb;
    throw NumericError(os.str());
  }
  double mid = a;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (a + b);
    const double fm = objective(mid);
    if (std::fabs(fm) <= 1e-12 || (b - a) <= 1e-15) break;
    if (fm < 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }

  const double c = std::cos(mid);
  const double s = std::sin(mid);
  for (std::size_t j = 0; j < n; ++j) u[j] = c * u_hi[j] + s * u_lo[j];
  const double q = quad_form(m, u);
  Vec x0(n);
  for (std::size_t j = 0; j < n; ++j) x0[j] = u[j] / std::sqrt(q);

  // Recurse on the section by the hyperplane orthogonal to x0. Its form
  // matrix has trace tr - 1/|x0|^2, which is exactly what makes the
  // sub-problem's common norm match |x0| again.
  const std::vector<Vec> basis = orthonormal_complement(x0);
  const SymMatrix sub = restrict_quadratic_form(m, basis);
  const std::vector<Vec> rec = equal_norm_impl(sub);

  std::vector<Vec> out;
  out.reserve(n);
  out.push_back(std::move(x0));
  for (const Vec& w : rec) {
    Vec x(n, 0.0);
    for (std::size_t a2 = 0; a2 < basis.size(); ++a2)
      for (std::size_t j = 0; j < n; ++j) x[j] += w[a2] * basis[a2][j];
    out.push_back(std::move(x));
  }
  return out;
}

// V sqrt(diag) V^T z for a decomposed positive definite form.
Vec apply_sqrt(const EigenDecomposition& eig, const Vec& z) {
  const std::size_t n = z.size();
  Vec out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = std::max(eig.eigenvalues[k], 0.0);
    const double w = std::sqrt(lam) * dot(eig.eigenvectors[k], z);
    for (std::size_t j = 0; j < n; ++j) out[j] += w * eig.eigenvectors[k][j];
  }
  return out;
}

}  // namespace

Ellipsoid::Ellipsoid(SymMatrix form) : form_(std::move(form)) {
  const EigenDecomposition eig = eigh_symmetric(form_);
  if (!(eig.eigenvalues.front() > 1e-12)) {
    std::ostringstream os;
    os << "ellipsoid form must be positive definite: smallest eigenvalue "
       << eig.eigenvalues.front();
    throw ArgumentError(os.str());
  }
}

double rho_target(const SymMatrix& form) {
  const double tr = form.trace();
  if (!(tr > 0.0)) {
    std::ostringstream os;
    os << "rho_target needs a positive trace, got " << tr;
    throw ArgumentError(os.str());
  }
  return std::sqrt(static_cast<double>(form.dim()) / tr);
}

std::vector<Vec> equal_norm_orthogonal(const Ellipsoid& e) { return equal_norm_impl(e.form()); }

std::pair<Vec, SymMatrix> deflate_once(const SymMatrix& m) {
  const EigenDecomposition eig = eigh_symmetric(m);
  const double lmax = eig.eigenvalues.back();
  const double lmin = eig.eigenvalues.front();
  if (lmin < -1e-10 * std::max(1.0, std::fabs(lmax))) {
    std::ostringstream os;
    os << "deflation input is not positive semidefinite: smallest eigenvalue " << lmin;
    throw NumericError(os.str());
  }
  if (lmax < 1.0 - 1e-10) {
    std::ostringstream os;
    os << "deflation needs a top eigenvalue of at least 1, got " << lmax;
    throw ArgumentError(os.str());
  }
  const Vec& w = eig.eigenvectors.back();
  SymMatrix next(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j) next.set(i, j, m(i, j) - w[i] * w[j]);
  return {w, next};
}

Decomposition decompose_unit_norm(const SymMatrix& m, int count) {
  if (count < 1) throw ArgumentError("decomposition needs count at least 1");
  const std::size_t n = m.dim();

  const EigenDecomposition eig = eigh_symmetric(m);
  const double lmax = eig.eigenvalues.back();
  const double lmin = eig.eigenvalues.front();
  if (lmin < -1e-10 * std::max(1.0, std::fabs(lmax))) {
    std::ostringstream os;
    os << "matrix is not positive semidefinite: smallest eigenvalue " << lmin;
    throw ArgumentError(os.str());
  }
  const double tr = m.trace();
  if (std::fabs(tr - count) > 1e-8 * count) {
    std::ostringstream os;
    os << "trace " << tr << " must equal the requested count " << count << " within 1e-8*count";
    throw ArgumentError(os.str());
  }
  const double rank_thresh = 1e-10 * lmax;
  std::size_t rank = 0;
  for (double lam : eig.eigenvalues)
    if (lam > rank_thresh) ++rank;
  if (static_cast<std::size_t>(count) < rank) {
    std::ostringstream os;
    os << "count " << count << " is below the rank " << rank << " of the matrix";
    throw ArgumentError(os.str());
  }

  // Work inside the range when the matrix is singular; everything below is
  // expressed in the range basis and lifted back at the end.
  const bool restricted = rank < n;
  std::vector<Vec> range_basis;
  SymMatrix cur(1);
  if (restricted) {
    for (std::size_t k = 0; k < n; ++k)
      if (eig.eigenvalues[k] > rank_thresh) range_basis.push_back(eig.eigenvectors[k]);
    cur = restrict_quadratic_form(m, range_basis);
  } else {
    cur = m;
  }
  const std::size_t r = cur.dim();

  std::vector<Vec> pieces;
  pieces.reserve(count);
  int remaining = count;
  while (remaining > static_cast<int>(r)) {
    auto [w, next] = deflate_once(cur);
    pieces.push_back(std::move(w));
    cur = std::move(next);
    --remaining;
  }

  // Base case: as many vectors as dimensions. The equal-norm orthogonal
  // points z of the remaining form have z^T cur z = 1, so sqrt(cur) z is a
  // unit vector and the z sum up to |z|^2 * I.
  const EigenDecomposition base_eig = eigh_symmetric(cur);
  if (!(base_eig.eigenvalues.front() > 1e-12)) {
    std::ostringstream os;
    os << "deflated form degenerated: smallest eigenvalue " << base_eig.eigenvalues.front();
    throw NumericError(os.str());
  }
  for (const Vec& z : equal_norm_impl(cur)) pieces.push_back(apply_sqrt(base_eig, z));

  Decomposition dec;
  dec.vectors.reserve(count);
  for (const Vec& p : pieces) {
    Vec v;
    if (restricted) {
      v.assign(n, 0.0);
      for (std::size_t a = 0; a < range_basis.size(); ++a)
        for (std::size_t j = 0; j < n; ++j) v[j] += p[a] * range_basis[a][j];
    } else {
      v = p;
    }
    const double nv = norm(v);
    if (std::fabs(nv - 1.0) > 1e-9) {
      std::ostringstream os;
      os << "decomposition vector has norm " << nv << ", outside the 1e-9 unit-norm guard";
      throw NumericError(os.str());
    }
    if (std::fabs(nv * nv - 1.0) > 4.0 * std::numeric_limits<double>::epsilon())
      for (double& x : v) x /= nv;
    dec.vectors.push_back(std::move(v));
  }

  double res_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = m(i, j);
      for (const Vec& v : dec.vectors) acc -= v[i] * v[j];
      res_sq += acc * acc;
    }
  }
  dec.reconstruction_residual = std::sqrt(res_sq);
  const double bound = 1e-8 * (1.0 + hs_norm(m));
  if (dec.reconstruction_residual > bound) {
    std::ostringstream os;
    os << "reconstruction residual " << dec.reconstruction_residual << " exceeds the bound "
       << bound;
    throw NumericError(os.str());
  }
  return dec;
}

}  // namespace funtf
