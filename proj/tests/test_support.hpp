// Shared randomized-input builders for the unit tests. Everything is seeded
// and deterministic within a single build of the test binary.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "funtf/frames.hpp"
#include "funtf/linalg.hpp"

namespace testsup {

using funtf::Matrix;
using funtf::SymMatrix;
using funtf::UnitVectorSystem;
using funtf::Vec;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * std::generate_canonical<double, 53>(g);
}

inline Vec random_vec(std::mt19937_64& g, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Vec v(n);
  for (auto& x : v) x = uniform(g, lo, hi);
  return v;
}

inline Vec random_unit(std::mt19937_64& g, std::size_t n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec v(n);
  double ns = 0.0;
  do {
    for (auto& x : v) x = nd(g);
    ns = funtf::norm_sq(v);
  } while (ns < 1e-12);
  return funtf::normalized(v);
}

inline UnitVectorSystem random_system(std::mt19937_64& g, std::size_t dim, std::size_t count) {
  std::vector<Vec> rows;
  rows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) rows.push_back(random_unit(g, dim));
  return UnitVectorSystem(dim, std::move(rows));
}

inline SymMatrix random_symmetric(std::mt19937_64& g, std::size_t n, double scale = 1.0) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m.set(i, j, uniform(g, -scale, scale));
  return m;
}

// Gram-Schmidt on random gaussian vectors; redraws on near-dependence.
inline std::vector<Vec> random_orthonormal(std::mt19937_64& g, std::size_t n) {
  std::vector<Vec> q;
  while (q.size() < n) {
    Vec v = random_unit(g, n);
    for (const Vec& u : q) {
      const double c = funtf::dot(u, v);
      for (std::size_t k = 0; k < n; ++k) v[k] -= c * u[k];
    }
    if (funtf::norm_sq(v) < 1e-8) continue;
    q.push_back(funtf::normalized(v));
  }
  return q;
}

inline SymMatrix from_eigensystem(const std::vector<Vec>& q, const std::vector<double>& lam) {
  const std::size_t n = q.size();
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += lam[k] * q[k][i] * q[k][j];
      m.set(i, j, s);
    }
  return m;
}

inline SymMatrix random_pd(std::mt19937_64& g, std::size_t n, double lmin, double lmax) {
  std::vector<double> lam(n);
  for (auto& l : lam) l = uniform(g, lmin, lmax);
  return from_eigensystem(random_orthonormal(g, n), lam);
}

// PSD with exactly `rank` positive eigenvalues scaled so the trace equals
// target_trace; the rest are exact zeros.
inline SymMatrix random_psd_integer_trace(std::mt19937_64& g, std::size_t n, std::size_t rank,
                                          double target_trace) {
  std::vector<double> lam(n, 0.0);
  double s = 0.0;
  for (std::size_t k = 0; k < rank; ++k) {
    lam[k] = uniform(g, 0.5, 1.5);
    s += lam[k];
  }
  for (std::size_t k = 0; k < rank; ++k) lam[k] *= target_trace / s;
  return from_eigensystem(random_orthonormal(g, n), lam);
}

inline double quad(const SymMatrix& m, const Vec& x) {
  return funtf::dot(x, funtf::matvec(m.mat(), x));
}

}  // namespace testsup
