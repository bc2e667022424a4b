#include "funtf/frames.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "funtf/errors.hpp"
#include "kernels.hpp"

namespace funtf {

namespace {

std::vector<double> flatten(const UnitVectorSystem& sys) {
  std::vector<double> rows(sys.count() * sys.dim());
  for (std::size_t i = 0; i < sys.count(); ++i)
    for (std::size_t j = 0; j < sys.dim(); ++j) rows[i * sys.dim() + j] = sys.vector(i)[j];
  return rows;
}

// Uniform in [0, 1) from the generator's top 53 bits.
double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

// Box-Muller, spelled out so the stream does not depend on the standard
// library's distribution implementation.
double std_normal(std::mt19937_64& gen) {
  const double u1 = 1.0 - to_unit(gen());  // (0, 1], keeps the log finite
  const double u2 = to_unit(gen());
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

}  // namespace

UnitVectorSystem::UnitVectorSystem(std::size_t dim, std::vector<Vec> rows)
    : dim_(dim), rows_(std::move(rows)) {
  if (dim_ < 1) throw ArgumentError("unit vector system needs dimension at least 1");
  if (rows_.empty()) throw ArgumentError("unit vector system needs at least one vector");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    Vec& r = rows_[i];
    if (r.size() != dim_) {
      std::ostringstream os;
      os << "vector " << i << " has dimension " << r.size() << ", expected " << dim_;
      throw ArgumentError(os.str());
    }
    for (double v : r) {
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "vector " << i << " has a non-finite entry";
        throw ArgumentError(os.str());
      }
    }
    const double ns = norm_sq(r);
    const double n = std::sqrt(ns);
    if (std::fabs(n - 1.0) > 1e-6) {
      std::ostringstream os;
      os << "vector " << i << " has norm " << n << ", more than 1e-6 away from 1";
      throw ArgumentError(os.str());
    }
    // Renormalize only when actually off; rows that are unit to machine
    // precision pass through bit-unchanged.
    if (std::fabs(ns - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) {
      for (double& v : r) v /= n;
    }
  }
}

UnitVectorSystem UnitVectorSystem::random(std::size_t dim, std::size_t count,
                                          std::uint64_t seed) {
  if (dim < 1 || count < 1)
    throw ArgumentError("random system needs dimension and count at least 1");
  std::mt19937_64 gen(seed);
  std::vector<Vec> rows(count, Vec(dim, 0.0));
  for (Vec& r : rows) {
    double ns = 0.0;
    do {
      for (double& v : r) v = std_normal(gen);
      ns = norm_sq(r);
    } while (ns < 1e-12);  // a fresh draw on the (absurdly unlikely) near-zero sample
    const double n = std::sqrt(ns);
    for (double& v : r) v /= n;
  }
  return UnitVectorSystem(dim, std::move(rows));
}

SymMatrix frame_operator(const UnitVectorSystem& sys) {
  const std::size_t n = sys.dim();
  const std::vector<double> rows = flatten(sys);
  std::vector<double> s(n * n);
  detail::frame_operator_rows(rows.data(), sys.count(), n, s.data());
  SymMatrix out(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j; k < n; ++k) out.set(j, k, s[j * n + k]);
  return out;
}

SymMatrix gram_matrix(const UnitVectorSystem& sys) {
  const std::size_t cnt = sys.count();
  const std::vector<double> rows = flatten(sys);
  std::vector<double> g(cnt * cnt);
  detail::gram_rows(rows.data(), cnt, sys.dim(), g.data());
  SymMatrix out(cnt);
  for (std::size_t i = 0; i < cnt; ++i)
    for (std::size_t j = i; j < cnt; ++j) out.set(i, j, g[i * cnt + j]);
  return out;
}

double frame_potential(const UnitVectorSystem& sys) {
  const std::vector<double> rows = flatten(sys);
  return detail::potential_rows(rows.data(), sys.count(), sys.dim());
}

double potential_lower_bound(std::size_t dim, std::size_t count) {
  if (dim < 1 || count < 1)
    throw ArgumentError("potential_lower_bound needs dimension and count at least 1");
  const double n = static_cast<double>(dim);
  const double cnt = static_cast<double>(count);
  return (count <= dim) ? cnt : cnt * cnt / n;
}

FrameCertificate certify(const UnitVectorSystem& sys, double tol) {
  if (!(tol > 0.0)) throw ArgumentError("certification tolerance must be positive");
  const std::size_t n = sys.dim();
  const std::size_t cnt = sys.count();
  const std::vector<double> rows = flatten(sys);

  std::vector<double> s(n * n);
  detail::frame_operator_rows(rows.data(), cnt, n, s.data());
  double trace = 0.0;
  for (std::size_t j = 0; j < n; ++j) trace += s[j * n + j];

  const double lambda_tight = static_cast<double>(cnt) / static_cast<double>(n);
  const detail::OffdiagStats off = detail::offdiag_rows(rows.data(), cnt, n);

  FrameCertificate cert;
  cert.potential = detail::potential_rows(rows.data(), cnt, n);
  cert.lower_bound = potential_lower_bound(n, cnt);
  cert.frame_operator_deviation = std::sqrt(detail::tight_dev_sq(s.data(), n, lambda_tight));
  cert.lambda_estimate = trace / static_cast<double>(n);
  cert.is_tight = cert.frame_operator_deviation <= tol;
  cert.is_orthonormal_set = (cnt <= n) && off.max_abs <= tol;
  return cert;
}

}  // namespace funtf
