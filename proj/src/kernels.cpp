#include "kernels.hpp"

#include <cmath>

namespace funtf::detail {

namespace {

inline double dot_n(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

// One row of S: entries (j, j..dim-1), each accumulated over all vectors.
inline void frame_operator_row(const double* rows, std::size_t count, std::size_t dim,
                               std::size_t j, double* s) {
  for (std::size_t k = j; k < dim; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += rows[i * dim + j] * rows[i * dim + k];
    s[j * dim + k] = acc;
    s[k * dim + j] = acc;
  }
}

inline void gram_row(const double* rows, std::size_t count, std::size_t dim, std::size_t i,
                     double* g) {
  for (std::size_t j = i; j < count; ++j) {
    const double d = dot_n(rows + i * dim, rows + j * dim, dim);
    g[i * count + j] = d;
    g[j * count + i] = d;
  }
}

inline double potential_row(const double* rows, std::size_t count, std::size_t dim,
                            std::size_t i) {
  double s = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double d = dot_n(rows + i * dim, rows + j * dim, dim);
    s += d * d;
  }
  return s;
}

inline void gradient_row(const double* rows, std::size_t count, std::size_t dim, const double* s,
                         std::size_t i, double* grads, double* rayleigh) {
  (void)count;
  const double* u = rows + i * dim;
  double* g = grads + i * dim;
  double rho = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    g[j] = dot_n(s + j * dim, u, dim);  // (S u)_j
    rho += g[j] * u[j];
  }
  for (std::size_t j = 0; j < dim; ++j) g[j] = 4.0 * (g[j] - rho * u[j]);
  if (rayleigh != nullptr) rayleigh[i] = rho;
}

inline void offdiag_row(const double* rows, std::size_t count, std::size_t dim, std::size_t i,
                        double* sum_sq, double* max_abs) {
  double ss = 0.0;
  double ma = 0.0;
  for (std::size_t j = i + 1; j < count; ++j) {
    const double d = dot_n(rows + i * dim, rows + j * dim, dim);
    ss += d * d;
    const double a = std::fabs(d);
    if (a > ma) ma = a;
  }
  *sum_sq = ss;
  *max_abs = ma;
}

}  // namespace

void frame_operator_rows(const double* rows, std::size_t count, std::size_t dim, double* s) {
  const std::int64_t work = static_cast<std::int64_t>(count) * dim * dim;
  if (work < kParallelGrain) {
    for (std::size_t j = 0; j < dim; ++j) frame_operator_row(rows, count, dim, j, s);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(dim); ++j)
    frame_operator_row(rows, count, dim, static_cast<std::size_t>(j), s);
}

void gram_rows(const double* rows, std::size_t count, std::size_t dim, double* g) {
  const std::int64_t work = static_cast<std::int64_t>(count) * count * dim;
  if (work < kParallelGrain) {
    for (std::size_t i = 0; i < count; ++i) gram_row(rows, count, dim, i, g);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
    gram_row(rows, count, dim, static_cast<std::size_t>(i), g);
}

double potential_rows(const double* rows, std::size_t count, std::size_t dim) {
  const std::int64_t work = static_cast<std::int64_t>(count) * count * dim;
  if (work < kParallelGrain) {
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) total += potential_row(rows, count, dim, i);
    return total;
  }
  std::vector<double> partial(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
    partial[i] = potential_row(rows, count, dim, static_cast<std::size_t>(i));
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

void gradient_rows(const double* rows, std::size_t count, std::size_t dim, const double* s,
                   double* grads, double* rayleigh) {
  const std::int64_t work = static_cast<std::int64_t>(count) * dim * dim;
  if (work < kParallelGrain) {
    for (std::size_t i = 0; i < count; ++i) gradient_row(rows, count, dim, s, i, grads, rayleigh);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
    gradient_row(rows, count, dim, s, static_cast<std::size_t>(i), grads, rayleigh);
}

double tight_dev_sq(const double* s, std::size_t dim, double lambda) {
  double acc = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t k = 0; k < dim; ++k) {
      const double e = s[j * dim + k] - ((j == k) ? lambda : 0.0);
      acc += e * e;
    }
  }
  return acc;
}

OffdiagStats offdiag_rows(const double* rows, std::size_t count, std::size_t dim) {
  const std::int64_t work = static_cast<std::int64_t>(count) * count * dim;
  OffdiagStats st{0.0, 0.0};
  if (work < kParallelGrain) {
    for (std::size_t i = 0; i < count; ++i) {
      double ss, ma;
      offdiag_row(rows, count, dim, i, &ss, &ma);
      st.sum_sq += ss;
      if (ma > st.max_abs) st.max_abs = ma;
    }
  } else {
    std::vector<double> ss(count), ma(count);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
      offdiag_row(rows, count, dim, static_cast<std::size_t>(i), &ss[i], &ma[i]);
    for (std::size_t i = 0; i < count; ++i) {
      st.sum_sq += ss[i];
      if (ma[i] > st.max_abs) st.max_abs = ma[i];
    }
  }
  st.sum_sq *= 2.0;  // each unordered pair counted once above
  return st;
}

}  // namespace funtf::detail
