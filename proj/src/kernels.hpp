#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

// Flat-buffer kernels shared by the public frame operations and the
// minimizer's inner loop. `rows` is count x dim, row-major.
//
// Parallelization rule: each output element is accumulated by exactly one
// thread, in a fixed index order, and scalar totals are reduced serially from
// per-row partials. Results are therefore bit-identical for any thread count,
// which the deterministic-output contract of the CLI relies on. Small
// problems skip the OpenMP region entirely.

namespace funtf::detail {

inline constexpr std::int64_t kParallelGrain = 1 << 15;

// s (dim x dim) = sum over rows of u u^T.
void frame_operator_rows(const double* rows, std::size_t count, std::size_t dim, double* s);

// g (count x count) = pairwise inner products.
void gram_rows(const double* rows, std::size_t count, std::size_t dim, double* g);

// Sum of squared pairwise inner products (diagonal included).
double potential_rows(const double* rows, std::size_t count, std::size_t dim);

// Tangential potential gradients: grad_i = 4 (S u_i - <S u_i, u_i> u_i),
// written to grads (count x dim). rayleigh, when non-null, receives the
// quotients <S u_i, u_i>.
void gradient_rows(const double* rows, std::size_t count, std::size_t dim, const double* s,
                   double* grads, double* rayleigh);

// |S - lambda I|^2 in the Hilbert-Schmidt norm, computed entrywise so the
// result stays accurate when S is close to lambda I.
double tight_dev_sq(const double* s, std::size_t dim, double lambda);

struct OffdiagStats {
  double sum_sq;   // sum over i != j of G_ij^2
  double max_abs;  // max over i != j of |G_ij|
};

// Off-diagonal Gram statistics straight from the rows, without forming G.
OffdiagStats offdiag_rows(const double* rows, std::size_t count, std::size_t dim);

}  // namespace funtf::detail
