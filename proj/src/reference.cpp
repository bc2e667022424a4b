#include "funtf/reference.hpp"

namespace funtf::ref {

double frame_potential(const UnitVectorSystem& sys) {
  double fp = 0.0;
  for (std::size_t i = 0; i < sys.count(); ++i) {
    for (std::size_t j = 0; j < sys.count(); ++j) {
      const double d = dot(sys.vector(i), sys.vector(j));
      fp += d * d;
    }
  }
  return fp;
}

SymMatrix frame_operator(const UnitVectorSystem& sys) {
  const std::size_t n = sys.dim();
  SymMatrix s(n);
  // accumulate the rank-one terms u u^T one vector at a time
  for (std::size_t i = 0; i < sys.count(); ++i) {
    const Vec& u = sys.vector(i);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) s.set(j, k, s(j, k) + u[j] * u[k]);
  }
  return s;
}

SymMatrix gram_matrix(const UnitVectorSystem& sys) {
  SymMatrix g(sys.count());
  for (std::size_t i = 0; i < sys.count(); ++i)
    for (std::size_t j = i; j < sys.count(); ++j)
      g.set(i, j, dot(sys.vector(i), sys.vector(j)));
  return g;
}

std::vector<Vec> fp_gradient(const UnitVectorSystem& sys) {
  // grad_i = 4 (S u_i - <S u_i, u_i> u_i), with S u_i expanded as
  // sum_j <u_j, u_i> u_j so no frame operator is formed.
  const std::size_t n = sys.dim();
  std::vector<Vec> grads(sys.count(), Vec(n, 0.0));
  for (std::size_t i = 0; i < sys.count(); ++i) {
    const Vec& ui = sys.vector(i);
    Vec su(n, 0.0);
    for (std::size_t j = 0; j < sys.count(); ++j) {
      const double d = dot(sys.vector(j), ui);
      for (std::size_t k = 0; k < n; ++k) su[k] += d * sys.vector(j)[k];
    }
    const double rho = dot(su, ui);
    for (std::size_t k = 0; k < n; ++k) grads[i][k] = 4.0 * (su[k] - rho * ui[k]);
  }
  return grads;
}

}  // namespace funtf::ref
