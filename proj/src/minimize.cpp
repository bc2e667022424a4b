#include "funtf/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "funtf/errors.hpp"
#include "kernels.hpp"

namespace funtf {

namespace {

constexpr double kRenormSlack = 4.0 * std::numeric_limits<double>::epsilon();

std::vector<double> flatten(const UnitVectorSystem& sys) {
  std::vector<double> rows(sys.count() * sys.dim());
  for (std::size_t i = 0; i < sys.count(); ++i)
    for (std::size_t j = 0; j < sys.dim(); ++j) rows[i * sys.dim() + j] = sys.vector(i)[j];
  return rows;
}

UnitVectorSystem unflatten(const std::vector<double>& rows, std::size_t count, std::size_t dim) {
  std::vector<Vec> out(count, Vec(dim, 0.0));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < dim; ++j) out[i][j] = rows[i * dim + j];
  return UnitVectorSystem(dim, std::move(out));
}

// u_i -> cos(delta_i) u_i + sin(delta_i) dir_i, renormalized; delta_i == 0
// copies the row bit-unchanged.
void geodesic_rows(const double* in, std::size_t count, std::size_t dim, const double* dirs,
                   const double* deltas, double* out) {
  for (std::size_t i = 0; i < count; ++i) {
    const double* u = in + i * dim;
    double* o = out + i * dim;
    const double d = deltas[i];
    if (d == 0.0) {
      for (std::size_t j = 0; j < dim; ++j) o[j] = u[j];
      continue;
    }
    const double c = std::cos(d);
    const double s = std::sin(d);
    const double* v = dirs + i * dim;
    double ns = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      o[j] = c * u[j] + s * v[j];
      ns += o[j] * o[j];
    }
    if (std::fabs(ns - 1.0) > kRenormSlack) {
      const double nr = std::sqrt(ns);
      for (std::size_t j = 0; j < dim; ++j) o[j] /= nr;
    }
  }
}

struct Objective {
  double value;   // frame potential minus its lower bound, cancellation-free
  double metric;  // what convergence is judged on: deviation or max offdiagonal
};

// For count >= dim the potential exceeds its bound by exactly
// |S - (count/dim) I|^2; for count < dim by exactly the sum of squared
// off-diagonal Gram entries. Both are computed from small residual entries
// directly, so they stay meaningful far below the rounding noise of the raw
// potential difference.
Objective eval_objective(const double* rows, std::size_t count, std::size_t dim,
                         bool frame_case, double lambda_tight, double* s_scratch) {
  Objective o;
  if (frame_case) {
    detail::frame_operator_rows(rows, count, dim, s_scratch);
    o.value = detail::tight_dev_sq(s_scratch, dim, lambda_tight);
    o.metric = std::sqrt(o.value);
  } else {
    const detail::OffdiagStats st = detail::offdiag_rows(rows, count, dim);
    o.value = st.sum_sq;
    o.metric = st.max_abs;
  }
  return o;
}

void validate(const MinimizerConfig& cfg) {
  if (cfg.max_iters < 0) throw ArgumentError("max_iters must be non-negative");
  if (!(cfg.grad_tol > 0.0)) throw ArgumentError("grad_tol must be positive");
  if (!(cfg.armijo_c > 0.0 && cfg.armijo_c < 1.0))
    throw ArgumentError("armijo_c must lie in (0, 1)");
  if (!(cfg.backtrack_factor > 0.0 && cfg.backtrack_factor < 1.0))
    throw ArgumentError("backtrack_factor must lie in (0, 1)");
  if (!(cfg.saddle_delta > 0.0)) throw ArgumentError("saddle_delta must be positive");
  if (!(cfg.eig_group_tol > 0.0)) throw ArgumentError("eig_group_tol must be positive");
  if (!(cfg.conv_tol > 0.0)) throw ArgumentError("conv_tol must be positive");
}

}  // namespace

std::vector<Vec> fp_gradient(const UnitVectorSystem& sys) {
  const std::size_t n = sys.dim();
  const std::size_t cnt = sys.count();
  const std::vector<double> rows = flatten(sys);
  std::vector<double> s(n * n), grads(cnt * n);
  detail::frame_operator_rows(rows.data(), cnt, n, s.data());
  detail::gradient_rows(rows.data(), cnt, n, s.data(), grads.data(), nullptr);
  std::vector<Vec> out(cnt, Vec(n, 0.0));
  for (std::size_t i = 0; i < cnt; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = grads[i * n + j];
  return out;
}

UnitVectorSystem geodesic_step(const UnitVectorSystem& sys, const std::vector<Vec>& directions,
                               const std::vector<double>& deltas) {
  const std::size_t n = sys.dim();
  const std::size_t cnt = sys.count();
  if (directions.size() != cnt || deltas.size() != cnt)
    throw ArgumentError("geodesic_step needs one direction and one angle per vector");

  std::vector<double> dirs(cnt * n, 0.0), eff_deltas(cnt, 0.0);
  for (std::size_t i = 0; i < cnt; ++i) {
    if (!std::isfinite(deltas[i])) throw ArgumentError("geodesic_step angle is not finite");
    const Vec& v = directions[i];
    if (v.size() != n) throw ArgumentError("geodesic_step direction has the wrong dimension");
    const double nv = norm(v);
    if (nv <= 1e-8) continue;  // zero direction: this vector stays put
    if (std::fabs(nv - 1.0) > 1e-8) {
      std::ostringstream os;
      os << "direction " << i << " has norm " << nv << ", expected 1 within 1e-8 (or zero)";
      throw ArgumentError(os.str());
    }
    const double along = dot(v, sys.vector(i));
    if (std::fabs(along) > 1e-8) {
      std::ostringstream os;
      os << "direction " << i << " is not tangential: <v, u> = " << along;
      throw ArgumentError(os.str());
    }
    for (std::size_t j = 0; j < n; ++j) dirs[i * n + j] = v[j];
    eff_deltas[i] = deltas[i];
  }

  const std::vector<double> rows = flatten(sys);
  std::vector<double> out(cnt * n);
  geodesic_rows(rows.data(), cnt, n, dirs.data(), eff_deltas.data(), out.data());
  return unflatten(out, cnt, n);
}

std::optional<EigenPartition> eigen_partition(const UnitVectorSystem& sys, double crit_tol,
                                              double group_tol) {
  if (!(crit_tol > 0.0)) throw ArgumentError("criticality tolerance must be positive");
  if (!(group_tol > 0.0)) throw ArgumentError("group tolerance must be positive");
  const std::size_t n = sys.dim();
  const std::size_t cnt = sys.count();
  const std::vector<double> rows = flatten(sys);
  std::vector<double> s(n * n), grads(cnt * n), ray(cnt);
  detail::frame_operator_rows(rows.data(), cnt, n, s.data());
  detail::gradient_rows(rows.data(), cnt, n, s.data(), grads.data(), ray.data());

  double worst = 0.0;
  for (std::size_t i = 0; i < cnt; ++i) {
    double rsq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double r = 0.25 * grads[i * n + j];  // S u_i - rho_i u_i
      rsq += r * r;
    }
    const double resid = std::sqrt(rsq);
    if (resid > crit_tol) return std::nullopt;  // not critical at this tolerance
    worst = std::max(worst, resid);
  }

  std::vector<std::size_t> order(cnt);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ray[a] > ray[b]; });

  EigenPartition part;
  part.residual = worst;
  for (std::size_t k = 0; k < cnt; ++k) {
    const std::size_t i = order[k];
    if (k == 0 || ray[order[k - 1]] - ray[i] > group_tol) {
      part.groups.push_back({0.0, {}});
    }
    part.groups.back().members.push_back(i);
  }
  for (auto& g : part.groups) {
    double sum = 0.0;
    for (std::size_t i : g.members) sum += ray[i];
    g.eigenvalue = sum / static_cast<double>(g.members.size());
    std::sort(g.members.begin(), g.members.end());
  }
  return part;
}

std::optional<SaddleEscape> saddle_escape_direction(const UnitVectorSystem& sys,
                                                    const EigenPartition& part) {
  if (part.groups.empty()) throw ArgumentError("empty eigenvalue partition");
  if (part.groups.size() < 2) return std::nullopt;  // tight: nothing below to rotate towards

  const auto& top = part.groups.front();
  const std::size_t k = top.members.size();
  SymMatrix gram(k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b)
      gram.set(a, b, dot(sys.vector(top.members[a]), sys.vector(top.members[b])));

  const EigenDecomposition eig = eigh_symmetric(gram);
  const double smallest = eig.eigenvalues.front();
  if (smallest > 1e-8) {
    std::ostringstream os;
    os << "top eigenvalue group should be linearly dependent, but its Gram matrix has "
          "smallest eigenvalue "
       << smallest;
    throw NumericError(os.str());
  }

  const auto& bottom = part.groups.back();
  SaddleEscape esc;
  esc.indices = top.members;
  esc.coeffs = eig.eigenvectors.front();
  esc.direction = sys.vector(bottom.members.front());
  esc.predicted_curvature =
      2.0 * (top.eigenvalue - bottom.eigenvalue) * norm_sq(esc.coeffs);
  return esc;
}

MinimizeReport minimize(const UnitVectorSystem& start, const MinimizerConfig& cfg) {
  validate(cfg);
  const std::size_t n = start.dim();
  const std::size_t cnt = start.count();
  const bool frame_case = cnt >= n;
  const double lambda_tight = static_cast<double>(cnt) / static_cast<double>(n);
  const double bound = potential_lower_bound(n, cnt);

  std::vector<double> rows = flatten(start);
  std::vector<double> s(n * n), grads(cnt * n), ray(cnt);
  std::vector<double> dirs(cnt * n), deltas(cnt), step_deltas(cnt);
  std::vector<double> trial(cnt * n), s_trial(n * n);

  Objective obj = eval_objective(rows.data(), cnt, n, frame_case, lambda_tight, s.data());

  int iters = 0;
  int escapes = 0;
  bool converged = false;
  double carry = 0.0;  // last accepted step, grown back on the next search
  std::vector<TrajectoryPoint> traj;

  for (;;) {
    if (obj.metric <= cfg.conv_tol) {
      converged = true;
      break;
    }
    if (iters >= cfg.max_iters) break;

    detail::frame_operator_rows(rows.data(), cnt, n, s.data());
    detail::gradient_rows(rows.data(), cnt, n, s.data(), grads.data(), ray.data());
    double gsq = 0.0;
    double gmax = 0.0;
    for (std::size_t i = 0; i < cnt; ++i) {
      double gi = 0.0;
      for (std::size_t j = 0; j < n; ++j) gi += grads[i * n + j] * grads[i * n + j];
      gsq += gi;
      gmax = std::max(gmax, std::sqrt(gi));
    }
    const double gnorm = std::sqrt(gsq);
    if (cfg.record_trajectory) traj.push_back({iters, bound + obj.value, gnorm});

    if (gnorm <= cfg.grad_tol) {
      // Critical but not certified: escape through the top group's
      // dependence, halving the angle until the potential strictly drops.
      const auto part = eigen_partition(unflatten(rows, cnt, n), cfg.grad_tol, cfg.eig_group_tol);
      std::optional<SaddleEscape> esc;
      if (part.has_value()) esc = saddle_escape_direction(unflatten(rows, cnt, n), *part);
      bool escaped = false;
      if (esc.has_value()) {
        std::fill(dirs.begin(), dirs.end(), 0.0);
        std::fill(deltas.begin(), deltas.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t a = 0; a < esc->indices.size(); ++a)
            dirs[esc->indices[a] * n + j] = esc->direction[j];
        double delta = cfg.saddle_delta;
        for (int halvings = 0; halvings <= 40; ++halvings, delta *= 0.5) {
          for (std::size_t a = 0; a < esc->indices.size(); ++a)
            deltas[esc->indices[a]] = esc->coeffs[a] * delta;
          geodesic_rows(rows.data(), cnt, n, dirs.data(), deltas.data(), trial.data());
          const Objective tobj =
              eval_objective(trial.data(), cnt, n, frame_case, lambda_tight, s_trial.data());
          if (tobj.value < obj.value) {
            rows.swap(trial);
            obj = tobj;
            ++escapes;
            ++iters;
            carry = 0.0;
            escaped = true;
            break;
          }
        }
      }
      if (!escaped) break;  // single eigenvalue group or no measurable drop: stuck
      continue;
    }

    // Shared-step descent: each vector turns by t * |grad_i| towards its
    // normalized negative gradient, so d(obj)/dt at t = 0 is -gsq.
    for (std::size_t i = 0; i < cnt; ++i) {
      double gi = 0.0;
      for (std::size_t j = 0; j < n; ++j) gi += grads[i * n + j] * grads[i * n + j];
      gi = std::sqrt(gi);
      if (gi == 0.0) {
        for (std::size_t j = 0; j < n; ++j) dirs[i * n + j] = 0.0;
        deltas[i] = 0.0;
      } else {
        for (std::size_t j = 0; j < n; ++j) dirs[i * n + j] = -grads[i * n + j] / gi;
        deltas[i] = gi;  // scaled by t below
      }
    }
    double lambda_est = 1.0;
    for (std::size_t i = 0; i < cnt; ++i) lambda_est = std::max(lambda_est, ray[i]);
    const double t_default = (cfg.step_init > 0.0) ? cfg.step_init : 1.0 / (4.0 * lambda_est);
    const double t_cap = 1.5707963267948966 / gmax;  // largest angle at most pi/2
    double t = std::min((carry > 0.0) ? carry / cfg.backtrack_factor : t_default, t_cap);

    bool accepted = false;
    for (int back = 0; back <= 60; ++back, t *= cfg.backtrack_factor) {
      for (std::size_t i = 0; i < cnt; ++i) step_deltas[i] = t * deltas[i];
      geodesic_rows(rows.data(), cnt, n, dirs.data(), step_deltas.data(), trial.data());
      const Objective tobj =
          eval_objective(trial.data(), cnt, n, frame_case, lambda_tight, s_trial.data());
      if (tobj.value <= obj.value - cfg.armijo_c * t * gsq) {
        rows.swap(trial);
        obj = tobj;
        carry = t;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no resolvable decrease left at this precision
    ++iters;
  }

  MinimizeReport report{unflatten(rows, cnt, n),
                        detail::potential_rows(rows.data(), cnt, n),
                        iters,
                        escapes,
                        converged,
                        std::move(traj)};
  return report;
}

std::vector<MinimizeReport> minimize_random_starts(std::size_t dim, std::size_t count,
                                                   int starts, std::uint64_t base_seed,
                                                   const MinimizerConfig& cfg) {
  if (starts < 1) throw ArgumentError("minimize_random_starts needs at least one start");
  std::vector<std::optional<MinimizeReport>> slots(starts);
#pragma omp parallel for schedule(dynamic) if (starts > 1)
  for (int i = 0; i < starts; ++i) {
    MinimizerConfig run_cfg = cfg;
    run_cfg.seed = base_seed + static_cast<std::uint64_t>(i);
    slots[i] = minimize(UnitVectorSystem::random(dim, count, run_cfg.seed), run_cfg);
  }
  std::vector<MinimizeReport> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace funtf
