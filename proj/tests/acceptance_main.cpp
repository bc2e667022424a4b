// End-to-end acceptance gate. Each criterion prints exactly one PASS/FAIL
// line; the process exits with the number of failed criteria. Tolerances are
// pinned here on purpose: change them and you are changing the contract.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "funtf/frames.hpp"
#include "funtf/linalg.hpp"
#include "funtf/minimize.hpp"
#include "funtf/psd.hpp"
#include "funtf/reference.hpp"
#include "../tests/test_support.hpp"

using namespace funtf;
namespace fs = std::filesystem;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

struct Outcome {
  bool pass;
  std::string detail;
};

// ------------------------------------------------------------------
// 1 + 2: sweep every shape (dim 2..5, count dim..3*dim) with 100 seeded
// starts; the potential must land within 1e-7 of the bound, and the
// certificates of the converged systems must be clean.

struct SweepResults {
  int runs = 0;
  int unconverged = 0;
  double worst_gap = 0.0;      // |potential - bound|
  double worst_dev = 0.0;      // frame operator deviation, count >= dim
  double worst_offdiag = 0.0;  // max |G_ij|, i != j, count <= dim
  double seconds = 0.0;
};

SweepResults run_sweep() {
  SweepResults r;
  Timer t;
  for (std::size_t n = 2; n <= 5; ++n) {
    for (std::size_t N = n; N <= 3 * n; ++N) {
      const auto reps =
          minimize_random_starts(n, N, 100, 100000 + 1000 * n + N);
      const double bound = potential_lower_bound(n, N);
      for (const auto& rep : reps) {
        ++r.runs;
        // The potential bound must be reached from every start. The
        // 1e-8-deviation certificate below is only claimed for runs whose
        // convergence test fired; a start crawling down a flat valley may
        // reach the bound in value without certifying in the iteration cap.
        r.worst_gap = std::max(r.worst_gap, std::fabs(rep.final_potential - bound));
        if (!rep.converged) {
          ++r.unconverged;
          continue;
        }
        if (N >= n) {
          const auto cert = certify(rep.final_system);
          r.worst_dev = std::max(r.worst_dev, cert.frame_operator_deviation);
        }
        if (N <= n) {
          const auto g = gram_matrix(rep.final_system);
          for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i + 1; j < N; ++j)
              r.worst_offdiag = std::max(r.worst_offdiag, std::fabs(g(i, j)));
        }
      }
    }
  }
  r.seconds = t.seconds();
  return r;
}

Outcome criterion_potential(const SweepResults& r) {
  std::ostringstream os;
  os << r.runs << " runs, worst gap " << r.worst_gap << ", " << r.unconverged
     << " without certificate, " << r.seconds << " s";
  return {r.worst_gap <= 1e-7 && r.seconds <= 60.0, os.str()};
}

Outcome criterion_certificates(const SweepResults& r) {
  std::ostringstream os;
  os << "worst operator deviation " << r.worst_dev << ", worst off-diagonal "
     << r.worst_offdiag;
  return {r.worst_dev <= 1e-7 && r.worst_offdiag <= 1e-6, os.str()};
}

// ------------------------------------------------------------------
// 3: the doubled-direction-plus-orthogonal start is a textbook critical
// point; the minimizer must step off it through the second-order move and
// the move's measured curvature must match its prediction.

Outcome criterion_saddle() {
  const UnitVectorSystem pin(2, {Vec{1.0, 0.0}, Vec{-1.0, 0.0}, Vec{0.0, 1.0}});
  const auto rep = minimize(pin);
  std::ostringstream os;
  bool pass = rep.converged && rep.saddle_escapes >= 1 &&
              std::fabs(rep.final_potential - 4.5) <= 1e-8;
  os << "final potential " << rep.final_potential << ", escapes " << rep.saddle_escapes;

  const auto part = eigen_partition(pin, 1e-9);
  const auto esc = part ? saddle_escape_direction(pin, *part) : std::nullopt;
  if (!esc) {
    return {false, os.str() + ", escape construction failed"};
  }
  const double fp0 = ref::frame_potential(pin);
  double worst_rel = 0.0;
  for (const double delta : {1e-3, 5e-4, 2.5e-4}) {
    std::vector<Vec> dirs(pin.count(), Vec(2, 0.0));
    std::vector<double> deltas(pin.count(), 0.0);
    for (std::size_t k = 0; k < esc->indices.size(); ++k) {
      dirs[esc->indices[k]] = esc->direction;
      deltas[esc->indices[k]] = delta * esc->coeffs[k];
    }
    const double drop = fp0 - ref::frame_potential(geodesic_step(pin, dirs, deltas));
    const double measured = drop / (delta * delta);
    worst_rel = std::max(worst_rel,
                         std::fabs(measured - esc->predicted_curvature) /
                             esc->predicted_curvature);
  }
  os << ", curvature off by " << worst_rel * 100.0 << "%";
  pass = pass && worst_rel <= 0.05;
  return {pass, os.str()};
}

// ------------------------------------------------------------------
// 4: analytic gradient against central differences of the independent
// serial potential.

Outcome criterion_gradient() {
  auto g = testsup::rng(40001);
  const double h = 1e-5;
  double worst = 0.0;
  int probes = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    const std::size_t N = n + 3;
    const auto sys = testsup::random_system(g, n, N);
    const auto grad = fp_gradient(sys);
    for (int probe = 0; probe < 20; ++probe) {
      const std::size_t i = static_cast<std::size_t>(testsup::uniform(g, 0.0, double(N))) % N;
      Vec v = testsup::random_unit(g, n);
      const double c = dot(v, sys.vector(i));
      for (std::size_t k = 0; k < n; ++k) v[k] -= c * sys.vector(i)[k];
      if (norm(v) < 1e-3) continue;
      v = normalized(v);
      std::vector<Vec> dirs(N, Vec(n, 0.0));
      dirs[i] = v;
      std::vector<double> dp(N, 0.0), dm(N, 0.0);
      dp[i] = h;
      dm[i] = -h;
      const double fd = (ref::frame_potential(geodesic_step(sys, dirs, dp)) -
                         ref::frame_potential(geodesic_step(sys, dirs, dm))) /
                        (2.0 * h);
      const double an = dot(grad[i], v);
      worst = std::max(worst, std::fabs(fd - an) / std::max(1.0, std::fabs(an)));
      ++probes;
    }
  }
  std::ostringstream os;
  os << probes << " probes, worst relative error " << worst;
  return {worst <= 1e-5 && probes >= 80, os.str()};
}

// ------------------------------------------------------------------
// 5: the potential equals both squared Hilbert-Schmidt norms.

Outcome criterion_identity() {
  auto g = testsup::rng(50001);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const std::size_t N = n + trial % (2 * n + 1);
    const auto sys = testsup::random_system(g, n, N);
    const double fp = frame_potential(sys);
    const double so = hs_norm(frame_operator(sys));
    const double gr = hs_norm(gram_matrix(sys));
    const double scale = std::max(1.0, fp);
    worst = std::max(worst, std::fabs(fp - so * so) / scale);
    worst = std::max(worst, std::fabs(fp - gr * gr) / scale);
  }
  std::ostringstream os;
  os << "1000 systems, worst relative mismatch " << worst;
  return {worst <= 1e-9, os.str()};
}

// ------------------------------------------------------------------
// 6: orthogonal equal-norm points on random positive definite level sets.

Outcome criterion_ellipsoid() {
  Timer t;
  auto g = testsup::rng(60001);
  double worst = 0.0;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      const SymMatrix m = testsup::random_pd(g, n, 0.2, 5.0);
      const double rho = rho_target(m);
      const auto zs = equal_norm_orthogonal(Ellipsoid(m));
      if (zs.size() != n) return {false, "wrong point count"};
      for (std::size_t i = 0; i < n; ++i) {
        worst = std::max(worst, std::fabs(norm(zs[i]) - rho));
        worst = std::max(worst, std::fabs(testsup::quad(m, zs[i]) - 1.0));
        for (std::size_t j = i + 1; j < n; ++j)
          worst = std::max(worst, std::fabs(dot(zs[i], zs[j])));
      }
    }
  }
  const double sec = t.seconds();
  std::ostringstream os;
  os << "600 forms, worst postcondition error " << worst << ", " << sec << " s";
  return {worst <= 1e-9 && sec <= 10.0, os.str()};
}

// ------------------------------------------------------------------
// 7: unit-norm rank-one decompositions of random integer-trace psd
// matrices, full dimension and rank deficient alike.

Outcome criterion_decompose() {
  auto g = testsup::rng(70001);
  double worst_resid = 0.0, worst_norm = 0.0, worst_leak = 0.0;
  int done = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const std::size_t N = n + trial % (n + 1);
    const bool deficient = n > 2 && trial % 3 == 0;
    const std::size_t rank = deficient ? n - 1 : n;
    const SymMatrix m = testsup::random_psd_integer_trace(g, n, rank, double(N));
    const auto dec = decompose_unit_norm(m, int(N));
    if (dec.vectors.size() != N) return {false, "wrong term count"};
    worst_resid = std::max(worst_resid,
                           dec.reconstruction_residual / (1.0 + hs_norm(m)));
    for (const Vec& v : dec.vectors)
      worst_norm = std::max(worst_norm, std::fabs(norm(v) - 1.0));
    if (deficient) {
      const auto e = eigh_symmetric(m);
      for (std::size_t k = 0; k < n; ++k) {
        if (e.eigenvalues[k] > 1e-10 * e.eigenvalues.back()) continue;
        for (const Vec& v : dec.vectors)
          worst_leak = std::max(worst_leak, std::fabs(dot(v, e.eigenvectors[k])));
      }
    }
    ++done;
  }
  std::ostringstream os;
  os << done << " matrices, worst scaled residual " << worst_resid << ", worst norm error "
     << worst_norm << ", worst range leakage " << worst_leak;
  return {done == 100 && worst_resid <= 1e-8 && worst_norm <= 1e-10 && worst_leak <= 1e-9,
          os.str()};
}

// ------------------------------------------------------------------
// 8: the command line round-trips files, certifies its own outputs, and is
// byte-for-byte reproducible.

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args, const fs::path& capture) {
  const std::string cmd = std::string(FUNTF_CLI_PATH) + " " + args + " >" +
                          capture.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Outcome criterion_cli() {
  const fs::path dir = fs::temp_directory_path() / "funtf_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cap1 = dir / "cap1.txt", cap2 = dir / "cap2.txt";

  std::ostringstream os;
  bool pass = true;

  const std::string fa = (dir / "a.frame").string(), fb = (dir / "b.frame").string();
  if (run_cli("generate --dim 3 --count 7 --seed 11 --json --output " + fa, cap1) != 0) {
    pass = false;
    os << "generate failed; ";
  }
  if (run_cli("generate --dim 3 --count 7 --seed 11 --json --output " + fb, cap2) != 0) {
    pass = false;
    os << "generate rerun failed; ";
  }
  if (slurp(fa) != slurp(fb)) {
    pass = false;
    os << "outputs not byte-identical; ";
  }
  if (run_cli("check " + fa, cap1) != 0) {
    pass = false;
    os << "generated frame did not certify; ";
  }

  std::ofstream(dir / "s.mat") << "3\n2 0 0\n0 2 0\n0 0 2\n";
  const std::string df = (dir / "dec.frame").string();
  if (run_cli("decompose " + (dir / "s.mat").string() + " --count 6 --output " + df, cap1) != 0) {
    pass = false;
    os << "decompose failed; ";
  }
  if (run_cli("check " + df, cap1) != 0) {
    pass = false;
    os << "decomposition did not certify; ";
  }
  if (pass) os << "determinism and both pipelines clean";
  return {pass, os.str()};
}

void report(int k, const char* name, const Outcome& o, int& failures) {
  if (!o.pass) ++failures;
  std::printf("[%d/8] %s  %s (%s)\n", k, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  int failures = 0;

  const SweepResults sweep = run_sweep();
  report(1, "random starts reach the potential bound within 1e-7 on every shape",
         criterion_potential(sweep), failures);
  report(2, "converged systems certify (operator deviation 1e-7, off-diagonals 1e-6)",
         criterion_certificates(sweep), failures);
  report(3, "second-order escape leaves the critical start and matches its curvature",
         criterion_saddle(), failures);
  report(4, "analytic gradient agrees with central differences to 1e-5",
         criterion_gradient(), failures);
  report(5, "potential equals both squared operator norms to 1e-9",
         criterion_identity(), failures);
  report(6, "orthogonal equal-norm points meet all postconditions within 1e-9",
         criterion_ellipsoid(), failures);
  report(7, "psd matrices split into unit rank-one terms within residual bounds",
         criterion_decompose(), failures);
  report(8, "command line is reproducible and certifies its own outputs",
         criterion_cli(), failures);

  if (failures == 0)
    std::printf("all 8 acceptance criteria hold\n");
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures;
}
