// Command line front end: construct, refine, certify, and decompose
// unit-norm vector systems.  Exit codes: 0 success / certified,
// 1 usage or input errors, 2 I/O errors, 3 numeric failure or not certified.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "funtf/errors.hpp"
#include "funtf/frames.hpp"
#include "funtf/io.hpp"
#include "funtf/minimize.hpp"
#include "funtf/psd.hpp"
#include "funtf/version.hpp"
#include "json.hpp"

namespace {

using funtf::format_real;
using json = nlohmann::ordered_json;

const char* yn(bool b) { return b ? "yes" : "no"; }

json certificate_json(const funtf::FrameCertificate& cert) {
  json j;
  j["potential"] = cert.potential;
  j["lower_bound"] = cert.lower_bound;
  j["lambda"] = cert.lambda_estimate;
  j["frame_operator_deviation"] = cert.frame_operator_deviation;
  j["is_tight"] = cert.is_tight;
  j["is_orthonormal_set"] = cert.is_orthonormal_set;
  return j;
}

void print_certificate(const funtf::FrameCertificate& cert) {
  std::cout << "potential: " << format_real(cert.potential) << "\n"
            << "lower_bound: " << format_real(cert.lower_bound) << "\n"
            << "lambda: " << format_real(cert.lambda_estimate) << "\n"
            << "frame_operator_deviation: " << format_real(cert.frame_operator_deviation) << "\n"
            << "is_tight: " << yn(cert.is_tight) << "\n"
            << "is_orthonormal_set: " << yn(cert.is_orthonormal_set) << "\n";
}

json minimizer_json(const funtf::MinimizeReport& rep) {
  json j;
  j["converged"] = rep.converged;
  j["iterations"] = rep.iterations;
  j["saddle_escapes"] = rep.saddle_escapes;
  j["final_potential"] = rep.final_potential;
  return j;
}

void print_minimizer(const funtf::MinimizeReport& rep) {
  std::cout << "converged: " << yn(rep.converged) << "\n"
            << "iterations: " << rep.iterations << "\n"
            << "saddle_escapes: " << rep.saddle_escapes << "\n";
}

json trajectory_json(const funtf::MinimizeReport& rep) {
  json arr = json::array();
  for (const auto& p : rep.trajectory) {
    json row;
    row["iteration"] = p.iteration;
    row["potential"] = p.potential;
    row["grad_norm"] = p.grad_norm;
    arr.push_back(std::move(row));
  }
  return arr;
}

void print_trajectory(const funtf::MinimizeReport& rep) {
  std::cout << "trajectory (iteration potential grad_norm):\n";
  for (const auto& p : rep.trajectory)
    std::cout << "  " << p.iteration << " " << format_real(p.potential) << " "
              << format_real(p.grad_norm) << "\n";
}

void emit(const json& j, bool as_json) {
  if (as_json) std::cout << j.dump(2) << "\n";
}

struct GenerateOpts {
  std::size_t dim = 2;
  std::size_t count = 3;
  std::uint64_t seed = 1;
  double tol = funtf::kDefaultCertTol;
  std::string output;
  bool as_json = false;
  bool trajectory = false;
};

int run_generate(const GenerateOpts& o) {
  funtf::MinimizerConfig cfg;
  cfg.conv_tol = o.tol;
  cfg.record_trajectory = o.trajectory;

  std::optional<funtf::MinimizeReport> rep;
  std::uint64_t used_seed = o.seed;
  for (int attempt = 0; attempt < 10; ++attempt) {
    used_seed = o.seed + static_cast<std::uint64_t>(attempt);
    cfg.seed = used_seed;
    rep = funtf::minimize(funtf::UnitVectorSystem::random(o.dim, o.count, used_seed), cfg);
    if (rep->converged) break;
  }

  const auto cert = funtf::certify(rep->final_system, o.tol);
  if (!o.output.empty()) funtf::write_frame_file(o.output, rep->final_system);

  if (o.as_json) {
    json j;
    j["command"] = "generate";
    j["version"] = funtf::kVersion;
    j["inputs"] = {{"dim", o.dim}, {"count", o.count}, {"seed", o.seed}, {"tol", o.tol}};
    if (!o.output.empty()) j["inputs"]["output"] = o.output;
    j["seed_used"] = used_seed;
    j["minimizer"] = minimizer_json(*rep);
    j["certificate"] = certificate_json(cert);
    if (o.trajectory) j["trajectory"] = trajectory_json(*rep);
    emit(j, true);
  } else {
    std::cout << "command: generate\n"
              << "dim: " << o.dim << "\n"
              << "count: " << o.count << "\n"
              << "seed_used: " << used_seed << "\n";
    print_minimizer(*rep);
    print_certificate(cert);
    if (o.trajectory) print_trajectory(*rep);
    if (!o.output.empty()) std::cout << "wrote: " << o.output << "\n";
  }
  return rep->converged ? 0 : 3;
}

struct MinimizeOpts {
  std::string input;
  double tol = funtf::kDefaultCertTol;
  std::string output;
  bool as_json = false;
  bool trajectory = false;
};

int run_minimize(const MinimizeOpts& o) {
  const auto start = funtf::read_frame_file(o.input);
  funtf::MinimizerConfig cfg;
  cfg.conv_tol = o.tol;
  cfg.record_trajectory = o.trajectory;
  const auto rep = funtf::minimize(start, cfg);
  const auto cert = funtf::certify(rep.final_system, o.tol);
  if (!o.output.empty()) funtf::write_frame_file(o.output, rep.final_system);

  if (o.as_json) {
    json j;
    j["command"] = "minimize";
    j["version"] = funtf::kVersion;
    j["inputs"] = {{"input", o.input}, {"tol", o.tol}};
    if (!o.output.empty()) j["inputs"]["output"] = o.output;
    j["minimizer"] = minimizer_json(rep);
    j["certificate"] = certificate_json(cert);
    if (o.trajectory) j["trajectory"] = trajectory_json(rep);
    emit(j, true);
  } else {
    std::cout << "command: minimize\n"
              << "input: " << o.input << "\n";
    print_minimizer(rep);
    print_certificate(cert);
    if (o.trajectory) print_trajectory(rep);
    if (!o.output.empty()) std::cout << "wrote: " << o.output << "\n";
  }
  return rep.converged ? 0 : 3;
}

struct CheckOpts {
  std::string input;
  double tol = funtf::kDefaultCertTol;
  bool as_json = false;
};

int run_check(const CheckOpts& o, const char* name, bool gate) {
  const auto sys = funtf::read_frame_file(o.input);
  const auto cert = funtf::certify(sys, o.tol);
  if (o.as_json) {
    json j;
    j["command"] = name;
    j["version"] = funtf::kVersion;
    j["inputs"] = {{"input", o.input}, {"tol", o.tol}};
    j["dim"] = sys.dim();
    j["count"] = sys.count();
    j["certificate"] = certificate_json(cert);
    emit(j, true);
  } else {
    std::cout << "command: " << name << "\n"
              << "input: " << o.input << "\n"
              << "dim: " << sys.dim() << "\n"
              << "count: " << sys.count() << "\n";
    print_certificate(cert);
  }
  if (!gate) return 0;
  return (cert.is_tight || cert.is_orthonormal_set) ? 0 : 3;
}

struct DecomposeOpts {
  std::string input;
  std::size_t count = 0;
  std::string output;
  bool as_json = false;
};

int run_decompose(const DecomposeOpts& o) {
  const auto m = funtf::read_matrix_file(o.input);
  const auto dec = funtf::decompose_unit_norm(m, o.count);
  if (!o.output.empty())
    funtf::write_frame_file(o.output, funtf::UnitVectorSystem(m.dim(), dec.vectors));

  if (o.as_json) {
    json j;
    j["command"] = "decompose";
    j["version"] = funtf::kVersion;
    j["inputs"] = {{"input", o.input}, {"count", o.count}};
    if (!o.output.empty()) j["inputs"]["output"] = o.output;
    j["dim"] = m.dim();
    j["reconstruction_residual"] = dec.reconstruction_residual;
    emit(j, true);
  } else {
    std::cout << "command: decompose\n"
              << "input: " << o.input << "\n"
              << "dim: " << m.dim() << "\n"
              << "count: " << o.count << "\n"
              << "reconstruction_residual: " << format_real(dec.reconstruction_residual) << "\n";
    if (!o.output.empty()) std::cout << "wrote: " << o.output << "\n";
  }
  return 0;
}

struct EllipsoidOpts {
  std::string input;
  std::string output;
  bool as_json = false;
};

int run_ellipsoid(const EllipsoidOpts& o) {
  const auto m = funtf::read_matrix_file(o.input);
  const funtf::Ellipsoid e(m);
  const auto zs = funtf::equal_norm_orthogonal(e);
  const double rho = funtf::rho_target(m);

  double max_norm_err = 0.0, max_form_err = 0.0, max_dot_err = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    max_norm_err = std::max(max_norm_err, std::fabs(funtf::norm(zs[i]) - rho));
    const auto mz = funtf::matvec(m.mat(), zs[i]);
    max_form_err = std::max(max_form_err, std::fabs(funtf::dot(zs[i], mz) - 1.0));
    for (std::size_t k = i + 1; k < zs.size(); ++k)
      max_dot_err = std::max(max_dot_err, std::fabs(funtf::dot(zs[i], zs[k])));
  }
  const bool ok = max_norm_err <= 1e-9 && max_form_err <= 1e-9 && max_dot_err <= 1e-9;
  if (!o.output.empty()) funtf::write_points_file(o.output, m.dim(), zs);

  if (o.as_json) {
    json j;
    j["command"] = "ellipsoid";
    j["version"] = funtf::kVersion;
    j["inputs"] = {{"input", o.input}};
    if (!o.output.empty()) j["inputs"]["output"] = o.output;
    j["dim"] = m.dim();
    j["rho"] = rho;
    j["max_norm_error"] = max_norm_err;
    j["max_form_error"] = max_form_err;
    j["max_dot_error"] = max_dot_err;
    j["certified"] = ok;
    emit(j, true);
  } else {
    std::cout << "command: ellipsoid\n"
              << "input: " << o.input << "\n"
              << "dim: " << m.dim() << "\n"
              << "rho: " << format_real(rho) << "\n"
              << "max_norm_error: " << format_real(max_norm_err) << "\n"
              << "max_form_error: " << format_real(max_form_err) << "\n"
              << "max_dot_error: " << format_real(max_dot_err) << "\n"
              << "certified: " << yn(ok) << "\n";
    if (!o.output.empty()) std::cout << "wrote: " << o.output << "\n";
  }
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unit-norm tight frame construction, certification, and decomposition"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("funtf ") + funtf::kVersion);

  GenerateOpts gen;
  auto* cmd_gen = app.add_subcommand("generate", "minimize the frame potential from random starts");
  cmd_gen->add_option("--dim", gen.dim, "ambient dimension")->required()->check(CLI::Range(std::size_t{1}, std::size_t{10000}));
  cmd_gen->add_option("--count", gen.count, "number of unit vectors")->required()->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  cmd_gen->add_option("--seed", gen.seed, "random seed (retries seed+1.. on failure)");
  cmd_gen->add_option("--tol", gen.tol, "certification tolerance");
  cmd_gen->add_option("--output,-o", gen.output, "write the final system to this file");
  cmd_gen->add_flag("--json", gen.as_json, "machine readable report on stdout");
  cmd_gen->add_flag("--trajectory", gen.trajectory, "include the per-iteration history");

  MinimizeOpts mino;
  auto* cmd_min = app.add_subcommand("minimize", "refine an existing system of unit vectors");
  cmd_min->add_option("input", mino.input, "unit vector system file")->required();
  cmd_min->add_option("--tol", mino.tol, "certification tolerance");
  cmd_min->add_option("--output,-o", mino.output, "write the final system to this file");
  cmd_min->add_flag("--json", mino.as_json, "machine readable report on stdout");
  cmd_min->add_flag("--trajectory", mino.trajectory, "include the per-iteration history");

  CheckOpts chk;
  auto* cmd_chk = app.add_subcommand("check", "certify tightness of a unit vector system");
  cmd_chk->add_option("input", chk.input, "unit vector system file")->required();
  cmd_chk->add_option("--tol", chk.tol, "certification tolerance");
  cmd_chk->add_flag("--json", chk.as_json, "machine readable report on stdout");

  CheckOpts pot;
  auto* cmd_pot = app.add_subcommand("potential", "report the frame potential and its lower bound");
  cmd_pot->add_option("input", pot.input, "unit vector system file")->required();
  cmd_pot->add_option("--tol", pot.tol, "certification tolerance");
  cmd_pot->add_flag("--json", pot.as_json, "machine readable report on stdout");

  DecomposeOpts dec;
  auto* cmd_dec = app.add_subcommand("decompose",
                                     "write a trace-N positive semidefinite matrix as a sum of N "
                                     "unit rank-one terms");
  cmd_dec->add_option("input", dec.input, "symmetric matrix file")->required();
  cmd_dec->add_option("--count", dec.count, "number of rank-one terms (must equal the trace)")->required();
  cmd_dec->add_option("--output,-o", dec.output, "write the vectors to this file");
  cmd_dec->add_flag("--json", dec.as_json, "machine readable report on stdout");

  EllipsoidOpts ell;
  auto* cmd_ell = app.add_subcommand("ellipsoid",
                                     "orthogonal equal-norm points on the unit level set of a "
                                     "positive definite form");
  cmd_ell->add_option("input", ell.input, "symmetric matrix file")->required();
  cmd_ell->add_option("--output,-o", ell.output, "write the points to this file");
  cmd_ell->add_flag("--json", ell.as_json, "machine readable report on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (cmd_gen->parsed()) return run_generate(gen);
    if (cmd_min->parsed()) return run_minimize(mino);
    if (cmd_chk->parsed()) return run_check(chk, "check", /*gate=*/true);
    if (cmd_pot->parsed()) return run_check(pot, "potential", /*gate=*/false);
    if (cmd_dec->parsed()) return run_decompose(dec);
    if (cmd_ell->parsed()) return run_ellipsoid(ell);
  } catch (const funtf::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const funtf::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const funtf::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const funtf::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
