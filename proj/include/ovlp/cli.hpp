// Copyright 2026 The ovlp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OVLP_CLI_HPP
#define OVLP_CLI_HPP

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ovlp/json_io.hpp"
#include "ovlp/norms.hpp"
#include "ovlp/tensor.hpp"
#include "ovlp/verify.hpp"

namespace ovlp::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kAlert = 2 };

/// A QRV with the context it is measured against.
struct ComputeInput {
  QRV f;
  std::optional<DiscretePOVM> povm;  // absent for tensor inputs
  std::optional<MeasureContext> tensor_ctx;
};

/// Accepted layouts:
///   {"povm": <povm>, "f": <qrv>[, "rho": <state>]}
///   {"tensor": {"factors": [<povm>, <povm>], "base": <measure>}, "f": <qrv>}
///   <qrv> alone, measured against ν({x}) = I on every atom.
inline ComputeInput read_compute_input(const Json& j, TensorDefinition def) {
  ComputeInput in;
  if (j.is_object() && j.contains("values") && !j.contains("f")) {
    in.f = qrv_from_json(j, "");
    in.povm = DiscretePOVM(in.f.space(), in.f.dim(), std::vector<Matrix>(in.f.atoms(), identity(in.f.dim())));
    return in;
  }
  in.f = qrv_from_json(detail::field(j, "f", ""), "/f");
  if (j.contains("tensor")) {
    const Json& t = j["tensor"];
    const Json& factors = detail::field(t, "factors", "/tensor");
    if (!factors.is_array() || factors.size() != 2) throw JsonError("/tensor/factors", "expected two POVMs");
    const DiscretePOVM n1 = povm_from_json(factors[0], "/tensor/factors/0");
    const DiscretePOVM n2 = povm_from_json(factors[1], "/tensor/factors/1");
    const ScalarMeasure mu = measure_from_json(detail::field(t, "base", "/tensor"), "/tensor/base");
    in.tensor_ctx = tensor_context(n1, n2, mu, def);
    if (!(in.f.space() == mu.space) || in.f.dim() != n1.dim() * n2.dim())
      throw JsonError("/f", "QRV must live on the product space over the base sample space");
    return in;
  }
  in.povm = povm_from_json(detail::field(j, "povm", ""), "/povm");
  if (!(in.f.space() == in.povm->space()) || in.f.dim() != in.povm->dim())
    throw JsonError("/f", "QRV does not match the POVM's sample space and dimension");
  return in;
}

/// `--solver` takes inline JSON or a path to a JSON file.
inline SolverConfig read_solver(const std::string& arg) {
  if (arg.empty()) return {};
  const auto first = arg.find_first_not_of(" \t\r\n");
  const Json j = first != std::string::npos && arg[first] == '{' ? parse_json(arg) : read_json_file(arg);
  return config_from_json(j, "");
}

inline void emit(const Json& j, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw DomainError("cannot write '" + out_path + "'");
  f << j.dump(2) << "\n";
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

/// Recognises the JSON kinds the tool reads and writes, validates them, and
/// re-evaluates verdict-carrying documents.
inline Json validate_document(const Json& j) {
  if (!j.is_object()) throw JsonError("", "expected a JSON object");
  Json r = {{"valid", true}};
  if (j.contains("conjecture") && j.contains("f")) {
    const TriangleEval e = reverify_witness(j);
    r["kind"] = "search_witness";
    r["reverified"] = triangle_to_json(e);
    if (j.contains("evaluation") && j["evaluation"].contains("margin"))
      r["margin_matches"] = j["evaluation"]["margin"].get<double>() == e.margin;
  } else if (j.contains("suite") && j.contains("povm")) {
    const Instance in = instance_from_json(j, "");
    SuiteParams sp;
    const TrialOutcome o = check(in, sp);
    r["kind"] = "suite_instance";
    r["violated"] = o.violated;
    r["margin"] = o.margin;
  } else if (j.contains("suite") && j.contains("witnesses")) {
    r["kind"] = "verify_report";
    const Json& w = j["witnesses"];
    if (!w.is_array()) throw JsonError("/witnesses", "expected an array");
    for (std::size_t i = 0; i < w.size(); ++i)
      instance_from_json(detail::field(w[i], "instance", "/witnesses/" + std::to_string(i)),
                         "/witnesses/" + std::to_string(i) + "/instance");
    r["witnesses"] = w.size();
  } else if (j.contains("factors") && j.contains("base")) {
    const Json& factors = j["factors"];
    if (!factors.is_array() || factors.size() != 2) throw JsonError("/factors", "expected two POVMs");
    const DiscretePOVM n1 = povm_from_json(factors[0], "/factors/0");
    const DiscretePOVM n2 = povm_from_json(factors[1], "/factors/1");
    const ScalarMeasure mu = measure_from_json(j["base"], "/base");
    const DiscretePOVM t = tensor_povm(n1, n2, mu);
    r["kind"] = "tensor_povm";
    r["dim"] = t.dim();
  } else if (j.contains("effects")) {
    const DiscretePOVM nu = povm_from_json(j, "");
    r["kind"] = "povm";
    r["dim"] = nu.dim();
    r["atoms"] = nu.atoms();
  } else if (j.contains("role")) {
    const DensityOperator rho = state_from_json(j, "");
    r["kind"] = "state";
    r["dim"] = rho.dim();
  } else if (j.contains("values") || j.contains("f")) {
    const ComputeInput in = read_compute_input(j, TensorDefinition::kProduct);
    r["kind"] = j.contains("f") ? "compute_input" : "qrv";
    r["dim"] = in.f.dim();
    r["atoms"] = in.f.atoms();
  } else if (j.contains("weights")) {
    const ScalarMeasure mu = measure_from_json(j, "");
    r["kind"] = "scalar_measure";
    r["atoms"] = mu.weights.size();
  } else if (j.contains("entries")) {
    const Matrix m = matrix_from_json(j, "");
    r["kind"] = "matrix";
    r["dim"] = m.rows();
  } else {
    throw JsonError("", "unrecognised document");
  }
  return r;
}

/// Entry point; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"ovlp: norms of operator-valued random variables"};
  app.require_subcommand(1);

  std::string norm, input, rho_path, solver_arg, tensor_def = "product", out_path;
  auto* compute = app.add_subcommand("compute", "Compute a norm of a QRV instance");
  compute->add_option("--norm", norm, "p:x, one, inf, dec:x, smixed:p:q, naive:x, cand:x")->required();
  compute->add_option("--input", input, "Instance JSON")->required()->check(CLI::ExistingFile);
  compute->add_option("--rho", rho_path, "Reference state JSON (default I/dim)")->check(CLI::ExistingFile);
  compute->add_option("--solver", solver_arg, "Solver config as inline JSON or a file");
  compute->add_option("--tensor-def", tensor_def, "Tensor POVM definition for tensor inputs")
      ->check(CLI::IsMember({"product", "sqrt"}));
  compute->add_option("--out", out_path, "Write JSON here instead of stdout");

  std::string suite;
  int trials = 300, dims = 3, atoms = 4, workers = 1;
  std::uint64_t seed = 0;
  std::vector<double> exponents = {1.0, 1.5, 2.0, 3.0};
  double tol = SuiteParams{}.tol;
  bool oracle = SuiteParams{}.oracle_check;
  auto* verify = app.add_subcommand("verify", "Run a randomized property suite");
  verify->add_option("--suite", suite, "Suite id")->required();
  verify->add_option("--trials", trials, "Number of trials")->check(CLI::NonNegativeNumber);
  verify->add_option("--dims", dims, "Maximum dimension")->check(CLI::PositiveNumber);
  verify->add_option("--atoms", atoms, "Maximum number of atoms")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "Seed");
  verify->add_option("--exponents", exponents, "Exponents to sample from")->delimiter(',');
  verify->add_option("--tol", tol, "Absolute inequality tolerance (negative values demand slack)");
  verify->add_flag("--oracle-check,!--no-oracle-check", oracle,
                   "Cross-check brackets against the brute-force oracle at dim <= 2 (default on)");
  verify->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--solver", solver_arg, "Solver config as inline JSON or a file");
  verify->add_option("--out", out_path, "Write JSON here instead of stdout");

  std::string conjecture;
  int budget = 0, sdims = 2, satoms = 3;
  bool control = false;
  auto* search = app.add_subcommand("search", "Search for a counterexample to an open question");
  search->add_option("--conjecture", conjecture, "candidate_triangle:p or pnorm_vs_s1lp_comparability:p")->required();
  search->add_option("--budget", budget, "Number of random trials")->required()->check(CLI::NonNegativeNumber);
  search->add_option("--seed", seed, "Seed");
  search->add_option("--dims", sdims, "Maximum dimension")->check(CLI::PositiveNumber);
  search->add_option("--atoms", satoms, "Maximum number of atoms")->check(CLI::PositiveNumber);
  search->add_flag("--control", control, "Allow an exponent where the inequality is proved (integrity run)");
  search->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  search->add_option("--solver", solver_arg, "Solver config as inline JSON or a file");
  search->add_option("--out", out_path, "Write JSON here instead of stdout");

  auto* validate = app.add_subcommand("validate", "Validate a JSON document");
  validate->add_option("--input", input, "JSON document")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kDomainError;
  }

  try {
    if (*compute) {
      const NormId id = NormId::parse(norm);
      const SolverConfig cfg = read_solver(solver_arg);
      const TensorDefinition def = tensor_def == "sqrt" ? TensorDefinition::kSqrt : TensorDefinition::kProduct;
      const ComputeInput in = read_compute_input(read_json_file(input), def);
      std::optional<MeasureContext> ctx = in.tensor_ctx;
      if (!ctx) {
        if (!rho_path.empty()) {
          const DensityOperator rho = state_from_json(read_json_file(rho_path), "");
          ctx = MeasureContext(*in.povm, rho);
        } else {
          ctx = MeasureContext(*in.povm);
        }
      } else if (!rho_path.empty()) {
        throw DomainError("--rho does not apply to tensor inputs (the base measure plays its role)");
      }
      Json r = {{"norm", id.str()}};
      if (id.exact_formula()) {
        r["value"] = evaluate(id, in.f, *ctx, cfg).lower;
        err << id.str() << " = " << fmt(r["value"].get<double>()) << "\n";
      } else {
        const NormEstimate e = evaluate(id, in.f, *ctx, cfg);
        r.update(estimate_to_json(e));
        err << id.str() << " in [" << fmt(e.lower) << ", " << fmt(e.upper) << "] (" << e.method
            << (e.warning ? ", budget exhausted" : "") << ")\n";
      }
      emit(r, out_path, out);
      return kOk;
    }
    if (*verify) {
      SuiteParams sp;
      sp.max_dim = dims;
      sp.max_atoms = atoms;
      sp.exponents = exponents;
      sp.tol = tol;
      sp.oracle_check = oracle;
      sp.workers = workers;
      sp.solver = read_solver(solver_arg);
      const VerifyReport rep = run_suite(parse_suite(suite), trials, sp, seed);
      emit(rep.to_json(), out_path, out);
      err << "suite " << rep.suite << ": " << rep.trials << " trials, " << rep.violations << " violation(s), worst margin "
          << (std::isfinite(rep.worst_margin) ? fmt(rep.worst_margin) : std::string("n/a"));
      if (oracle) err << ", " << rep.oracle_checks << " oracle checks, " << rep.oracle_disagreements.size() << " disagreement(s)";
      err << (rep.passed() ? " -- PASS\n" : " -- FAIL: the suite checks proved results, so this indicates a library bug\n");
      return rep.passed() ? kOk : kAlert;
    }
    if (*search) {
      SearchParams sp;
      sp.max_dim = sdims;
      sp.max_atoms = satoms;
      sp.control = control;
      sp.workers = workers;
      sp.solver = read_solver(solver_arg);
      const ConjectureId id = ConjectureId::parse(conjecture);
      const SearchOutcome res = search_counterexample(id, budget, seed, sp);
      emit(res.to_json(), out_path, out);
      err << "search " << id.str() << ": " << res.trials_run << " trial(s), "
          << (res.found ? "certified counterexample found" : "exhausted") << "\n";
      return res.found ? kAlert : kOk;
    }
    if (*validate) {
      const Json r = validate_document(read_json_file(input));
      out << r.dump(2) << "\n";
      err << "valid " << r.value("kind", std::string("document")) << "\n";
      return kOk;
    }
  } catch (const JsonError& e) {
    err << "error: " << e.what() << "\n";
    if (*validate) out << Json({{"valid", false}, {"path", e.path()}, {"error", e.what()}}).dump(2) << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    if (*validate) out << Json({{"valid", false}, {"error", e.what()}}).dump(2) << "\n";
    return kDomainError;
  }
  return kDomainError;
}

}  // namespace ovlp::cli

#endif  // OVLP_CLI_HPP
