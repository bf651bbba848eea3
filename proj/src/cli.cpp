#include "fko/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fko/harness.hpp"
#include "fko/two_sat.hpp"
#include "fko/verifier.hpp"
#include "fko/witness.hpp"

namespace fko {

namespace {

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    // "start:stop:step", stop inclusive up to rounding.
    double start, stop, step;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0.0)
      throw CLI::ValidationError("--grid", "expected start:stop:step with positive step");
    for (double v = start; v <= stop + 1e-9 * step; v += step) out.push_back(v);
  } else {
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  }
  if (out.empty()) throw CLI::ValidationError("--grid", "empty grid");
  return out;
}

SweepSpec::Algo parse_algo(const std::string& name) {
  if (name == "sampling" || name == "random_sampling") return SweepSpec::Algo::kRandomSampling;
  if (name == "focused") return SweepSpec::Algo::kFocused;
  if (name == "2sat" || name == "two_sat") return SweepSpec::Algo::kTwoSat;
  throw CLI::ValidationError("--algo", "unknown algorithm: " + name);
}

void print_fit(const TransitionFit& fit) {
  if (fit.model == TransitionFit::Model::kSigmoid) {
    std::printf("model sigmoid\n");
    std::printf("alpha0 %.10g +- %.4g\n", fit.params[0], fit.std_errs[0]);
    std::printf("delta %.10g +- %.4g\n", fit.params[1], fit.std_errs[1]);
  } else {
    std::printf("model power_law\n");
    std::printf("c %.10g +- %.4g\n", fit.params[0], fit.std_errs[0]);
    std::printf("b %.10g +- %.4g\n", fit.params[1], fit.std_errs[1]);
  }
  std::printf("residual_norm %.6g\n", fit.residual_norm);
  std::printf("points %d\n", fit.n_points);
}

int run_gen(int32_t n, int64_t m, uint64_t seed, const std::string& out_path) {
  const Formula f = generate_random_3sat(n, m, seed);
  if (out_path.empty())
    write_dimacs(f, std::cout);
  else
    write_dimacs_file(f, out_path);
  return kExitSuccess;
}

int run_refute(const std::string& cnf_path, const std::string& algo, double gamma,
               int32_t reuse_cap, uint64_t seed, uint64_t budget, const std::string& lambda_mode,
               bool trace, const std::string& out_path) {
  const Formula f = read_dimacs_file(cnf_path);
  SearchConfig cfg;
  cfg.seed = seed;
  cfg.budget = budget;
  cfg.lambda_mode = lambda_mode_from_name(lambda_mode);
  cfg.record_c_trace = trace;
  WitnessCertificate cert;
  if (algo == "sampling" || algo == "random_sampling") {
    cfg.algorithm = SearchConfig::Algorithm::kRandomSampling;
    cfg.gamma = gamma;
    cert = random_sampling_search(f, cfg);
  } else if (algo == "focused") {
    cfg.algorithm = SearchConfig::Algorithm::kFocused;
    cfg.reuse_cap = reuse_cap;
    cert = focused_local_search(f, cfg);
  } else {
    throw CLI::ValidationError("--algo", "unknown algorithm: " + algo);
  }
  if (!out_path.empty()) write_certificate_file(cert, out_path);
  std::printf("verdict %s\n", cert.verdict.c_str());
  std::printf("C %lld\n", static_cast<long long>(cert.bound_c));
  std::printf("m2_upp %.10g\n", cert.m2_upp);
  std::printf("t %llu\n", static_cast<unsigned long long>(cert.t));
  std::printf("attempts %llu\n", static_cast<unsigned long long>(cert.attempts));
  std::printf("lambda %.10g (%s)\n", cert.lambda, cert.lambda_mode.c_str());
  return cert.refuted() ? kExitSuccess : kExitUnknown;
}

int run_verify(const std::string& cnf_path, const std::string& cert_path,
               const std::string& lambda_mode) {
  const Formula f = read_dimacs_file(cnf_path);
  WitnessCertificate cert;
  try {
    cert = read_certificate_file(cert_path);
  } catch (const CertificateFormatError& e) {
    std::printf("malformed certificate: %s\n", e.what());
    return kExitMalformed;
  }
  const LambdaMode mode = lambda_mode.empty() ? lambda_mode_from_name(cert.lambda_mode)
                                              : lambda_mode_from_name(lambda_mode);
  const Verdict v = verify_certificate(f, cert, mode);
  if (v.accepted) {
    std::printf("accept (lambda mode %s)\n", v.lambda_mode.c_str());
    std::printf("C %lld > m2_upp %.10g\n", static_cast<long long>(v.bound_c), v.m2_upp);
    return kExitSuccess;
  }
  std::printf("reject: %s\n", reject_reason_name(v.reason));
  if (!v.detail.empty()) std::printf("detail: %s\n", v.detail.c_str());
  return kExitReject;
}

int run_2sat(const std::string& cnf_path, int32_t seed_size) {
  const Formula f = read_dimacs_file(cnf_path);
  const RefuteOutcome outcome = two_sat_refute(f, seed_size);
  if (outcome == RefuteOutcome::kProvenUnsat) {
    std::printf("proven_unsat\n");
    return kExitSuccess;
  }
  std::printf("unknown\n");
  return kExitUnknown;
}

int run_sweep_cmd(const SweepSpec& spec, const std::string& out_path) {
  const std::vector<SweepRow> rows = run_sweep(spec);
  if (out_path.empty()) {
    write_sweep_csv(std::cout, spec, rows);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
    write_sweep_csv(out, spec, rows);
  }
  return kExitSuccess;
}

int run_fit(const std::string& model, const std::string& input, std::string x_col,
            std::string y_col) {
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot open " + input);
  const CsvTable table = read_csv(in);
  const bool sigmoid = model == "sigmoid";
  if (!sigmoid && model != "power" && model != "power_law")
    throw CLI::ValidationError("--model", "expected sigmoid or power");
  if (x_col.empty()) x_col = sigmoid ? "alpha" : "N";
  if (y_col.empty()) y_col = sigmoid ? "prob" : "alpha0";
  const int64_t xi = table.column_index(x_col);
  const int64_t yi = table.column_index(y_col);
  if (xi < 0) throw std::runtime_error("CSV lacks column " + x_col);
  if (yi < 0) throw std::runtime_error("CSV lacks column " + y_col);
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : table.rows)
    pts.emplace_back(row[static_cast<size_t>(xi)], row[static_cast<size_t>(yi)]);
  print_fit(sigmoid ? fit_sigmoid(pts) : fit_power_law(pts));
  return kExitSuccess;
}

}  // namespace

int cli_dispatch(int argc, char** argv) {
  CLI::App app{"FKO unsatisfiability witnesses for random 3-SAT"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success/refuted/accept/proven-unsat, 1 error,\n"
      "10 unknown verdict, 11 certificate rejected, 12 malformed certificate.");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random 3-SAT instance as DIMACS CNF");
  int32_t gen_n = 100;
  int64_t gen_m = 400;
  uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("-n,--vars", gen_n, "variable count")->required();
  gen->add_option("-m,--clauses", gen_m, "clause count")->required();
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("-o,--output", gen_out, "output path (default stdout)");

  // refute
  auto* refute = app.add_subcommand("refute", "Search for an UNSAT witness on one instance");
  std::string ref_cnf, ref_algo = "focused", ref_lambda = "est", ref_out;
  double ref_gamma = 0.5;
  int32_t ref_reuse = 1;
  uint64_t ref_seed = 1, ref_budget = 0;
  bool ref_trace = false;
  refute->add_option("cnf", ref_cnf, "DIMACS CNF path")->required();
  refute->add_option("--algo", ref_algo, "sampling | focused (default focused)");
  refute->add_option("--gamma", ref_gamma, "sampling: variable-selection exponent");
  refute->add_option("--reuse-cap,-S", ref_reuse, "focused: reuse cap S");
  refute->add_option("--seed", ref_seed, "RNG seed");
  refute->add_option("--budget", ref_budget, "core attempts (0 = default)");
  refute->add_option("--lambda-mode", ref_lambda, "est | cert");
  refute->add_flag("--trace", ref_trace, "record C after every core in the certificate");
  refute->add_option("-o,--output", ref_out, "certificate output path");

  // verify
  auto* verify = app.add_subcommand("verify", "Independently check a witness certificate");
  std::string ver_cnf, ver_cert, ver_lambda;
  verify->add_option("cnf", ver_cnf, "DIMACS CNF path")->required();
  verify->add_option("certificate", ver_cert, "certificate JSON path")->required();
  verify->add_option("--lambda-mode", ver_lambda, "est | cert (default: certificate's mode)");

  // 2sat
  auto* twosat = app.add_subcommand("2sat", "Baseline 2-SAT branch refuter");
  std::string ts_cnf;
  int32_t ts_seed_size = 2;
  twosat->add_option("cnf", ts_cnf, "DIMACS CNF path")->required();
  twosat->add_option("-s,--seed-size", ts_seed_size, "highest-degree seed set size");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Success-probability sweep over (N, alpha)");
  std::string sw_algo = "focused", sw_grid, sw_mscale = "alpha", sw_lambda = "est", sw_out;
  std::vector<int32_t> sw_n;
  int32_t sw_instances = 20, sw_reuse = 1, sw_seed_size = 2, sw_jobs = 0;
  double sw_gamma = 0.5;
  uint64_t sw_seed = 1, sw_budget = 0;
  sweep->add_option("--algo", sw_algo, "sampling | focused | 2sat");
  sweep->add_option("-n,--vars", sw_n, "variable counts")->required()->delimiter(',');
  sweep->add_option("--grid", sw_grid, "alpha grid: start:stop:step or comma list")->required();
  sweep->add_option("--m-scale", sw_mscale, "alpha (M=aN) | cn2 (M=cN^2)");
  sweep->add_option("--instances", sw_instances, "instances per grid point");
  sweep->add_option("--gamma", sw_gamma, "sampling exponent");
  sweep->add_option("--reuse-cap,-S", sw_reuse, "focused reuse cap");
  sweep->add_option("--seed-size", sw_seed_size, "2sat seed set size");
  sweep->add_option("--budget", sw_budget, "core attempts per run (0 = default)");
  sweep->add_option("--lambda-mode", sw_lambda, "est | cert");
  sweep->add_option("--seed", sw_seed, "base RNG seed");
  sweep->add_option("--jobs", sw_jobs, "worker threads (0 = FKO_JOBS env or all cores)");
  sweep->add_option("-o,--output", sw_out, "CSV output path (default stdout)");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit a transition curve to sweep CSV data");
  std::string fit_model = "sigmoid", fit_input, fit_x, fit_y;
  fit->add_option("--model", fit_model, "sigmoid | power");
  fit->add_option("-i,--input", fit_input, "CSV path")->required();
  fit->add_option("--x-col", fit_x, "x column (default: alpha or N)");
  fit->add_option("--y-col", fit_y, "y column (default: prob or alpha0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gen->parsed()) return run_gen(gen_n, gen_m, gen_seed, gen_out);
    if (refute->parsed())
      return run_refute(ref_cnf, ref_algo, ref_gamma, ref_reuse, ref_seed, ref_budget, ref_lambda,
                        ref_trace, ref_out);
    if (verify->parsed()) return run_verify(ver_cnf, ver_cert, ver_lambda);
    if (twosat->parsed()) return run_2sat(ts_cnf, ts_seed_size);
    if (sweep->parsed()) {
      SweepSpec spec;
      spec.algo = parse_algo(sw_algo);
      spec.n_list = sw_n;
      spec.grid = parse_grid(sw_grid);
      if (sw_mscale == "alpha" || sw_mscale == "alpha_n")
        spec.m_scale = SweepSpec::MScale::kAlphaN;
      else if (sw_mscale == "cn2" || sw_mscale == "c_n2")
        spec.m_scale = SweepSpec::MScale::kCN2;
      else
        throw CLI::ValidationError("--m-scale", "expected alpha or cn2");
      spec.instances_per_point = sw_instances;
      spec.gamma = sw_gamma;
      spec.reuse_cap = sw_reuse;
      spec.twosat_seed_size = sw_seed_size;
      spec.budget = sw_budget;
      spec.lambda_mode = lambda_mode_from_name(sw_lambda);
      spec.base_seed = sw_seed;
      spec.jobs = sw_jobs;
      return run_sweep_cmd(spec, sw_out);
    }
    if (fit->parsed()) return run_fit(fit_model, fit_input, fit_x, fit_y);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}

}  // namespace fko
