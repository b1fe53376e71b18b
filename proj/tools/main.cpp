#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rannlr/bench.hpp"
#include "rannlr/rescaling.hpp"
#include "rannlr/solver.hpp"

namespace {

using namespace rannlr;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SubroutineKind kind_from_flag(const std::string& s) {
  if (s == "sgd") return SubroutineKind::sgd;
  if (s == "svrg") return SubroutineKind::svrg;
  if (s == "full" || s == "full_gradient") return SubroutineKind::full_gradient;
  throw std::invalid_argument("unknown subroutine: " + s);
}

RescalingKind rescaling_from_flag(const std::string& s) {
  if (s == "exp") return RescalingKind::exp_extrapolated;
  if (s == "log") return RescalingKind::log_extrapolated;
  if (s == "fraction") return RescalingKind::fraction_extrapolated;
  throw std::invalid_argument("unknown rescaling kind: " + s);
}

// solver options shared by the bench and dump-sampling subcommands
struct SolverFlags {
  std::string subroutine = "svrg";
  double scaling_N = 100.0;
  double eps = 1e-4;
  long epoch_M = 20;
  double step = 1e-4;
  std::uint64_t seed = 0;
  long outer_K = 62;
  long check_interval = 1000;
  long max_inner = 100000;
  double lambda0_fill = 0.0;  // 0 means 1/m
  std::vector<double> x0;
  std::string sampling = "dual";
  std::string out = "report.json";
  std::string csv = "trajectory.csv";
};

void add_solver_options(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--subroutine", f.subroutine, "inner solver: sgd, svrg, or full")
      ->check(CLI::IsMember({"sgd", "svrg", "full"}));
  cmd->add_option("--scaling-N", f.scaling_N, "constraint scaling parameter N");
  cmd->add_option("--eps", f.eps, "inner stationarity tolerance");
  cmd->add_option("--epoch-M", f.epoch_M, "SVRG inner iterations per epoch");
  cmd->add_option("--step", f.step, "constant step size");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--outer-K", f.outer_K, "outer iterations");
  cmd->add_option("--check-interval", f.check_interval, "termination-check period");
  cmd->add_option("--max-inner", f.max_inner, "inner iteration budget per outer iteration");
  cmd->add_option("--lambda0-fill", f.lambda0_fill,
                  "initial value for every dual variable (default 1/m)");
  cmd->add_option("--x0", f.x0, "initial point components")->delimiter(',');
  cmd->add_option("--sampling", f.sampling, "index sampling: dual or uniform")
      ->check(CLI::IsMember({"dual", "uniform"}));
  cmd->add_option("--out", f.out, "JSON report path");
  cmd->add_option("--csv", f.csv, "CSV trajectory path");
}

SolverConfig config_from_flags(const SolverFlags& f, std::size_t m) {
  SolverConfig cfg;
  cfg.N = f.scaling_N;
  cfg.K = f.outer_K;
  cfg.eps = f.eps;
  cfg.target_eps = f.eps;
  cfg.subroutine.kind = kind_from_flag(f.subroutine);
  cfg.subroutine.step_mode = StepMode::constant;
  cfg.subroutine.constant_step = f.step;
  cfg.subroutine.epoch_length = f.epoch_M;
  cfg.subroutine.check_interval = f.check_interval;
  cfg.subroutine.max_inner_iters = f.max_inner;
  cfg.subroutine.sampling =
      f.sampling == "uniform" ? SamplingSource::uniform : SamplingSource::dual_proportional;
  const double fill = f.lambda0_fill > 0.0 ? f.lambda0_fill : 1.0 / static_cast<double>(m);
  cfg.lambda0.assign(m, fill);
  cfg.x0 = f.x0;
  cfg.master_seed = f.seed;
  return cfg;
}

void print_summary(const RunReport& report) {
  std::printf("%s: objective %.10g", report.algorithm.c_str(), report.final_objective);
  if (report.final_relative_gap)
    std::printf(", relative gap %.4g%%", 100.0 * *report.final_relative_gap);
  long cum = report.rows.empty() ? 0 : report.rows.back().cum_inner_iters;
  std::printf(", outer %zu, inner %ld, %.1f ms\n", report.rows.size(), cum, report.solve_ms);
}

void emit(const RunReport& report, const std::string& out, const std::string& csv) {
  write_file(out, report_json(report));
  write_file(csv, trajectory_csv(report));
  print_summary(report);
}

int run_solve(const std::string& config_path, const std::string& out, const std::string& csv) {
  const nlohmann::json doc = nlohmann::json::parse(read_file(config_path));
  if (!doc.contains("instance")) throw std::invalid_argument("config needs an \"instance\" key");
  const nlohmann::json inst = doc.at("instance");
  const std::string kind = inst.at("kind").get<std::string>();

  nlohmann::json solver_part = doc;
  solver_part.erase("instance");
  SolverConfig cfg = config_from_json_text(solver_part.dump());

  const std::string psi_kind = doc.value("rescaling", std::string("exp"));
  const double tau = doc.value("tau", -0.5);
  const RescalingFunction psi_fn = make_extrapolated(rescaling_from_flag(psi_kind), tau);

  if (kind == "sip") {
    const SipInstance p = build_sip(inst.at("m").get<std::size_t>());
    emit(solve(p, psi_fn, cfg), out, csv);
  } else if (kind == "alp") {
    AlpInstance p = build_alp(inst.value("precision", 0.2), inst.value("beta", 600.0));
    if (inst.value("lp_reference", true) && !p.reference_optimum)
      p.reference_optimum = -lp_reference(p).value;
    emit(solve(p, psi_fn, cfg), out, csv);
  } else {
    throw std::invalid_argument("unknown instance kind: " + kind);
  }
  return 0;
}

int run_bench_sip(const SolverFlags& f, std::size_t m) {
  const SipInstance p = build_sip(m);
  SolverConfig cfg = config_from_flags(f, p.m);
  if (cfg.x0.empty()) cfg.x0 = {0.0, 0.0};
  const RescalingFunction psi_fn = make_extrapolated(RescalingKind::exp_extrapolated, -0.5);
  emit(solve(p, psi_fn, cfg), f.out, f.csv);
  return 0;
}

int run_bench_alp(const SolverFlags& f, double precision, double beta, bool lp_ref) {
  AlpInstance p = build_alp(precision, beta);
  if (lp_ref) {
    const LpReference ref = lp_reference(p);
    p.reference_optimum = -ref.value;
  }
  SolverConfig cfg = config_from_flags(f, p.m);
  // the zero value function is strictly feasible; infeasible starts make the
  // dual transit far less predictable
  if (cfg.x0.empty()) cfg.x0 = {0.0, 0.0};
  const RescalingFunction psi_fn = make_extrapolated(RescalingKind::exp_extrapolated, -0.5);
  emit(solve(p, psi_fn, cfg), f.out, f.csv);
  return 0;
}

int run_baseline_sip(std::size_t m, long iters, double step, std::uint64_t seed,
                     const std::vector<double>& x0, const std::string& out,
                     const std::string& csv) {
  const SipInstance p = build_sip(m);
  Xoshiro256ss rng(seed);
  const std::vector<double> start = x0.empty() ? std::vector<double>{0.0, 0.0} : x0;
  emit(baseline_primal_dual(p, iters, step, rng, start), out, csv);
  return 0;
}

int run_check_psi(const std::string& kind, double tau, double lo, double hi, double step,
                  const std::string& out) {
  const RescalingFunction fn = make_extrapolated(rescaling_from_flag(kind), tau);
  std::vector<double> grid;
  for (double t = lo; t <= hi + 1e-12; t += step) grid.push_back(t);
  const PropertyReport rep = verify_properties(fn, grid);

  nlohmann::json j;
  j["kind"] = kind;
  j["tau"] = tau;
  j["grid"] = {{"lo", lo}, {"hi", hi}, {"step", step}, {"points", grid.size()}};
  j["zero_at_zero"] = rep.zero_at_zero;
  j["unit_slope_at_zero"] = rep.unit_slope_at_zero;
  j["positive_slope"] = rep.positive_slope;
  j["negative_curvature"] = rep.negative_curvature;
  j["quadratic_upper"] = rep.quadratic_upper;
  j["a"] = rep.a;
  j["tail_bounds"] = rep.tail_bounds;
  j["d1"] = rep.d1;
  j["d2"] = rep.d2;
  j["derivative_consistency"] = rep.derivative_consistency;
  j["all_pass"] = rep.all_pass();
  const std::string text = j.dump(2);
  std::printf("%s\n", text.c_str());
  if (!out.empty()) write_file(out, text);
  return rep.all_pass() ? 0 : 3;
}

int run_dump_sampling(const std::string& instance, const SolverFlags& f, std::size_t m,
                      double precision, double beta, const std::vector<long>& at_iters,
                      const std::string& prefix) {
  if (at_iters.empty()) throw std::invalid_argument("--at-iters needs at least one iteration");
  std::map<long, std::vector<double>> snapshots;
  for (long k : at_iters) snapshots[k] = {};

  const SolveObserver observer = [&](long completed, const std::vector<double>&,
                                     const DualState& d) {
    auto it = snapshots.find(completed);
    if (it == snapshots.end()) return;
    const SamplingDistribution dist = scaled_distribution(d);
    it->second = dist.probs;
  };

  const RescalingFunction psi_fn = make_extrapolated(RescalingKind::exp_extrapolated, -0.5);
  RunReport report;
  if (instance == "sip") {
    const SipInstance p = build_sip(m);
    SolverConfig cfg = config_from_flags(f, p.m);
    if (cfg.x0.empty()) cfg.x0 = {0.0, 0.0};
    report = solve(p, psi_fn, cfg, observer);
  } else if (instance == "alp") {
    const AlpInstance p = build_alp(precision, beta);
    SolverConfig cfg = config_from_flags(f, p.m);
    if (cfg.x0.empty()) cfg.x0 = {0.0, 0.0};
    report = solve(p, psi_fn, cfg, observer);
  } else {
    throw std::invalid_argument("unknown instance: " + instance);
  }

  for (const auto& [k, probs] : snapshots) {
    if (probs.empty()) {
      std::fprintf(stderr, "warning: run ended before iteration %ld, no dump written\n", k);
      continue;
    }
    SamplingDistribution d;
    d.probs = probs;
    const std::string path = prefix + "_" + std::to_string(k) + ".csv";
    write_file(path, sampling_csv(d));
    std::printf("wrote %s\n", path.c_str());
  }
  emit(report, f.out, f.csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized nonlinear-rescaling solver for heavily constrained convex programs"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "run from a JSON config file");
  std::string config_path, solve_out = "report.json", solve_csv = "trajectory.csv";
  solve_cmd->add_option("--config", config_path, "JSON config path")->required();
  solve_cmd->add_option("--out", solve_out, "JSON report path");
  solve_cmd->add_option("--csv", solve_csv, "CSV trajectory path");

  // bench sip / bench alp
  auto* bench = app.add_subcommand("bench", "built-in benchmark instances");
  bench->require_subcommand(1);
  auto* bench_sip = bench->add_subcommand("sip", "semi-infinite program benchmark");
  SolverFlags sip_flags;
  std::size_t sip_m = 0;
  bench_sip->add_option("--m", sip_m, "constraint count")->required();
  add_solver_options(bench_sip, sip_flags);

  auto* bench_alp = bench->add_subcommand("alp", "inventory-control approximate LP benchmark");
  SolverFlags alp_flags;
  alp_flags.scaling_N = 1000.0;
  alp_flags.eps = 1.0;
  alp_flags.epoch_M = 200;
  alp_flags.step = 0.005;
  alp_flags.outer_K = 30;
  alp_flags.max_inner = 20000;
  double alp_precision = 0.2, alp_beta = 600.0;
  bool alp_lp_ref = true;
  bench_alp->add_option("--precision", alp_precision, "grid step h");
  bench_alp->add_option("--beta", alp_beta, "constraint normalization divisor");
  bench_alp->add_flag("!--no-lp-ref", alp_lp_ref, "skip the exact-LP reference computation");
  add_solver_options(bench_alp, alp_flags);

  // baseline sip
  auto* baseline = app.add_subcommand("baseline", "projected primal-dual subgradient baseline");
  baseline->require_subcommand(1);
  auto* baseline_sip = baseline->add_subcommand("sip", "baseline on the SIP benchmark");
  std::size_t base_m = 0;
  long base_iters = 30000;
  double base_step = 1e-4;
  std::uint64_t base_seed = 0;
  std::vector<double> base_x0;
  std::string base_out = "report.json", base_csv = "trajectory.csv";
  baseline_sip->add_option("--m", base_m, "constraint count")->required();
  baseline_sip->add_option("--iters", base_iters, "iteration count");
  baseline_sip->add_option("--step", base_step, "step size");
  baseline_sip->add_option("--seed", base_seed, "seed (kept for interface uniformity)");
  baseline_sip->add_option("--x0", base_x0, "initial point components")->delimiter(',');
  baseline_sip->add_option("--out", base_out, "JSON report path");
  baseline_sip->add_option("--csv", base_csv, "CSV trajectory path");

  // check-psi
  auto* check = app.add_subcommand("check-psi", "verify the rescaling-function properties");
  std::string psi_kind = "exp", check_out;
  double psi_tau = -0.5, grid_lo = -5.0, grid_hi = 5.0, grid_step = 0.01;
  check->add_option("--kind", psi_kind, "base function: exp, log, or fraction")
      ->check(CLI::IsMember({"exp", "log", "fraction"}));
  check->add_option("--tau", psi_tau, "extrapolation point in (-1,0)");
  check->add_option("--grid-lo", grid_lo, "grid lower end");
  check->add_option("--grid-hi", grid_hi, "grid upper end");
  check->add_option("--step", grid_step, "grid step");
  check->add_option("--out", check_out, "also write the JSON report here");

  // dump-sampling
  auto* dump = app.add_subcommand("dump-sampling",
                                  "emit the adaptive sampling distribution at chosen iterations");
  std::string dump_instance = "alp";
  SolverFlags dump_flags;
  dump_flags.scaling_N = 1000.0;
  dump_flags.eps = 1.0;
  dump_flags.epoch_M = 200;
  dump_flags.step = 0.005;
  dump_flags.outer_K = 90;
  dump_flags.max_inner = 20000;
  std::size_t dump_m = 10000;
  double dump_precision = 0.2, dump_beta = 600.0;
  std::vector<long> at_iters;
  std::string dump_prefix = "sampling";
  dump->add_option("instance", dump_instance, "sip or alp")
      ->check(CLI::IsMember({"sip", "alp"}));
  dump->add_option("--at-iters", at_iters, "outer iterations to dump at")
      ->delimiter(',')
      ->required();
  dump->add_option("--m", dump_m, "constraint count (sip)");
  dump->add_option("--precision", dump_precision, "grid step h (alp)");
  dump->add_option("--beta", dump_beta, "normalization divisor (alp)");
  dump->add_option("--out-prefix", dump_prefix, "prefix for the per-iteration CSV files");
  add_solver_options(dump, dump_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(config_path, solve_out, solve_csv);
    if (bench_sip->parsed()) return run_bench_sip(sip_flags, sip_m);
    if (bench_alp->parsed()) return run_bench_alp(alp_flags, alp_precision, alp_beta, alp_lp_ref);
    if (baseline_sip->parsed()) return run_baseline_sip(base_m, base_iters, base_step, base_seed,
                                                        base_x0, base_out, base_csv);
    if (check->parsed())
      return run_check_psi(psi_kind, psi_tau, grid_lo, grid_hi, grid_step, check_out);
    if (dump->parsed())
      return run_dump_sampling(dump_instance, dump_flags, dump_m, dump_precision, dump_beta,
                               at_iters, dump_prefix);
    std::fprintf(stderr, "no subcommand selected\n");
    return 2;
  } catch (const SolverAbort& e) {
    std::fprintf(stderr, "solver abort: %s\n", e.what());
    return 3;
  } catch (const EvalError& e) {
    std::fprintf(stderr, "evaluation error at constraint %zu: %s\n", e.index, e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
