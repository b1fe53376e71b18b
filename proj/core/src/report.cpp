#include <algorithm>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "rannlr/solver.hpp"

namespace rannlr {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* to_string(SubroutineKind k) {
  switch (k) {
    case SubroutineKind::sgd: return "sgd";
    case SubroutineKind::svrg: return "svrg";
    case SubroutineKind::full_gradient: return "full_gradient";
  }
  return "?";
}

SubroutineKind subroutine_kind_from(const std::string& s) {
  if (s == "sgd") return SubroutineKind::sgd;
  if (s == "svrg") return SubroutineKind::svrg;
  if (s == "full_gradient" || s == "full") return SubroutineKind::full_gradient;
  throw std::invalid_argument("unknown subroutine kind: " + s);
}

const char* to_string(SamplingSource s) {
  switch (s) {
    case SamplingSource::dual_proportional: return "dual_proportional";
    case SamplingSource::uniform: return "uniform";
    case SamplingSource::custom: return "custom";
  }
  return "?";
}

SamplingSource sampling_source_from(const std::string& s) {
  if (s == "dual_proportional") return SamplingSource::dual_proportional;
  if (s == "uniform") return SamplingSource::uniform;
  if (s == "custom") return SamplingSource::custom;
  throw std::invalid_argument("unknown sampling source: " + s);
}

json config_to_json(const SolverConfig& cfg) {
  json j;
  j["N"] = cfg.N;
  if (cfg.K)
    j["K"] = *cfg.K;
  else
    j["K"] = nullptr;
  j["eps"] = cfg.eps;
  j["delta"] = cfg.delta;
  j["target_eps"] = cfg.target_eps;
  j["budget_mode"] = cfg.budget_mode == BudgetMode::theory ? "theory" : "adaptive";
  j["master_seed"] = cfg.master_seed;

  json sub;
  sub["kind"] = to_string(cfg.subroutine.kind);
  sub["step_mode"] = cfg.subroutine.step_mode == StepMode::theory ? "theory" : "constant";
  sub["constant_step"] = cfg.subroutine.constant_step;
  sub["epoch_length"] = cfg.subroutine.epoch_length;
  sub["check_interval"] = cfg.subroutine.check_interval;
  sub["max_inner_iters"] = cfg.subroutine.max_inner_iters;
  sub["sampling"] = to_string(cfg.subroutine.sampling);
  j["subroutine"] = sub;

  if (cfg.theory_constants) {
    const TheoryConstants& c = *cfg.theory_constants;
    j["theory_constants"] = {{"c_R", c.c_R},
                             {"C_Phi", c.C_Phi},
                             {"A", c.A},
                             {"B", c.B},
                             {"zeta", c.zeta},
                             {"alpha", c.alpha},
                             {"lambda_star_gap", c.lambda_star_gap},
                             {"x0_star_gap", c.x0_star_gap}};
  } else {
    j["theory_constants"] = nullptr;
  }

  // a constant lambda0 (the usual case) is echoed compactly even at m ~ 1e6
  if (cfg.lambda0.empty()) {
    j["lambda0"] = nullptr;
  } else if (std::all_of(cfg.lambda0.begin(), cfg.lambda0.end(),
                         [&](double v) { return v == cfg.lambda0.front(); })) {
    j["lambda0"] = {{"fill", cfg.lambda0.front()}, {"size", cfg.lambda0.size()}};
  } else {
    j["lambda0"] = cfg.lambda0;
  }
  if (cfg.x0.empty())
    j["x0"] = nullptr;
  else
    j["x0"] = cfg.x0;
  return j;
}

// tolerant of missing keys so hand-written configs can stay minimal
SolverConfig config_from_json(const json& j) {
  SolverConfig cfg;
  cfg.N = j.value("N", cfg.N);
  if (j.contains("K") && !j.at("K").is_null()) cfg.K = j.at("K").get<long>();
  cfg.eps = j.value("eps", cfg.eps);
  cfg.delta = j.value("delta", cfg.delta);
  cfg.target_eps = j.value("target_eps", cfg.target_eps);
  cfg.budget_mode = j.value("budget_mode", std::string("adaptive")) == "theory"
                        ? BudgetMode::theory
                        : BudgetMode::adaptive;
  cfg.master_seed = j.value("master_seed", cfg.master_seed);

  if (j.contains("subroutine")) {
    const json& sub = j.at("subroutine");
    if (sub.contains("kind"))
      cfg.subroutine.kind = subroutine_kind_from(sub.at("kind").get<std::string>());
    cfg.subroutine.step_mode = sub.value("step_mode", std::string("constant")) == "theory"
                                   ? StepMode::theory
                                   : StepMode::constant;
    cfg.subroutine.constant_step = sub.value("constant_step", cfg.subroutine.constant_step);
    cfg.subroutine.epoch_length = sub.value("epoch_length", cfg.subroutine.epoch_length);
    cfg.subroutine.check_interval = sub.value("check_interval", cfg.subroutine.check_interval);
    cfg.subroutine.max_inner_iters = sub.value("max_inner_iters", cfg.subroutine.max_inner_iters);
    if (sub.contains("sampling"))
      cfg.subroutine.sampling = sampling_source_from(sub.at("sampling").get<std::string>());
  }

  if (j.contains("theory_constants") && !j.at("theory_constants").is_null()) {
    const json& c = j.at("theory_constants");
    TheoryConstants tc;
    tc.c_R = c.value("c_R", tc.c_R);
    tc.C_Phi = c.value("C_Phi", tc.C_Phi);
    tc.A = c.value("A", tc.A);
    tc.B = c.value("B", tc.B);
    tc.zeta = c.value("zeta", tc.zeta);
    tc.alpha = c.value("alpha", tc.alpha);
    tc.lambda_star_gap = c.value("lambda_star_gap", tc.lambda_star_gap);
    tc.x0_star_gap = c.value("x0_star_gap", tc.x0_star_gap);
    cfg.theory_constants = tc;
  }

  if (j.contains("lambda0")) {
    const json& lam = j.at("lambda0");
    if (lam.is_object()) {
      cfg.lambda0.assign(lam.at("size").get<std::size_t>(), lam.at("fill").get<double>());
    } else if (lam.is_array()) {
      cfg.lambda0 = lam.get<std::vector<double>>();
    }
  }
  if (j.contains("x0") && !j.at("x0").is_null())
    cfg.x0 = j.at("x0").get<std::vector<double>>();
  return cfg;
}

}  // namespace

std::string config_json(const SolverConfig& cfg) { return config_to_json(cfg).dump(2); }

SolverConfig config_from_json_text(const std::string& text) {
  return config_from_json(json::parse(text));
}

std::string report_json(const RunReport& report) {
  json j;
  j["algorithm"] = report.algorithm;
  j["seed"] = report.seed;
  j["config"] = config_to_json(report.config);

  json rows = json::array();
  for (const IterationRow& r : report.rows) {
    rows.push_back({{"k", r.k},
                    {"f", r.f},
                    {"max_violation", r.max_violation},
                    {"stationarity", r.stationarity},
                    {"inner_iters", r.inner_iters},
                    {"cum_inner_iters", r.cum_inner_iters},
                    {"wall_ms", r.wall_ms},
                    {"lambda_min", r.lambda_min},
                    {"lambda_max", r.lambda_max},
                    {"lambda_l1", r.lambda_l1}});
  }
  j["iterations"] = rows;
  j["final_x"] = report.final_x;
  j["final_objective"] = report.final_objective;
  if (report.reference_optimum)
    j["reference_optimum"] = *report.reference_optimum;
  else
    j["reference_optimum"] = nullptr;
  if (report.final_relative_gap)
    j["final_relative_gap"] = *report.final_relative_gap;
  else
    j["final_relative_gap"] = nullptr;
  j["precompute_ms"] = report.precompute_ms;
  j["solve_ms"] = report.solve_ms;
  return j.dump(2);
}

RunReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  RunReport report;
  report.algorithm = j.at("algorithm").get<std::string>();
  report.seed = j.at("seed").get<std::uint64_t>();
  report.config = config_from_json(j.at("config"));
  for (const json& r : j.at("iterations")) {
    IterationRow row;
    row.k = r.at("k").get<long>();
    row.f = r.at("f").get<double>();
    row.max_violation = r.at("max_violation").get<double>();
    row.stationarity = r.at("stationarity").get<double>();
    row.inner_iters = r.at("inner_iters").get<long>();
    row.cum_inner_iters = r.at("cum_inner_iters").get<long>();
    row.wall_ms = r.at("wall_ms").get<double>();
    row.lambda_min = r.at("lambda_min").get<double>();
    row.lambda_max = r.at("lambda_max").get<double>();
    row.lambda_l1 = r.at("lambda_l1").get<double>();
    report.rows.push_back(row);
  }
  report.final_x = j.at("final_x").get<std::vector<double>>();
  report.final_objective = j.at("final_objective").get<double>();
  if (!j.at("reference_optimum").is_null())
    report.reference_optimum = j.at("reference_optimum").get<double>();
  if (!j.at("final_relative_gap").is_null())
    report.final_relative_gap = j.at("final_relative_gap").get<double>();
  report.precompute_ms = j.at("precompute_ms").get<double>();
  report.solve_ms = j.at("solve_ms").get<double>();
  return report;
}

std::string trajectory_csv(const RunReport& report, bool include_wall_ms) {
  std::string out = include_wall_ms
                        ? "k,f,max_violation,stationarity,inner_iters,cum_inner_iters,wall_ms\n"
                        : "k,f,max_violation,stationarity,inner_iters,cum_inner_iters\n";
  for (const IterationRow& r : report.rows) {
    out += std::to_string(r.k);
    out += ',';
    out += fmt17(r.f);
    out += ',';
    out += fmt17(r.max_violation);
    out += ',';
    out += fmt17(r.stationarity);
    out += ',';
    out += std::to_string(r.inner_iters);
    out += ',';
    out += std::to_string(r.cum_inner_iters);
    if (include_wall_ms) {
      out += ',';
      out += fmt17(r.wall_ms);
    }
    out += '\n';
  }
  return out;
}

std::string sampling_csv(const SamplingDistribution& dist) {
  std::string out = "constraint_index,prob\n";
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += fmt17(dist.probs[i]);
    out += '\n';
  }
  return out;
}

}  // namespace rannlr
