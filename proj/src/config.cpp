#include <fstream>

#include "sdane/harness.hpp"

namespace sdane {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::sdane: return "sdane";
    case Algorithm::acc_sdane: return "acc_sdane";
    case Algorithm::dane: return "dane";
    case Algorithm::fedprox: return "fedprox";
    case Algorithm::sdane_dl: return "sdane_dl";
    case Algorithm::sppm: return "sppm";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "sdane") return Algorithm::sdane;
  if (name == "acc_sdane") return Algorithm::acc_sdane;
  if (name == "dane") return Algorithm::dane;
  if (name == "fedprox") return Algorithm::fedprox;
  if (name == "sdane_dl") return Algorithm::sdane_dl;
  if (name == "sppm") return Algorithm::sppm;
  throw ConfigError("unknown algorithm: " + name);
}

namespace {

[[noreturn]] void bad(const std::string& msg) { throw ConfigError("config: " + msg); }

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  if (!j.contains("problem")) bad("missing 'problem'");
  if (j["problem"].is_string())
    cfg.problem_path = j["problem"].get<std::string>();
  else if (j["problem"].is_object())
    cfg.generator = j["problem"];
  else
    bad("'problem' must be a path or a generator object");

  cfg.algorithm = algorithm_from_string(j.value("algorithm", std::string("sdane")));

  const auto lam = j.value("lambda", nlohmann::json("two_delta"));
  if (lam.is_string()) {
    const auto mode = lam.get<std::string>();
    if (mode == "two_delta")
      cfg.lambda_mode = LambdaMode::two_delta;
    else if (mode == "adaptive")
      cfg.lambda_mode = LambdaMode::adaptive;
    else
      bad("lambda mode must be 'two_delta', 'adaptive', {'fixed': x} or {'budgeted': R}");
  } else if (lam.is_object() && lam.contains("fixed")) {
    cfg.lambda_mode = LambdaMode::fixed;
    cfg.lambda_fixed = lam["fixed"].get<double>();
    if (!(cfg.lambda_fixed > 0.0)) bad("fixed lambda must be > 0");
  } else if (lam.is_object() && lam.contains("budgeted")) {
    cfg.lambda_mode = LambdaMode::budgeted;
    cfg.lambda_budget_rounds = lam["budgeted"].get<long>();
    if (cfg.lambda_budget_rounds < 1) bad("budgeted lambda needs R >= 1");
  } else {
    bad("unrecognized 'lambda'");
  }
  cfg.adaptive_floor = j.value("lambda_floor", 1e-2);
  if (!(cfg.adaptive_floor > 0.0)) bad("lambda_floor must be > 0");

  const auto mu = j.value("mu_mode", nlohmann::json("exact"));
  if (mu.is_string()) {
    const auto mode = mu.get<std::string>();
    if (mode == "exact")
      cfg.mu_mode = MuMode::exact;
    else if (mode == "zero")
      cfg.mu_mode = MuMode::zero;
    else
      bad("mu_mode must be 'exact', 'zero' or {'override': x}");
  } else if (mu.is_object() && mu.contains("override")) {
    cfg.mu_mode = MuMode::override_value;
    cfg.mu_override = mu["override"].get<double>();
    if (!(cfg.mu_override >= 0.0)) bad("mu override must be >= 0");
  } else {
    bad("unrecognized 'mu_mode'");
  }

  const auto solver = j.value("solver", nlohmann::json({{"gd", nlohmann::json::object()}}));
  if (solver.is_string() && solver.get<std::string>() == "fgd") {
    cfg.solver = SolverKind::fgd;
  } else if (solver.is_object() && solver.contains("gd")) {
    cfg.solver = SolverKind::gd;
    cfg.gd_step = solver["gd"].value("step", 0.0);
    if (cfg.gd_step < 0.0) bad("gd step must be >= 0 (0 = auto)");
  } else if (solver.is_object() && solver.contains("sgd")) {
    cfg.solver = SolverKind::sgd;
    const auto& sg = solver["sgd"];
    if (!sg.contains("H")) bad("sgd solver needs 'H'");
    cfg.sgd_h = sg["H"].get<double>();
    cfg.sgd_batch = sg.value("batch", 1);
    cfg.sgd_check_every = sg.value("check_every", 10);
    if (!(cfg.sgd_h > 0.0) || cfg.sgd_batch < 1 || cfg.sgd_check_every < 1)
      bad("sgd solver needs H > 0, batch >= 1, check_every >= 1");
  } else {
    bad("solver must be {'gd': {...}}, 'fgd' or {'sgd': {...}}");
  }

  const auto rule = j.value("rule", nlohmann::json::object());
  cfg.rule.kind = stop_kind_from_string(rule.value("kind", std::string("relative_grad")));
  cfg.rule.theta = rule.value("theta", 0.5);
  cfg.rule.slack = rule.value("slack", 0.0);
  cfg.rule.max_oracle_calls = rule.value("max_oracle_calls", 100000L);
  if (!(cfg.rule.theta > 0.0)) bad("rule theta must be > 0");
  if (cfg.rule.slack < 0.0) bad("rule slack must be >= 0");
  if (cfg.rule.max_oracle_calls < 1) bad("rule max_oracle_calls must be >= 1");

  cfg.s = j.value("s", 0);
  if (cfg.s < 0) bad("s must be >= 0 (0 = full participation)");
  cfg.rounds = j.value("rounds", 0L);
  if (cfg.rounds < 0) bad("rounds must be >= 0");
  cfg.target_eps = j.value("target_eps", 0.0);
  if (cfg.target_eps < 0.0) bad("target_eps must be >= 0");
  cfg.seed = j.value("seed", 0ULL);

  if (j.contains("output_metric_point")) {
    const auto op = j["output_metric_point"].get<std::string>();
    if (op == "last_x")
      cfg.output_metric_point = OutputPoint::last_x;
    else if (op == "weighted_avg")
      cfg.output_metric_point = OutputPoint::weighted_avg;
    else
      bad("output_metric_point must be 'last_x' or 'weighted_avg'");
    cfg.output_point_explicit = true;
  } else {
    // Last iterate carries the accelerated guarantee; the averaged point the
    // non-accelerated one.
    cfg.output_metric_point =
        cfg.algorithm == Algorithm::acc_sdane ? OutputPoint::last_x : OutputPoint::weighted_avg;
  }

  cfg.dl_option = j.value("dl_option", 1);
  cfg.dl_gamma = j.value("dl_gamma", 0.99);
  cfg.dl_eta = j.value("dl_eta", 0.0);

  const auto policy = j.value("cap_policy", std::string("continue"));
  if (policy == "fail")
    cfg.cap_policy = CapPolicy::fail;
  else if (policy == "continue")
    cfg.cap_policy = CapPolicy::keep_going;
  else
    bad("cap_policy must be 'fail' or 'continue'");

  if (j.contains("x0")) {
    const auto& arr = j["x0"];
    if (!arr.is_array()) bad("x0 must be an array");
    Vec x0(static_cast<Eigen::Index>(arr.size()));
    Eigen::Index k = 0;
    for (const auto& v : arr) x0(k++) = v.get<double>();
    cfg.x0 = std::move(x0);
  }

  // Cross-field checks that do not need the problem instance.
  if (cfg.lambda_mode == LambdaMode::budgeted && cfg.rounds < 1)
    bad("budgeted lambda requires 'rounds' to be set");
  if (cfg.lambda_mode == LambdaMode::budgeted && !(cfg.target_eps > 0.0))
    bad("budgeted lambda requires a positive 'target_eps'");
  if (cfg.lambda_mode == LambdaMode::adaptive &&
      !(cfg.algorithm == Algorithm::sdane || cfg.algorithm == Algorithm::sppm))
    bad("adaptive lambda is defined for sdane (and sppm)");
  if (cfg.solver == SolverKind::sgd && cfg.rule.kind != StopKind::stochastic_slack)
    bad("sgd solver requires the stochastic_slack rule");
  if (cfg.algorithm == Algorithm::sdane_dl && !(cfg.dl_eta > 0.0))
    bad("sdane_dl requires an explicit dl_eta > 0");
  if (cfg.algorithm == Algorithm::sdane_dl && !(cfg.dl_gamma >= 0.0 && cfg.dl_gamma <= 1.0))
    bad("sdane_dl requires dl_gamma in [0,1]");
  if (cfg.algorithm == Algorithm::dane && cfg.rule.kind != StopKind::dane_decaying)
    bad("dane uses the dane_decaying rule");
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return from_json(j);
}

}  // namespace sdane
