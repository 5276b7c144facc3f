#include <algorithm>
#include <cmath>

#include "sdane/harness.hpp"

namespace sdane {

namespace {

ProblemInstance resolve_problem(const ExperimentConfig& cfg) {
  if (!cfg.problem_path.empty()) {
    try {
      return load_problem(cfg.problem_path);
    } catch (const std::exception& e) {
      throw IoError(std::string("problem load failed: ") + e.what());
    }
  }
  const auto& g = cfg.generator;
  if (g.contains("clients")) return problem_from_json(g);  // inline problem document
  const auto family = family_from_string(g.at("family").get<std::string>());
  const uint64_t seed = g.value("seed", 0ULL);
  switch (family) {
    case ProblemFamily::quadratic: {
      ProblemInstance p = gen_quadratic(g.at("n").get<int>(), g.at("m").get<int>(),
                                        g.at("d").get<int>(), g.at("L_max").get<double>(), seed);
      const double ridge = g.value("ridge", 0.0);
      return ridge > 0.0 ? with_ridge(p, ridge) : p;
    }
    case ProblemFamily::polyhedron:
      return gen_polyhedron(g.at("n").get<int>(), g.at("m_total").get<long>(),
                            g.at("d").get<int>(), g.at("radius").get<double>(), seed);
    case ProblemFamily::logreg:
      return gen_logreg(g.at("n").get<int>(), g.at("M").get<long>(), g.at("d").get<int>(),
                        g.at("alpha").get<double>(), seed);
  }
  throw ConfigError("unreachable generator family");
}

EstimateMethod estimate_mode_for(const ProblemInstance& p) {
  return p.family == ProblemFamily::quadratic ? EstimateMethod::exact_quadratic
                                              : EstimateMethod::probe_estimate;
}

double resolve_lambda(const ExperimentConfig& cfg, const ProblemInstance& p, int s) {
  switch (cfg.lambda_mode) {
    case LambdaMode::fixed:
      return cfg.lambda_fixed;
    case LambdaMode::adaptive:
      return cfg.adaptive_floor;
    case LambdaMode::two_delta:
      return 2.0 * estimate_sod(p, p.n, estimate_mode_for(p), 128, cfg.seed);
    case LambdaMode::budgeted: {
      const auto mode = estimate_mode_for(p);
      const double delta_s = estimate_sod(p, s, mode, 128, cfg.seed);
      const double ed_s = estimate_ed(p, s, mode, 128, cfg.seed);
      double lambda = 2.0 * (delta_s + ed_s);
      if (s < p.n && p.n >= 2) {
        const double zeta = estimate_bgv(p, 96, cfg.seed);
        const double frac = static_cast<double>(p.n - s) / static_cast<double>(p.n - 1);
        const double rounds_factor =
            cfg.algorithm == Algorithm::acc_sdane
                ? static_cast<double>(cfg.lambda_budget_rounds)
                : 1.0;  // the non-accelerated schedule has no round factor
        lambda += 4.0 * frac * rounds_factor * zeta * zeta /
                  (static_cast<double>(s) * cfg.target_eps);
      }
      return lambda;
    }
  }
  throw ConfigError("unreachable lambda mode");
}

struct PotentialInputs {
  const ProblemInstance& problem;
  const Vec& x_star;
  double f_star;
  double mu;
};

TraceRecord make_record(const PotentialInputs& pin, const ExperimentConfig& cfg,
                        const ServerState& state, double lambda_used, int s_used,
                        const TraceRecord* prev) {
  TraceRecord r;
  r.round = state.round;
  r.f_gap_last = pin.problem.f(state.x) - pin.f_star;
  r.f_gap_avg = pin.problem.f(state.averaged_output()) - pin.f_star;
  r.dist_sq_v = (state.v - pin.x_star).squaredNorm();
  r.dist_sq_x = (state.x - pin.x_star).squaredNorm();
  r.lambda_used = lambda_used;
  r.s_used = s_used;
  if (prev != nullptr) {
    r.cum_comm_rounds = prev->cum_comm_rounds;
    r.cum_vectors = prev->cum_vectors;
    r.cum_oracle_total = prev->cum_oracle_total;
    r.cum_oracle_parallel = prev->cum_oracle_parallel;
  }
  if (cfg.algorithm == Algorithm::sdane || cfg.algorithm == Algorithm::sppm)
    r.potential_sdane =
        r.f_gap_last / lambda_used + 0.5 * (1.0 + pin.mu / lambda_used) * r.dist_sq_v;
  if (cfg.algorithm == Algorithm::acc_sdane)
    r.potential_acc = state.A * r.f_gap_last + 0.5 * state.B * r.dist_sq_v;
  return r;
}

}  // namespace

RunResult run_experiment_detailed(const ExperimentConfig& cfg) {
  RunResult result;
  result.problem = resolve_problem(cfg);
  ProblemInstance& problem = result.problem;
  const int n = problem.n;

  if (!problem.x_star || !problem.f_star) reference_solve(problem, 1e-10);
  const Vec& x_star = *problem.x_star;
  const double f_star = *problem.f_star;

  int s = cfg.s == 0 ? n : cfg.s;
  if (s < 1 || s > n) throw ConfigError("config: s must be in [1, n]");
  if (cfg.algorithm == Algorithm::dane && s != n)
    throw ConfigError("config: dane runs with full participation (s = n)");
  if (cfg.algorithm == Algorithm::sppm && (n != 1 || s != 1))
    throw ConfigError("config: sppm needs a single-client problem");
  if (cfg.lambda_mode == LambdaMode::adaptive && s != n)
    throw ConfigError("config: adaptive lambda requires full participation");

  double mu = 0.0;
  switch (cfg.mu_mode) {
    case MuMode::exact: mu = std::max(0.0, problem.min_convexity()); break;
    case MuMode::zero: mu = 0.0; break;
    case MuMode::override_value: mu = cfg.mu_override; break;
  }

  const double lambda0 = resolve_lambda(cfg, problem, s);
  if (!(lambda0 > 0.0)) throw ConfigError("config: resolved lambda is not positive");
  result.lambda_initial = lambda0;
  result.mu_used = mu;

  Vec x0 = cfg.x0 ? *cfg.x0 : Vec(Vec::Zero(problem.d));
  if (x0.size() != problem.d) throw ConfigError("config: x0 dimension mismatch");
  result.d0_sq = (x0 - x_star).squaredNorm();

  std::unique_ptr<LocalSolver> solver;
  switch (cfg.solver) {
    case SolverKind::gd: solver = std::make_unique<GdSolver>(cfg.gd_step); break;
    case SolverKind::fgd: solver = std::make_unique<FgdSolver>(); break;
    case SolverKind::sgd:
      solver = std::make_unique<SgdSolver>(cfg.sgd_h, cfg.sgd_batch, cfg.sgd_check_every);
      break;
  }

  ServerState state = ServerState::initial(x0, lambda0, mu);
  RngStream master(cfg.seed);
  const PotentialInputs pin{problem, x_star, f_star, mu};
  RoundOptions opts;
  opts.adaptive_lambda = cfg.lambda_mode == LambdaMode::adaptive;
  opts.lambda_floor = cfg.adaptive_floor;

  result.records.push_back(make_record(pin, cfg, state, lambda0, s, nullptr));
  result.x_history.push_back(state.x);
  result.v_history.push_back(state.v);

  for (long r = 0; r < cfg.rounds; ++r) {
    std::vector<int> sample;
    if (s == n) {
      sample.resize(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) sample[static_cast<size_t>(i)] = i;
    } else {
      RngStream sampling_rng =
          master.substream(kRngSampling).substream(static_cast<uint64_t>(r));
      sample = sample_subset(n, s, sampling_rng).ids;
    }
    RngStream solver_rng = master.substream(kRngSolver).substream(static_cast<uint64_t>(r));

    RoundOutput out = [&]() {
      switch (cfg.algorithm) {
        case Algorithm::sdane:
        case Algorithm::sppm:
          return sdane_round(state, problem, sample, *solver, cfg.rule, solver_rng, opts);
        case Algorithm::acc_sdane:
          return acc_sdane_round(state, problem, sample, *solver, cfg.rule, solver_rng);
        case Algorithm::dane:
          return dane_round(state, problem, *solver, cfg.rule, solver_rng);
        case Algorithm::fedprox:
          return fedprox_round(state, problem, sample, *solver, cfg.rule, solver_rng);
        case Algorithm::sdane_dl:
          return sdane_dl_round(state, problem, sample, *solver, cfg.rule, solver_rng,
                                cfg.dl_option, cfg.dl_gamma, cfg.dl_eta);
      }
      throw ConfigError("unreachable algorithm");
    }();

    if (out.any_cap) {
      result.any_cap = true;
      if (cfg.cap_policy == CapPolicy::fail)
        throw SolverCapError("local solver hit its oracle cap at round " + std::to_string(r));
    }

    const double lambda_round = out.new_state.lambda;
    state = std::move(out.new_state);

    TraceRecord rec = make_record(pin, cfg, state, lambda_round, s, &result.records.back());
    rec.cum_comm_rounds += 1;
    rec.cum_vectors += out.comm_vectors_up + out.comm_vectors_down;
    long total = 0, widest = 0;
    for (const auto& res : out.per_client) {
      const long calls =
          out.center_oracle_calls_per_client + res.oracle_calls + res.stochastic_oracle_calls;
      total += calls;
      widest = std::max(widest, calls);
    }
    rec.cum_oracle_total += total;
    rec.cum_oracle_parallel += widest;
    result.records.push_back(rec);
    result.x_history.push_back(state.x);
    result.v_history.push_back(state.v);
    result.lambda_history.push_back(lambda_round);
    result.p_history.push_back(1.0 + mu / lambda_round);

    // With mu > 0 the target is measured on both the function gap and the
    // scaled squared distance of the output point.
    const bool last = cfg.output_metric_point == OutputPoint::last_x;
    const double gap = last ? rec.f_gap_last : rec.f_gap_avg;
    double dist_metric = 0.0;
    if (mu > 0.0) {
      const Vec point = last ? state.x : state.averaged_output();
      dist_metric = 0.5 * mu * (point - x_star).squaredNorm();
    }
    if (cfg.target_eps > 0.0 && gap <= cfg.target_eps && dist_metric <= cfg.target_eps) break;
  }
  result.final_state = std::move(state);
  return result;
}

std::vector<TraceRecord> run_experiment(const ExperimentConfig& cfg) {
  return run_experiment_detailed(cfg).records;
}

}  // namespace sdane
