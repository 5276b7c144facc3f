#pragma once

#include <iosfwd>
#include <string>

#include "sdane/algorithms.hpp"

namespace sdane {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------
enum class Algorithm { sdane, acc_sdane, dane, fedprox, sdane_dl, sppm };
enum class LambdaMode { fixed, two_delta, adaptive, budgeted };
enum class MuMode { exact, zero, override_value };
enum class SolverKind { gd, fgd, sgd };
enum class OutputPoint { last_x, weighted_avg };
enum class CapPolicy { fail, keep_going };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

struct ExperimentConfig {
  std::string problem_path;      // exactly one of path / generator is set
  nlohmann::json generator;

  Algorithm algorithm{Algorithm::sdane};

  LambdaMode lambda_mode{LambdaMode::two_delta};
  double lambda_fixed{0.0};
  long lambda_budget_rounds{0};  // R of the budgeted schedule
  double adaptive_floor{1e-2};

  MuMode mu_mode{MuMode::exact};
  double mu_override{0.0};

  SolverKind solver{SolverKind::gd};
  double gd_step{0.0};  // 0 = 1/(L+lambda) per subproblem
  double sgd_h{0.0};
  int sgd_batch{1};
  int sgd_check_every{10};

  StoppingRule rule;

  int s{0};  // 0 = full participation
  long rounds{0};
  double target_eps{0.0};  // 0 = never stop early
  uint64_t seed{0};

  OutputPoint output_metric_point{OutputPoint::weighted_avg};
  bool output_point_explicit{false};

  int dl_option{1};
  double dl_gamma{0.99};
  double dl_eta{0.0};

  CapPolicy cap_policy{CapPolicy::keep_going};

  std::optional<Vec> x0;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
};

// ---------------------------------------------------------------------------
// Convergence telemetry
// ---------------------------------------------------------------------------
struct TraceRecord {
  long round{0};
  double f_gap_last{0.0};
  double f_gap_avg{0.0};
  double dist_sq_v{0.0};
  double dist_sq_x{0.0};
  double lambda_used{0.0};
  int s_used{0};
  long cum_comm_rounds{0};
  long cum_vectors{0};
  long cum_oracle_total{0};
  long cum_oracle_parallel{0};
  std::optional<double> potential_sdane;
  std::optional<double> potential_acc;
};

enum class TraceFormat { csv, jsonl };

extern const char* const kTraceCsvHeader;

void write_trace(const std::vector<TraceRecord>& records, std::ostream& out, TraceFormat format);
void write_trace(const std::vector<TraceRecord>& records, const std::string& path,
                 TraceFormat format);
std::vector<TraceRecord> read_trace(std::istream& in, TraceFormat format);
std::vector<TraceRecord> read_trace(const std::string& path);  // format from extension

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------
struct RunResult {
  std::vector<TraceRecord> records;
  std::vector<Vec> x_history;  // x^0 .. x^R
  std::vector<Vec> v_history;
  std::vector<double> lambda_history;  // lambda of each executed round
  std::vector<double> p_history;       // averaging weight ratio of each round
  ServerState final_state;
  ProblemInstance problem;
  double lambda_initial{0.0};
  double mu_used{0.0};
  double d0_sq{0.0};  // ||x^0 - x*||^2
  bool any_cap{false};
};

RunResult run_experiment_detailed(const ExperimentConfig& cfg);
std::vector<TraceRecord> run_experiment(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Comparison reports
// ---------------------------------------------------------------------------
enum class GapMetric { last_x, weighted_avg };

struct TraceSummary {
  std::string label;
  bool reached{false};
  long rounds_to_eps{-1};
  long oracle_total_to_eps{-1};
  long oracle_parallel_to_eps{-1};
  long vectors_to_eps{-1};
};

struct ComparisonReport {
  double eps{0.0};
  GapMetric metric{GapMetric::last_x};
  std::vector<TraceSummary> entries;

  const TraceSummary& entry(const std::string& label) const;
  nlohmann::json to_json() const;
  // Plot-ready long-format CSV: label,round,f_gap,cum_oracle_total,...
  static void write_plot_csv(
      const std::vector<std::pair<std::string, std::vector<TraceRecord>>>& traces,
      GapMetric metric, std::ostream& out);
};

ComparisonReport compare(const std::vector<std::pair<std::string, std::vector<TraceRecord>>>& traces,
                         double target_eps, GapMetric metric = GapMetric::last_x);

}  // namespace sdane
