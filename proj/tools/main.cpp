// Command-line front end: gen / estimate / run / compare.
// Exit codes: 0 ok, 2 config error, 3 solver-cap failure under the fail
// policy, 4 I/O error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sdane/harness.hpp"

namespace {

using namespace sdane;

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("parse error in ") + path + ": " + e.what());
  }
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

int run_gen(const std::string& config_path, std::optional<uint64_t> seed_override,
            const std::string& out_path) {
  nlohmann::json g = load_json_file(config_path);
  if (g.contains("problem") && g["problem"].is_object()) g = g["problem"];  // allow run configs
  if (seed_override) g["seed"] = *seed_override;
  const auto family = family_from_string(g.at("family").get<std::string>());
  const uint64_t seed = g.value("seed", 0ULL);
  ProblemInstance p;
  switch (family) {
    case ProblemFamily::quadratic: {
      p = gen_quadratic(g.at("n").get<int>(), g.at("m").get<int>(), g.at("d").get<int>(),
                        g.at("L_max").get<double>(), seed);
      const double ridge = g.value("ridge", 0.0);
      if (ridge > 0.0) p = with_ridge(p, ridge);
      break;
    }
    case ProblemFamily::polyhedron:
      p = gen_polyhedron(g.at("n").get<int>(), g.at("m_total").get<long>(), g.at("d").get<int>(),
                         g.at("radius").get<double>(), seed);
      break;
    case ProblemFamily::logreg:
      p = gen_logreg(g.at("n").get<int>(), g.at("M").get<long>(), g.at("d").get<int>(),
                     g.at("alpha").get<double>(), seed);
      break;
  }
  save_problem(p, out_path);
  std::cerr << "wrote " << out_path << " (family=" << to_string(p.family) << ", n=" << p.n
            << ", d=" << p.d << ")\n";
  return 0;
}

int run_estimate(const std::string& problem_path, const std::string& s_list,
                 const std::string& mode_name, int probes, uint64_t seed,
                 const std::string& out_path) {
  ProblemInstance p = load_problem(problem_path);
  std::vector<int> s_values;
  std::stringstream ss(s_list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "n")
      s_values.push_back(p.n);
    else
      s_values.push_back(std::stoi(tok));
  }
  if (s_values.empty()) s_values.push_back(p.n);
  EstimateMethod mode = EstimateMethod::probe_estimate;
  if (mode_name == "exact")
    mode = EstimateMethod::exact_quadratic;
  else if (mode_name == "power")
    mode = EstimateMethod::power_iteration;
  else if (mode_name != "probe")
    throw ConfigError("estimate: mode must be exact|power|probe");
  const auto report = build_dissimilarity_report(p, s_values, mode, probes, seed);
  write_text(out_path, report.to_json().dump(2) + "\n");
  return 0;
}

int run_run(const std::string& config_path, std::optional<uint64_t> seed_override,
            const std::string& out_path, const std::string& format_name) {
  ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
  if (seed_override) cfg.seed = *seed_override;
  TraceFormat format = TraceFormat::csv;
  if (format_name == "jsonl")
    format = TraceFormat::jsonl;
  else if (format_name != "csv")
    throw ConfigError("run: format must be csv or jsonl");
  const auto records = run_experiment(cfg);
  if (out_path.empty() || out_path == "-") {
    write_trace(records, std::cout, format);
  } else {
    write_trace(records, out_path, format);
    std::cerr << "wrote " << records.size() << " records to " << out_path << "\n";
  }
  return 0;
}

int run_compare(const std::vector<std::string>& trace_paths, double eps,
                const std::string& metric_name, const std::string& out_path,
                const std::string& plot_csv_path) {
  GapMetric metric = GapMetric::last_x;
  if (metric_name == "weighted_avg")
    metric = GapMetric::weighted_avg;
  else if (metric_name != "last_x")
    throw ConfigError("compare: metric must be last_x or weighted_avg");
  std::vector<std::pair<std::string, std::vector<TraceRecord>>> traces;
  for (const auto& path : trace_paths) traces.emplace_back(path, read_trace(path));
  const auto report = compare(traces, eps, metric);
  write_text(out_path, report.to_json().dump(2) + "\n");
  if (!plot_csv_path.empty()) {
    std::ofstream out(plot_csv_path);
    if (!out) throw IoError("cannot open " + plot_csv_path);
    ComparisonReport::write_plot_csv(traces, metric, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed proximal-point optimization simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, format_name = "csv";
  std::optional<uint64_t> seed_override;

  auto* gen = app.add_subcommand("gen", "generate a problem instance (.problem.json)");
  gen->add_option("--config", config_path, "generator config JSON")->required();
  gen->add_option("--seed", seed_override, "override the generator seed");
  gen->add_option("--out", out_path, "output path")->required();

  std::string problem_path, s_list = "n", mode_name = "probe";
  int probes = 64;
  uint64_t est_seed = 0x5eed;
  auto* estimate = app.add_subcommand("estimate", "print a dissimilarity report as JSON");
  estimate->add_option("--problem", problem_path, "problem file")->required();
  estimate->add_option("--s", s_list, "comma-separated subset sizes ('n' allowed)");
  estimate->add_option("--mode", mode_name, "exact|power|probe");
  estimate->add_option("--probes", probes, "probe pairs per subset");
  estimate->add_option("--seed", est_seed, "probe seed");
  estimate->add_option("--out", out_path, "output path (default stdout)");

  auto* run = app.add_subcommand("run", "run an experiment config and emit a trace");
  run->add_option("--config", config_path, "experiment config JSON")->required();
  run->add_option("--seed", seed_override, "override the config seed");
  run->add_option("--out", out_path, "trace output path (default stdout)");
  run->add_option("--format", format_name, "csv|jsonl");

  std::vector<std::string> trace_paths;
  double eps = 1e-6;
  std::string metric_name = "last_x", plot_csv_path;
  auto* cmp = app.add_subcommand("compare", "compare traces at a target accuracy");
  cmp->add_option("traces", trace_paths, "trace files (csv or jsonl)")->required();
  cmp->add_option("--eps", eps, "target accuracy")->required();
  cmp->add_option("--metric", metric_name, "last_x|weighted_avg");
  cmp->add_option("--out", out_path, "report output path (default stdout)");
  cmp->add_option("--plot-csv", plot_csv_path, "also emit plot-ready CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return run_gen(config_path, seed_override, out_path);
    if (estimate->parsed())
      return run_estimate(problem_path, s_list, mode_name, probes, est_seed, out_path);
    if (run->parsed()) return run_run(config_path, seed_override, out_path, format_name);
    if (cmp->parsed()) return run_compare(trace_paths, eps, metric_name, out_path, plot_csv_path);
  } catch (const sdane::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sdane::SolverCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const sdane::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
