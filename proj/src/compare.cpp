#include <ostream>

#include "sdane/harness.hpp"

namespace sdane {

namespace {

double gap_of(const TraceRecord& r, GapMetric metric) {
  return metric == GapMetric::last_x ? r.f_gap_last : r.f_gap_avg;
}

}  // namespace

ComparisonReport compare(
    const std::vector<std::pair<std::string, std::vector<TraceRecord>>>& traces,
    double target_eps, GapMetric metric) {
  if (traces.size() < 2) throw std::invalid_argument("compare: need at least two traces");
  ComparisonReport report;
  report.eps = target_eps;
  report.metric = metric;
  for (const auto& [label, records] : traces) {
    TraceSummary summary;
    summary.label = label;
    for (const auto& r : records) {
      if (gap_of(r, metric) <= target_eps) {
        summary.reached = true;
        summary.rounds_to_eps = r.cum_comm_rounds;
        summary.oracle_total_to_eps = r.cum_oracle_total;
        summary.oracle_parallel_to_eps = r.cum_oracle_parallel;
        summary.vectors_to_eps = r.cum_vectors;
        break;
      }
    }
    report.entries.push_back(std::move(summary));
  }
  return report;
}

const TraceSummary& ComparisonReport::entry(const std::string& label) const {
  for (const auto& e : entries)
    if (e.label == label) return e;
  throw std::invalid_argument("ComparisonReport: no entry labeled " + label);
}

nlohmann::json ComparisonReport::to_json() const {
  nlohmann::json j;
  j["eps"] = eps;
  j["metric"] = metric == GapMetric::last_x ? "last_x" : "weighted_avg";
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json je;
    je["label"] = e.label;
    je["reached"] = e.reached;
    if (e.reached) {
      je["rounds_to_eps"] = e.rounds_to_eps;
      je["oracle_total_to_eps"] = e.oracle_total_to_eps;
      je["oracle_parallel_to_eps"] = e.oracle_parallel_to_eps;
      je["vectors_to_eps"] = e.vectors_to_eps;
    }
    j["entries"].push_back(std::move(je));
  }
  // Pairwise partial-order checks over traces that reached the target;
  // unreached traces are excluded.
  j["orderings"] = nlohmann::json::array();
  for (size_t a = 0; a < entries.size(); ++a)
    for (size_t b = 0; b < entries.size(); ++b) {
      if (a == b || !entries[a].reached || !entries[b].reached) continue;
      j["orderings"].push_back({{"a", entries[a].label},
                                {"b", entries[b].label},
                                {"rounds_le", entries[a].rounds_to_eps <= entries[b].rounds_to_eps},
                                {"oracle_total_lt",
                                 entries[a].oracle_total_to_eps < entries[b].oracle_total_to_eps}});
    }
  return j;
}

void ComparisonReport::write_plot_csv(
    const std::vector<std::pair<std::string, std::vector<TraceRecord>>>& traces, GapMetric metric,
    std::ostream& out) {
  out << "label,round,f_gap,cum_comm_rounds,cum_vectors,cum_oracle_total,cum_oracle_parallel\n";
  char buf[64];
  for (const auto& [label, records] : traces)
    for (const auto& r : records) {
      std::snprintf(buf, sizeof(buf), "%.17g", gap_of(r, metric));
      out << label << ',' << r.round << ',' << buf << ',' << r.cum_comm_rounds << ','
          << r.cum_vectors << ',' << r.cum_oracle_total << ',' << r.cum_oracle_parallel << "\n";
    }
}

}  // namespace sdane
