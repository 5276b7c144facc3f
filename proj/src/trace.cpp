#include <cstdio>
#include <fstream>
#include <sstream>

#include "sdane/harness.hpp"

namespace sdane {

const char* const kTraceCsvHeader =
    "round,f_gap_last,f_gap_avg,dist_sq_v,dist_sq_x,lambda_used,s_used,cum_comm_rounds,"
    "cum_vectors,cum_oracle_total,cum_oracle_parallel,potential_sdane,potential_acc";

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json record_to_json(const TraceRecord& r) {
  nlohmann::json j;
  j["round"] = r.round;
  j["f_gap_last"] = r.f_gap_last;
  j["f_gap_avg"] = r.f_gap_avg;
  j["dist_sq_v"] = r.dist_sq_v;
  j["dist_sq_x"] = r.dist_sq_x;
  j["lambda_used"] = r.lambda_used;
  j["s_used"] = r.s_used;
  j["cum_comm_rounds"] = r.cum_comm_rounds;
  j["cum_vectors"] = r.cum_vectors;
  j["cum_oracle_total"] = r.cum_oracle_total;
  j["cum_oracle_parallel"] = r.cum_oracle_parallel;
  j["potential_sdane"] = r.potential_sdane ? nlohmann::json(*r.potential_sdane)
                                           : nlohmann::json(nullptr);
  j["potential_acc"] =
      r.potential_acc ? nlohmann::json(*r.potential_acc) : nlohmann::json(nullptr);
  return j;
}

TraceRecord record_from_json(const nlohmann::json& j) {
  TraceRecord r;
  r.round = j.at("round").get<long>();
  r.f_gap_last = j.at("f_gap_last").get<double>();
  r.f_gap_avg = j.at("f_gap_avg").get<double>();
  r.dist_sq_v = j.at("dist_sq_v").get<double>();
  r.dist_sq_x = j.at("dist_sq_x").get<double>();
  r.lambda_used = j.at("lambda_used").get<double>();
  r.s_used = j.at("s_used").get<int>();
  r.cum_comm_rounds = j.at("cum_comm_rounds").get<long>();
  r.cum_vectors = j.at("cum_vectors").get<long>();
  r.cum_oracle_total = j.at("cum_oracle_total").get<long>();
  r.cum_oracle_parallel = j.at("cum_oracle_parallel").get<long>();
  if (!j.at("potential_sdane").is_null()) r.potential_sdane = j["potential_sdane"].get<double>();
  if (!j.at("potential_acc").is_null()) r.potential_acc = j["potential_acc"].get<double>();
  return r;
}

}  // namespace

void write_trace(const std::vector<TraceRecord>& records, std::ostream& out, TraceFormat format) {
  if (format == TraceFormat::csv) {
    out << kTraceCsvHeader << "\n";
    for (const auto& r : records) {
      out << r.round << ',' << fmt17(r.f_gap_last) << ',' << fmt17(r.f_gap_avg) << ','
          << fmt17(r.dist_sq_v) << ',' << fmt17(r.dist_sq_x) << ',' << fmt17(r.lambda_used) << ','
          << r.s_used << ',' << r.cum_comm_rounds << ',' << r.cum_vectors << ','
          << r.cum_oracle_total << ',' << r.cum_oracle_parallel << ','
          << (r.potential_sdane ? fmt17(*r.potential_sdane) : std::string()) << ','
          << (r.potential_acc ? fmt17(*r.potential_acc) : std::string()) << "\n";
    }
  } else {
    for (const auto& r : records) out << record_to_json(r).dump() << "\n";
  }
  if (!out) throw IoError("write_trace: stream failure");
}

void write_trace(const std::vector<TraceRecord>& records, const std::string& path,
                 TraceFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("write_trace: cannot open " + path);
  write_trace(records, out, format);
}

std::vector<TraceRecord> read_trace(std::istream& in, TraceFormat format) {
  std::vector<TraceRecord> records;
  std::string line;
  if (format == TraceFormat::csv) {
    if (!std::getline(in, line)) throw IoError("read_trace: empty csv");
    if (line != kTraceCsvHeader) throw IoError("read_trace: unexpected csv header");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      while (cells.size() < 13) cells.emplace_back();
      TraceRecord r;
      r.round = std::stol(cells[0]);
      r.f_gap_last = std::stod(cells[1]);
      r.f_gap_avg = std::stod(cells[2]);
      r.dist_sq_v = std::stod(cells[3]);
      r.dist_sq_x = std::stod(cells[4]);
      r.lambda_used = std::stod(cells[5]);
      r.s_used = std::stoi(cells[6]);
      r.cum_comm_rounds = std::stol(cells[7]);
      r.cum_vectors = std::stol(cells[8]);
      r.cum_oracle_total = std::stol(cells[9]);
      r.cum_oracle_parallel = std::stol(cells[10]);
      if (!cells[11].empty()) r.potential_sdane = std::stod(cells[11]);
      if (!cells[12].empty()) r.potential_acc = std::stod(cells[12]);
      records.push_back(r);
    }
  } else {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      records.push_back(record_from_json(nlohmann::json::parse(line)));
    }
  }
  return records;
}

std::vector<TraceRecord> read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("read_trace: cannot open " + path);
  const bool jsonl = path.size() >= 6 && path.substr(path.size() - 6) == ".jsonl";
  return read_trace(in, jsonl ? TraceFormat::jsonl : TraceFormat::csv);
}

}  // namespace sdane
