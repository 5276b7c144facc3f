#include <fstream>

#include "sdane/problems.hpp"

namespace sdane {

namespace {

nlohmann::json vec_to_json(const Vec& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back(v(k));
  return arr;
}

nlohmann::json mat_to_json(const Mat& m) {  // row-major flatten
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(m(r, c));
  return arr;
}

Vec vec_from_json(const nlohmann::json& j) {
  Vec v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index k = 0;
  for (const auto& x : j) v(k++) = x.get<double>();
  return v;
}

Mat mat_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols) {
  if (static_cast<Eigen::Index>(j.size()) != rows * cols)
    throw std::invalid_argument("problem_from_json: array size mismatch");
  Mat m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[static_cast<size_t>(k++)].get<double>();
  return m;
}

}  // namespace

nlohmann::json problem_to_json(const ProblemInstance& p) {
  nlohmann::json j;
  j["family"] = to_string(p.family);
  j["n"] = p.n;
  j["d"] = p.d;
  j["seed"] = p.provenance.contains("seed") ? p.provenance["seed"] : nlohmann::json(0);
  j["generator_params"] = p.provenance;
  j["clients"] = nlohmann::json::array();
  for (const auto& c : p.clients) {
    nlohmann::json jc;
    jc["m"] = c->data_size();
    if (const auto* q = dynamic_cast<const QuadraticClient*>(c.get())) {
      jc["A_diag"] = mat_to_json(q->a_diag());
      jc["b"] = mat_to_json(q->b());
      jc["ridge"] = q->ridge();
    } else if (const auto* poly = dynamic_cast<const PolyhedronClient*>(c.get())) {
      jc["a"] = mat_to_json(poly->a());
      jc["b"] = vec_to_json(poly->b());
      jc["scale"] = poly->scale();
    } else if (const auto* lr = dynamic_cast<const LogRegClient*>(c.get())) {
      jc["features"] = mat_to_json(lr->features());
      jc["labels"] = vec_to_json(lr->labels());
      jc["M"] = lr->m_total();
    } else {
      throw std::invalid_argument("problem_to_json: unknown client type");
    }
    j["clients"].push_back(std::move(jc));
  }
  if (p.x_star) j["x_star"] = vec_to_json(*p.x_star);
  if (p.f_star) j["f_star"] = *p.f_star;
  return j;
}

ProblemInstance problem_from_json(const nlohmann::json& j) {
  ProblemInstance p;
  p.family = family_from_string(j.at("family").get<std::string>());
  p.n = j.at("n").get<int>();
  p.d = j.at("d").get<int>();
  p.provenance = j.value("generator_params", nlohmann::json::object());
  const auto& clients = j.at("clients");
  if (static_cast<int>(clients.size()) != p.n)
    throw std::invalid_argument("problem_from_json: client count mismatch");
  int id = 0;
  for (const auto& jc : clients) {
    const auto m = jc.at("m").get<Eigen::Index>();
    switch (p.family) {
      case ProblemFamily::quadratic:
        p.clients.push_back(std::make_shared<QuadraticClient>(
            id, mat_from_json(jc.at("A_diag"), m, p.d), mat_from_json(jc.at("b"), m, p.d),
            jc.value("ridge", 0.0)));
        break;
      case ProblemFamily::polyhedron:
        p.clients.push_back(std::make_shared<PolyhedronClient>(
            id, mat_from_json(jc.at("a"), m, p.d), vec_from_json(jc.at("b")),
            jc.at("scale").get<double>()));
        break;
      case ProblemFamily::logreg:
        p.clients.push_back(std::make_shared<LogRegClient>(
            id, mat_from_json(jc.at("features"), m, p.d), vec_from_json(jc.at("labels")), p.n,
            jc.at("M").get<long>()));
        break;
    }
    ++id;
  }
  if (j.contains("x_star")) p.x_star = vec_from_json(j["x_star"]);
  if (j.contains("f_star")) p.f_star = j["f_star"].get<double>();
  return p;
}

void save_problem(const ProblemInstance& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("save_problem: cannot open " + path);
  out << problem_to_json(p).dump(2) << "\n";
  if (!out) throw IoError("save_problem: write failed for " + path);
}

ProblemInstance load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_problem: cannot open " + path);
  nlohmann::json j;
  in >> j;
  return problem_from_json(j);
}

}  // namespace sdane
