#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sdane/rng.hpp"

namespace sdane {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct GeneratorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Per-client differentiable oracle. Implementations are immutable after
// construction and safe for concurrent evaluation; stochastic gradients take
// an explicit RNG handle so parallel callers own independent streams.
// ---------------------------------------------------------------------------
class ClientFunction {
 public:
  virtual ~ClientFunction() = default;

  virtual double value(const Vec& x) const = 0;
  virtual Vec grad(const Vec& x) const = 0;

  // Unbiased estimate from an explicit index set; grad() equals
  // batch_grad over all indices, through the same accumulation path.
  virtual Vec batch_grad(const Vec& x, std::span<const int> batch) const = 0;

  // Unbiased mini-batch gradient: batch_size indices drawn uniformly without
  // replacement (batch_size == data_size reproduces grad bitwise).
  Vec stoch_grad(const Vec& x, int batch_size, RngStream& rng) const;

  virtual int client_id() const = 0;
  virtual int data_size() const = 0;
  virtual int dimension() const = 0;
  virtual double smoothness_L() const = 0;
  virtual double convexity_mu() const = 0;
};

using ClientPtr = std::shared_ptr<const ClientFunction>;

// f_i(x) = (1/m) sum_j 1/2 <A_j (x - b_j), x - b_j> + ridge/2 ||x||^2,
// with diagonal positive semi-definite A_j (stored as diagonals).
class QuadraticClient : public ClientFunction {
 public:
  QuadraticClient(int id, Mat a_diag, Mat b, double ridge = 0.0);

  double value(const Vec& x) const override;
  Vec grad(const Vec& x) const override;
  Vec batch_grad(const Vec& x, std::span<const int> batch) const override;

  int client_id() const override { return id_; }
  int data_size() const override { return static_cast<int>(a_diag_.rows()); }
  int dimension() const override { return static_cast<int>(a_diag_.cols()); }
  double smoothness_L() const override { return smoothness_; }
  double convexity_mu() const override { return convexity_; }

  // Diagonal of the (constant) Hessian, ridge included.
  const Vec& hessian_diag() const { return hessian_diag_; }
  // Right-hand side (1/m) sum_j A_j b_j of the stationarity system.
  const Vec& linear_rhs() const { return linear_rhs_; }
  const Mat& a_diag() const { return a_diag_; }
  const Mat& b() const { return b_; }
  double ridge() const { return ridge_; }

 private:
  int id_;
  Mat a_diag_;  // m x d, row j holds diag(A_j)
  Mat b_;       // m x d
  double ridge_;
  Vec hessian_diag_;
  Vec linear_rhs_;
  double smoothness_{0.0};
  double convexity_{0.0};
};

// f_i(x) = scale * sum_j [<a_j, x> - b_j]_+^2  with scale = n / m_total.
class PolyhedronClient : public ClientFunction {
 public:
  PolyhedronClient(int id, Mat a, Vec b, double scale);

  double value(const Vec& x) const override;
  Vec grad(const Vec& x) const override;
  Vec batch_grad(const Vec& x, std::span<const int> batch) const override;

  int client_id() const override { return id_; }
  int data_size() const override { return static_cast<int>(a_.rows()); }
  int dimension() const override { return static_cast<int>(a_.cols()); }
  double smoothness_L() const override { return smoothness_; }
  double convexity_mu() const override { return 0.0; }

  const Mat& a() const { return a_; }
  const Vec& b() const { return b_; }
  double scale() const { return scale_; }

 private:
  int id_;
  Mat a_;  // m_i x d constraint normals
  Vec b_;  // m_i offsets
  double scale_;
  double smoothness_{0.0};
};

// f_i(x) = (n/M) sum_j log(1 + exp(-y_j <a_j, x>)) + 1/(2M) ||x||^2.
class LogRegClient : public ClientFunction {
 public:
  LogRegClient(int id, Mat features, Vec labels, int n_total, long m_total);

  double value(const Vec& x) const override;
  Vec grad(const Vec& x) const override;
  Vec batch_grad(const Vec& x, std::span<const int> batch) const override;

  int client_id() const override { return id_; }
  int data_size() const override { return static_cast<int>(features_.rows()); }
  int dimension() const override { return static_cast<int>(features_.cols()); }
  double smoothness_L() const override { return smoothness_; }
  double convexity_mu() const override { return ridge_; }

  const Mat& features() const { return features_; }
  const Vec& labels() const { return labels_; }
  int n_total() const { return n_total_; }
  long m_total() const { return m_total_; }

 private:
  int id_;
  Mat features_;  // m_i x d
  Vec labels_;    // +-1
  int n_total_;
  long m_total_;
  double loss_scale_;  // n / M
  double ridge_;       // 1 / M
  double smoothness_{0.0};
};

enum class ProblemFamily { quadratic, polyhedron, logreg };

std::string to_string(ProblemFamily family);
ProblemFamily family_from_string(const std::string& name);

// ---------------------------------------------------------------------------
// A generated problem: n client oracles over a shared dimension, optionally
// with a reference solution attached.
// ---------------------------------------------------------------------------
struct ProblemInstance {
  ProblemFamily family{ProblemFamily::quadratic};
  int n{0};
  int d{0};
  std::vector<ClientPtr> clients;
  std::optional<Vec> x_star;
  std::optional<double> f_star;
  nlohmann::json provenance;  // generator parameters + seed

  double f(const Vec& x) const;
  Vec grad_f(const Vec& x) const;
  double max_smoothness() const;
  double min_convexity() const;
};

// ---------------------------------------------------------------------------
// Generators (see README for the exact distributions; recorded in provenance)
// ---------------------------------------------------------------------------
ProblemInstance gen_quadratic(int n, int m, int d, double l_max, uint64_t seed);
ProblemInstance gen_polyhedron(int n, long m_total, int d, double radius, uint64_t seed);
ProblemInstance gen_logreg(int n, long m_total, int d, double dirichlet_alpha, uint64_t seed);

// Parameter validation shared with the generators; throws on invalid input
// without allocating instance storage.
void validate_quadratic_params(int n, int m, int d, double l_max);
void validate_polyhedron_params(int n, long m_total, int d, double radius);
void validate_logreg_params(int n, long m_total, int d, double dirichlet_alpha);

// Quadratic family only: adds rho/2 ||x||^2 to every client and refreshes the
// exact reference solution.
ProblemInstance with_ridge(const ProblemInstance& p, double rho);

// ---------------------------------------------------------------------------
// Dissimilarity estimation
// ---------------------------------------------------------------------------
enum class EstimateMethod { exact_quadratic, power_iteration, probe_estimate };

std::string to_string(EstimateMethod method);

struct DissimilarityReport {
  std::vector<std::pair<int, double>> delta_s;  // per requested subset size
  double delta_max{0.0};
  std::vector<std::pair<int, double>> ed_delta_s;  // external dissimilarity per s
  double zeta{0.0};
  EstimateMethod method{EstimateMethod::exact_quadratic};
  int probes{0};
  bool subsets_sampled{false};  // enumeration cap hit: values are lower bounds
  bool zeta_unbounded_suspected{false};

  nlohmann::json to_json() const;
};

// delta_s of Def-3.1 type: worst subset of size s of the average squared
// deviation-gradient ratio. exact_quadratic / power_iteration require the
// quadratic family; probe_estimate returns a lower estimate for any family.
double estimate_sod(const ProblemInstance& p, int s, EstimateMethod mode,
                    int probes = 64, uint64_t seed = 0x5eed);

// External dissimilarity Delta_s: Lipschitz bound on grad(f - f_S).
double estimate_ed(const ProblemInstance& p, int s, EstimateMethod mode,
                   int probes = 64, uint64_t seed = 0x5eed);

// Probe-based gradient-variance bound; an estimate only (may be unbounded
// for heterogeneous problems; see DissimilarityReport flag).
double estimate_bgv(const ProblemInstance& p, int probes, uint64_t seed = 0x5eed);

// Uniform Lipschitz bound on grad(f - f_i) over all clients.
double estimate_delta_max(const ProblemInstance& p, EstimateMethod mode,
                          int probes = 64, uint64_t seed = 0x5eed);

DissimilarityReport build_dissimilarity_report(const ProblemInstance& p,
                                               const std::vector<int>& s_values,
                                               EstimateMethod mode, int probes,
                                               uint64_t seed);

// ---------------------------------------------------------------------------
// Reference solution
// ---------------------------------------------------------------------------
struct ReferenceSolveError : std::runtime_error {
  Vec best_x;
  double best_f;
  ReferenceSolveError(const std::string& what, Vec x, double f)
      : std::runtime_error(what), best_x(std::move(x)), best_f(f) {}
};

// Quadratic: exact per-coordinate solve. Other families: fast gradient method
// until ||grad f|| <= tol * max(1, ||x||). Caches the result in p.
std::pair<Vec, double> reference_solve(ProblemInstance& p, double tol,
                                       long max_iters = 2000000);

// ---------------------------------------------------------------------------
// Serialization (.problem.json)
// ---------------------------------------------------------------------------
nlohmann::json problem_to_json(const ProblemInstance& p);
ProblemInstance problem_from_json(const nlohmann::json& j);
void save_problem(const ProblemInstance& p, const std::string& path);
ProblemInstance load_problem(const std::string& path);

}  // namespace sdane
