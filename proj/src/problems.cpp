#include "sdane/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sdane/sampling.hpp"

namespace sdane {

namespace {

std::vector<int> all_indices(int m) {
  std::vector<int> idx(static_cast<size_t>(m));
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

// log(1 + exp(t)) without overflow.
double log_one_exp(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

}  // namespace

Vec ClientFunction::stoch_grad(const Vec& x, int batch_size, RngStream& rng) const {
  const int m = data_size();
  if (batch_size < 1 || batch_size > m)
    throw std::invalid_argument("stoch_grad: batch size out of range");
  const SampleDraw draw = sample_subset(m, batch_size, rng);
  return batch_grad(x, draw.ids);
}

// ---------------------------------------------------------------------------
// QuadraticClient
// ---------------------------------------------------------------------------

QuadraticClient::QuadraticClient(int id, Mat a_diag, Mat b, double ridge)
    : id_(id), a_diag_(std::move(a_diag)), b_(std::move(b)), ridge_(ridge) {
  if (a_diag_.rows() != b_.rows() || a_diag_.cols() != b_.cols())
    throw std::invalid_argument("QuadraticClient: A/b shape mismatch");
  if ((a_diag_.array() < 0.0).any())
    throw std::invalid_argument("QuadraticClient: negative diagonal entry");
  const double inv_m = 1.0 / static_cast<double>(a_diag_.rows());
  hessian_diag_ = inv_m * a_diag_.colwise().sum().transpose();
  hessian_diag_.array() += ridge_;
  linear_rhs_ = inv_m * a_diag_.cwiseProduct(b_).colwise().sum().transpose();
  smoothness_ = hessian_diag_.maxCoeff();
  convexity_ = hessian_diag_.minCoeff();
}

double QuadraticClient::value(const Vec& x) const {
  const double inv_m = 1.0 / static_cast<double>(a_diag_.rows());
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a_diag_.rows(); ++j) {
    const auto diff = (x.transpose() - b_.row(j)).array();
    acc += 0.5 * (a_diag_.row(j).array() * diff * diff).sum();
  }
  return inv_m * acc + 0.5 * ridge_ * x.squaredNorm();
}

Vec QuadraticClient::batch_grad(const Vec& x, std::span<const int> batch) const {
  // ratio == 1.0 exactly for the full batch, so stoch_grad(all) == grad bitwise.
  const double ratio =
      static_cast<double>(a_diag_.rows()) / static_cast<double>(batch.size());
  const double factor = (1.0 / static_cast<double>(a_diag_.rows())) * ratio;
  Vec acc = Vec::Zero(x.size());
  for (int j : batch)
    acc += a_diag_.row(j).cwiseProduct(x.transpose() - b_.row(j)).transpose();
  return factor * acc + ridge_ * x;
}

Vec QuadraticClient::grad(const Vec& x) const {
  const auto idx = all_indices(data_size());
  return batch_grad(x, idx);
}

// ---------------------------------------------------------------------------
// PolyhedronClient
// ---------------------------------------------------------------------------

PolyhedronClient::PolyhedronClient(int id, Mat a, Vec b, double scale)
    : id_(id), a_(std::move(a)), b_(std::move(b)), scale_(scale) {
  if (a_.rows() != b_.size()) throw std::invalid_argument("PolyhedronClient: a/b mismatch");
  // [t]_+^2 has second derivative <= 2, so 2 * scale * lambda_max(sum a a^T),
  // bounded by the trace.
  smoothness_ = 2.0 * scale_ * a_.array().square().sum();
}

double PolyhedronClient::value(const Vec& x) const {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a_.rows(); ++j) {
    const double t = a_.row(j).dot(x) - b_(j);
    if (t > 0.0) acc += t * t;
  }
  return scale_ * acc;
}

Vec PolyhedronClient::batch_grad(const Vec& x, std::span<const int> batch) const {
  const double ratio = static_cast<double>(a_.rows()) / static_cast<double>(batch.size());
  const double factor = scale_ * ratio;
  Vec acc = Vec::Zero(x.size());
  for (int j : batch) {
    const double t = a_.row(j).dot(x) - b_(j);
    if (t > 0.0) acc += 2.0 * t * a_.row(j).transpose();
  }
  return factor * acc;
}

Vec PolyhedronClient::grad(const Vec& x) const {
  const auto idx = all_indices(data_size());
  return batch_grad(x, idx);
}

// ---------------------------------------------------------------------------
// LogRegClient
// ---------------------------------------------------------------------------

LogRegClient::LogRegClient(int id, Mat features, Vec labels, int n_total, long m_total)
    : id_(id),
      features_(std::move(features)),
      labels_(std::move(labels)),
      n_total_(n_total),
      m_total_(m_total) {
  if (features_.rows() != labels_.size())
    throw std::invalid_argument("LogRegClient: features/labels mismatch");
  loss_scale_ = static_cast<double>(n_total_) / static_cast<double>(m_total_);
  ridge_ = 1.0 / static_cast<double>(m_total_);
  // sigma'' <= 1/4; trace bound on the Gram spectrum keeps this a safe
  // overestimate for step-size purposes.
  smoothness_ = 0.25 * loss_scale_ * features_.array().square().sum() + ridge_;
}

double LogRegClient::value(const Vec& x) const {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < features_.rows(); ++j)
    acc += log_one_exp(-labels_(j) * features_.row(j).dot(x));
  return loss_scale_ * acc + 0.5 * ridge_ * x.squaredNorm();
}

Vec LogRegClient::batch_grad(const Vec& x, std::span<const int> batch) const {
  const double ratio =
      static_cast<double>(features_.rows()) / static_cast<double>(batch.size());
  const double factor = loss_scale_ * ratio;
  Vec acc = Vec::Zero(x.size());
  for (int j : batch) {
    const double margin = labels_(j) * features_.row(j).dot(x);
    acc += (-labels_(j) * sigmoid(-margin)) * features_.row(j).transpose();
  }
  return factor * acc + ridge_ * x;
}

Vec LogRegClient::grad(const Vec& x) const {
  const auto idx = all_indices(data_size());
  return batch_grad(x, idx);
}

// ---------------------------------------------------------------------------
// ProblemInstance
// ---------------------------------------------------------------------------

std::string to_string(ProblemFamily family) {
  switch (family) {
    case ProblemFamily::quadratic: return "quadratic";
    case ProblemFamily::polyhedron: return "polyhedron";
    case ProblemFamily::logreg: return "logreg";
  }
  return "unknown";
}

ProblemFamily family_from_string(const std::string& name) {
  if (name == "quadratic") return ProblemFamily::quadratic;
  if (name == "polyhedron") return ProblemFamily::polyhedron;
  if (name == "logreg") return ProblemFamily::logreg;
  throw std::invalid_argument("unknown problem family: " + name);
}

double ProblemInstance::f(const Vec& x) const {
  double acc = 0.0;
  for (const auto& c : clients) acc += c->value(x);
  return acc / static_cast<double>(clients.size());
}

Vec ProblemInstance::grad_f(const Vec& x) const {
  Vec acc = Vec::Zero(x.size());
  for (const auto& c : clients) acc += c->grad(x);
  return acc / static_cast<double>(clients.size());
}

double ProblemInstance::max_smoothness() const {
  double l = 0.0;
  for (const auto& c : clients) l = std::max(l, c->smoothness_L());
  return l;
}

double ProblemInstance::min_convexity() const {
  double mu = clients.empty() ? 0.0 : clients.front()->convexity_mu();
  for (const auto& c : clients) mu = std::min(mu, c->convexity_mu());
  return mu;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

void validate_quadratic_params(int n, int m, int d, double l_max) {
  if (n < 1 || m < 1 || d < 1) throw std::invalid_argument("gen_quadratic: n, m, d >= 1");
  if (!(l_max > 0.0)) throw std::invalid_argument("gen_quadratic: L_max > 0");
}

ProblemInstance gen_quadratic(int n, int m, int d, double l_max, uint64_t seed) {
  validate_quadratic_params(n, m, d, l_max);
  // Diagonal spectra A_{ij,k} = base_k * (1 + noise), noise ~ U(0, c). The
  // multiplicative noise puts the cross-client dissimilarity on the top of
  // the spectrum (delta around 5 at L_max = 100, n = 10, m = 5) while the
  // power-law base keeps a weak effective convexity floor, matching the
  // large-d regime at desk sizes.
  const double noise_level = 0.4;
  const double base_power = 1.5;
  const double base_floor_fraction = 0.013;
  const double base_hi = l_max / (1.0 + noise_level);
  const int retry_cap = 16;

  RngStream master(seed);
  for (int attempt = 0; attempt < retry_cap; ++attempt) {
    RngStream rng = master.substream(kRngGenerator).substream(static_cast<uint64_t>(attempt));
    Vec base(d);
    for (int k = 0; k < d; ++k)
      base(k) = base_hi * (base_floor_fraction +
                           (1.0 - base_floor_fraction) * std::pow(rng.uniform(), base_power));

    std::vector<Mat> a_all(static_cast<size_t>(n)), b_all(static_cast<size_t>(n));
    double max_entry = 0.0;
    for (int i = 0; i < n; ++i) {
      Mat a(m, d), b(m, d);
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < d; ++k) {
          a(j, k) = base(k) * (1.0 + rng.uniform(0.0, noise_level));
          b(j, k) = rng.normal();
        }
      max_entry = std::max(max_entry, a.maxCoeff());
      a_all[static_cast<size_t>(i)] = std::move(a);
      b_all[static_cast<size_t>(i)] = std::move(b);
    }
    if (!(max_entry > 0.0)) continue;
    const double rescale = l_max / max_entry;
    for (auto& a : a_all) a *= rescale;

    // Exact per-coordinate solve of (sum A) x = sum A b.
    Vec agg_h = Vec::Zero(d), agg_rhs = Vec::Zero(d);
    for (int i = 0; i < n; ++i) {
      agg_h += a_all[static_cast<size_t>(i)].colwise().sum().transpose();
      agg_rhs += a_all[static_cast<size_t>(i)]
                     .cwiseProduct(b_all[static_cast<size_t>(i)])
                     .colwise()
                     .sum()
                     .transpose();
    }
    if (agg_h.minCoeff() <= 1e-12 * l_max) continue;  // degenerate coordinate: retry

    ProblemInstance p;
    p.family = ProblemFamily::quadratic;
    p.n = n;
    p.d = d;
    for (int i = 0; i < n; ++i)
      p.clients.push_back(std::make_shared<QuadraticClient>(
          i, a_all[static_cast<size_t>(i)], b_all[static_cast<size_t>(i)], 0.0));
    Vec x_star = (agg_rhs.array() / agg_h.array()).matrix();
    p.f_star = p.f(x_star);
    p.x_star = std::move(x_star);
    p.provenance = {{"generator", "quadratic"},
                    {"n", n},
                    {"m", m},
                    {"d", d},
                    {"L_max", l_max},
                    {"seed", seed},
                    {"noise_level", noise_level},
                    {"base_power", base_power},
                    {"base_floor_fraction", base_floor_fraction},
                    {"spectrum", "base_k*(1+U(0,noise_level)), base_k power-law with floor"},
                    {"b", "standard normal"},
                    {"attempt", attempt}};
    return p;
  }
  throw GeneratorError("gen_quadratic: degenerate aggregate Hessian after retries");
}

void validate_polyhedron_params(int n, long m_total, int d, double radius) {
  if (n < 1 || d < 1) throw std::invalid_argument("gen_polyhedron: n, d >= 1");
  if (m_total < n) throw std::invalid_argument("gen_polyhedron: m_total >= n");
  if (!(radius > 0.0)) throw std::invalid_argument("gen_polyhedron: radius > 0");
}

ProblemInstance gen_polyhedron(int n, long m_total, int d, double radius, uint64_t seed) {
  validate_polyhedron_params(n, m_total, d, radius);
  const double slack = 1e-3 * radius;  // strict feasibility margin for x_star
  const int retry_cap = 64;
  RngStream master(seed);

  for (int attempt = 0; attempt < retry_cap; ++attempt) {
    RngStream rng = master.substream(kRngGenerator).substream(static_cast<uint64_t>(attempt));
    Vec x_star(d);
    for (int k = 0; k < d; ++k) x_star(k) = rng.normal();
    const double nrm = x_star.norm();
    x_star *= (nrm > 0.0 ? radius / nrm : 0.0);

    ProblemInstance p;
    p.family = ProblemFamily::polyhedron;
    p.n = n;
    p.d = d;
    const double scale = static_cast<double>(n) / static_cast<double>(m_total);
    bool zero_infeasible = false;
    long assigned = 0;
    for (int i = 0; i < n; ++i) {
      const long m_i = m_total / n + (i < static_cast<int>(m_total % n) ? 1 : 0);
      assigned += m_i;
      Mat a(m_i, d);
      Vec b(m_i);
      for (long j = 0; j < m_i; ++j) {
        Vec dir(d);
        for (int k = 0; k < d; ++k) dir(k) = rng.normal();
        const double dn = dir.norm();
        if (dn > 0.0) dir /= dn;
        a.row(j) = dir.transpose();
        b(j) = dir.dot(x_star) + slack;
        if (b(j) < 0.0) zero_infeasible = true;  // x = 0 violates this halfspace
      }
      p.clients.push_back(std::make_shared<PolyhedronClient>(i, std::move(a), std::move(b), scale));
    }
    (void)assigned;
    if (!zero_infeasible) continue;  // designated initial point must lie outside

    p.x_star = x_star;
    p.f_star = 0.0;
    p.provenance = {{"generator", "polyhedron"},
                    {"n", n},
                    {"m_total", m_total},
                    {"d", d},
                    {"radius", radius},
                    {"seed", seed},
                    {"slack", slack},
                    {"a", "uniform unit sphere directions"},
                    {"attempt", attempt}};
    return p;
  }
  throw GeneratorError("gen_polyhedron: initial point kept landing inside the polyhedron");
}

void validate_logreg_params(int n, long m_total, int d, double dirichlet_alpha) {
  if (n < 1 || d < 1) throw std::invalid_argument("gen_logreg: n, d >= 1");
  if (m_total < n) throw std::invalid_argument("gen_logreg: M >= n");
  if (!(dirichlet_alpha > 0.0)) throw std::invalid_argument("gen_logreg: alpha > 0");
}

namespace {

// Largest-remainder split of `count` items over proportions `p`.
std::vector<long> proportional_counts(const std::vector<double>& p, long count) {
  const size_t n = p.size();
  std::vector<long> out(n, 0);
  std::vector<std::pair<double, size_t>> rem(n);
  long used = 0;
  for (size_t i = 0; i < n; ++i) {
    const double exact = p[i] * static_cast<double>(count);
    out[i] = static_cast<long>(std::floor(exact));
    used += out[i];
    rem[i] = {exact - std::floor(exact), i};
  }
  std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (long k = 0; k < count - used; ++k) ++out[rem[static_cast<size_t>(k)].second];
  return out;
}

}  // namespace

ProblemInstance gen_logreg(int n, long m_total, int d, double dirichlet_alpha, uint64_t seed) {
  validate_logreg_params(n, m_total, d, dirichlet_alpha);
  const int retry_cap = 64;
  RngStream master(seed);
  RngStream data_rng = master.substream(kRngGenerator).substream(0);

  // Two Gaussian blobs around +-center.
  Vec center(d);
  for (int k = 0; k < d; ++k) center(k) = data_rng.normal();
  const double cn = center.norm();
  if (cn > 0.0) center *= 2.0 / cn;

  const long m_pos = (m_total + 1) / 2;
  const long m_neg = m_total - m_pos;
  Mat features(m_total, d);
  Vec labels(m_total);
  for (long j = 0; j < m_total; ++j) {
    const double y = (j < m_pos) ? 1.0 : -1.0;
    labels(j) = y;
    for (int k = 0; k < d; ++k) features(j, k) = y * center(k) + data_rng.normal();
  }

  for (int attempt = 0; attempt < retry_cap; ++attempt) {
    RngStream rng = master.substream(kRngGenerator).substream(1 + static_cast<uint64_t>(attempt));
    // Class-wise Dirichlet proportions decide how many samples of each class
    // every client receives.
    const auto prop_pos = rng.dirichlet(dirichlet_alpha, n);
    const auto prop_neg = rng.dirichlet(dirichlet_alpha, n);
    const auto cnt_pos = proportional_counts(prop_pos, m_pos);
    const auto cnt_neg = proportional_counts(prop_neg, m_neg);

    bool empty_shard = false;
    for (int i = 0; i < n; ++i)
      if (cnt_pos[static_cast<size_t>(i)] + cnt_neg[static_cast<size_t>(i)] == 0)
        empty_shard = true;
    if (empty_shard) continue;

    ProblemInstance p;
    p.family = ProblemFamily::logreg;
    p.n = n;
    p.d = d;
    long next_pos = 0, next_neg = m_pos;
    for (int i = 0; i < n; ++i) {
      const long mi = cnt_pos[static_cast<size_t>(i)] + cnt_neg[static_cast<size_t>(i)];
      Mat fi(mi, d);
      Vec yi(mi);
      long row = 0;
      for (long j = 0; j < cnt_pos[static_cast<size_t>(i)]; ++j, ++row, ++next_pos) {
        fi.row(row) = features.row(next_pos);
        yi(row) = labels(next_pos);
      }
      for (long j = 0; j < cnt_neg[static_cast<size_t>(i)]; ++j, ++row, ++next_neg) {
        fi.row(row) = features.row(next_neg);
        yi(row) = labels(next_neg);
      }
      p.clients.push_back(
          std::make_shared<LogRegClient>(i, std::move(fi), std::move(yi), n, m_total));
    }
    p.provenance = {{"generator", "logreg"},
                    {"n", n},
                    {"M", m_total},
                    {"d", d},
                    {"dirichlet_alpha", dirichlet_alpha},
                    {"seed", seed},
                    {"features", "two gaussian blobs around +-center, unit noise"},
                    {"attempt", attempt}};
    reference_solve(p, 1e-10);
    return p;
  }
  throw GeneratorError("gen_logreg: Dirichlet split kept producing empty shards");
}

ProblemInstance with_ridge(const ProblemInstance& p, double rho) {
  if (p.family != ProblemFamily::quadratic)
    throw std::invalid_argument("with_ridge: quadratic family only");
  if (!(rho >= 0.0)) throw std::invalid_argument("with_ridge: rho >= 0");
  ProblemInstance out;
  out.family = p.family;
  out.n = p.n;
  out.d = p.d;
  Vec agg_h = Vec::Zero(p.d), agg_rhs = Vec::Zero(p.d);
  for (const auto& c : p.clients) {
    const auto* q = dynamic_cast<const QuadraticClient*>(c.get());
    if (q == nullptr) throw std::invalid_argument("with_ridge: non-quadratic client");
    auto ridged =
        std::make_shared<QuadraticClient>(q->client_id(), q->a_diag(), q->b(), q->ridge() + rho);
    agg_h += ridged->hessian_diag();
    agg_rhs += ridged->linear_rhs();
    out.clients.push_back(std::move(ridged));
  }
  Vec x_star = (agg_rhs.array() / agg_h.array()).matrix();
  out.f_star = out.f(x_star);
  out.x_star = std::move(x_star);
  out.provenance = p.provenance;
  out.provenance["ridge_added"] = rho;
  return out;
}

// ---------------------------------------------------------------------------
// Reference solve
// ---------------------------------------------------------------------------

std::pair<Vec, double> reference_solve(ProblemInstance& p, double tol, long max_iters) {
  if (!(tol > 0.0)) throw std::invalid_argument("reference_solve: tol > 0");
  if (p.family == ProblemFamily::quadratic) {
    Vec agg_h = Vec::Zero(p.d), agg_rhs = Vec::Zero(p.d);
    for (const auto& c : p.clients) {
      const auto* q = dynamic_cast<const QuadraticClient*>(c.get());
      agg_h += q->hessian_diag();
      agg_rhs += q->linear_rhs();
    }
    if (agg_h.minCoeff() <= 0.0)
      throw ReferenceSolveError("reference_solve: degenerate aggregate Hessian coordinate",
                                Vec::Zero(p.d), p.f(Vec::Zero(p.d)));
    Vec x_star = (agg_rhs.array() / agg_h.array()).matrix();
    p.f_star = p.f(x_star);
    p.x_star = x_star;
    return {x_star, *p.f_star};
  }

  // Fast gradient method on f; strongly-convex momentum when available.
  const double big_l = std::max(p.max_smoothness(), 1e-300);
  const double mu = std::max(p.min_convexity(), 0.0);
  Vec x = Vec::Zero(p.d);
  Vec y = x;
  Vec best_x = x;
  double best_norm = p.grad_f(x).norm();
  double t = 1.0;
  const double beta_sc =
      mu > 0.0 ? (std::sqrt(big_l) - std::sqrt(mu)) / (std::sqrt(big_l) + std::sqrt(mu)) : 0.0;
  for (long k = 0; k < max_iters; ++k) {
    const Vec gy = p.grad_f(y);
    Vec x_next = y - gy / big_l;
    double beta = beta_sc;
    if (mu <= 0.0) {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      beta = (t - 1.0) / t_next;
      t = t_next;
    }
    y = x_next + beta * (x_next - x);
    x = std::move(x_next);
    const Vec gx = p.grad_f(x);
    const double gn = gx.norm();
    if (gn < best_norm) {
      best_norm = gn;
      best_x = x;
    }
    if (gn <= tol * std::max(1.0, x.norm())) {
      p.x_star = x;
      p.f_star = p.f(x);
      return {x, *p.f_star};
    }
  }
  throw ReferenceSolveError("reference_solve: iteration cap exceeded before tolerance", best_x,
                            p.f(best_x));
}

}  // namespace sdane
