#include "sdane/algorithms.hpp"

#include <algorithm>
#include <cmath>

namespace sdane {

ServerState ServerState::initial(const Vec& x0, double lambda, double mu) {
  ServerState s;
  s.x = x0;
  s.v = x0;
  s.lambda = lambda;
  s.mu = mu;
  s.avg_num = Vec::Zero(x0.size());
  return s;
}

void ServerState::push_average(const Vec& x_next, double p) {
  avg_num = avg_num / p + x_next;
  avg_den = avg_den / p + 1.0;
}

Vec ServerState::averaged_output() const { return avg_den > 0.0 ? Vec(avg_num / avg_den) : x; }

std::tuple<double, double, double> acc_coefficients(double A, double B, double lambda, double mu) {
  if (!(lambda > 0.0) || !(B >= 1.0) || !(A >= 0.0))
    throw std::invalid_argument("acc_coefficients: need lambda > 0, B >= 1, A >= 0");
  const double a = (B + std::sqrt(B * B + 4.0 * lambda * A * B)) / (2.0 * lambda);
  return {a, A + a, B + mu * a};
}

Vec sdane_prox_center(const Vec& v, const Vec& x_bar, const Vec& g_bar, double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu >= 0.0))
    throw std::invalid_argument("sdane_prox_center: need lambda > 0, mu >= 0");
  return (mu * x_bar + lambda * v - g_bar) / (mu + lambda);
}

Vec acc_prox_center(const Vec& v, const Vec& x_bar, const Vec& g_bar, double a_next, double B,
                    double mu) {
  if (!(a_next > 0.0) || !(B >= 1.0))
    throw std::invalid_argument("acc_prox_center: need a_next > 0, B >= 1");
  return (a_next * mu * x_bar + B * v - a_next * g_bar) / (B + a_next * mu);
}

double adaptive_lambda(const Vec& v_curr, const Vec& v_prev, const std::vector<Vec>& grads_h_curr,
                       const std::vector<Vec>& grads_h_prev, double lambda_floor,
                       double lambda_prev) {
  if (grads_h_curr.size() != grads_h_prev.size() || grads_h_curr.empty())
    throw std::invalid_argument("adaptive_lambda: gradient list mismatch");
  const double dist2 = (v_curr - v_prev).squaredNorm();
  if (!(dist2 > 0.0)) return lambda_prev;
  double acc = 0.0;
  for (size_t i = 0; i < grads_h_curr.size(); ++i)
    acc += (grads_h_curr[i] - grads_h_prev[i]).squaredNorm();
  acc /= static_cast<double>(grads_h_curr.size());
  return std::max(lambda_floor, std::sqrt(acc / dist2));
}

namespace {

std::vector<int> sorted_sample(const std::vector<int>& sample, int n) {
  if (sample.empty()) throw std::invalid_argument("round: sample must be non-empty");
  std::vector<int> ids = sample;
  std::sort(ids.begin(), ids.end());
  if (ids.front() < 0 || ids.back() >= n ||
      std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw std::invalid_argument("round: sample ids must be distinct and in [0, n)");
  return ids;
}

Vec mean_of(const std::vector<Vec>& vs) {
  Vec acc = Vec::Zero(vs.front().size());
  for (const auto& v : vs) acc += v;
  return acc / static_cast<double>(vs.size());
}

struct SolvedClients {
  std::vector<LocalSolveResult> results;
  Vec x_mean;
  Vec client_grad_mean;  // mean of grad f_i(x_{i,r+1}), recovered from grad F
  bool any_cap{false};
};

// Builds drift/plain subproblems at `center`, solves them from the center in
// ascending client-id order, and reduces in that fixed order.
SolvedClients solve_sampled(const ProblemInstance& problem, const std::vector<int>& ids,
                            const std::vector<Vec>& grads_at_center, const Vec& mean_grad,
                            const Vec& center, double lambda, bool drift,
                            const LocalSolver& solver, const StoppingRule& rule,
                            long round_index, RngStream& rng) {
  SolvedClients out;
  std::vector<Vec> xs, client_grads;
  xs.reserve(ids.size());
  client_grads.reserve(ids.size());
  for (size_t k = 0; k < ids.size(); ++k) {
    const int id = ids[k];
    const auto& client = problem.clients[static_cast<size_t>(id)];
    ProxSubproblem sub =
        drift ? build_subproblem(client, mean_grad, grads_at_center[k], center, lambda, true)
              : build_subproblem(client, Vec(), Vec(), center, lambda, false);
    RngStream client_rng = rng.substream(static_cast<uint64_t>(id));
    LocalSolveResult res = solver.solve(sub, center, rule, round_index, client_rng);
    out.any_cap = out.any_cap || res.stopped_by == StopReason::cap;
    client_grads.push_back(sub.client_grad_from(res.x_out, res.grad_at_x_out));
    xs.push_back(res.x_out);
    out.results.push_back(std::move(res));
  }
  out.x_mean = mean_of(xs);
  out.client_grad_mean = mean_of(client_grads);
  return out;
}

std::vector<Vec> gradients_at(const ProblemInstance& problem, const std::vector<int>& ids,
                              const Vec& point) {
  std::vector<Vec> grads;
  grads.reserve(ids.size());
  for (int id : ids) grads.push_back(problem.clients[static_cast<size_t>(id)]->grad(point));
  return grads;
}

}  // namespace

RoundOutput sdane_round(const ServerState& state, const ProblemInstance& problem,
                        const std::vector<int>& sample, const LocalSolver& solver,
                        const StoppingRule& rule, RngStream& rng, const RoundOptions& opts) {
  const auto ids = sorted_sample(sample, problem.n);
  const long s = static_cast<long>(ids.size());

  RoundOutput out;
  out.new_state = state;
  ServerState& next = out.new_state;

  const auto grads = gradients_at(problem, ids, state.v);
  out.center_oracle_calls_per_client = 1;
  const Vec mean_grad = mean_of(grads);

  double lambda = state.lambda;
  if (opts.adaptive_lambda) {
    if (s != problem.n)
      throw std::invalid_argument("sdane_round: adaptive lambda requires full participation");
    std::vector<Vec> grads_h;
    grads_h.reserve(grads.size());
    for (const auto& g : grads) grads_h.push_back(mean_grad - g);
    if (state.prev_center && !state.prev_center_grads_h.empty())
      lambda = adaptive_lambda(state.v, *state.prev_center, grads_h, state.prev_center_grads_h,
                               opts.lambda_floor, state.lambda);
    else
      lambda = std::max(state.lambda, opts.lambda_floor);
    next.prev_center = state.v;
    next.prev_center_grads_h = std::move(grads_h);
  }
  next.lambda = lambda;

  auto solved = solve_sampled(problem, ids, grads, mean_grad, state.v, lambda, true, solver, rule,
                              state.round, rng);
  out.any_cap = solved.any_cap;

  next.x = solved.x_mean;
  next.v = sdane_prox_center(state.v, solved.x_mean, solved.client_grad_mean, lambda, state.mu);
  next.round = state.round + 1;
  next.push_average(next.x, 1.0 + state.mu / lambda);

  out.per_client = std::move(solved.results);
  out.comm_vectors_down = 2 * s;  // prox center + participant-mean gradient
  out.comm_vectors_up = 3 * s;    // gradient at center, solution, gradient at solution
  return out;
}

RoundOutput acc_sdane_round(const ServerState& state, const ProblemInstance& problem,
                            const std::vector<int>& sample, const LocalSolver& solver,
                            const StoppingRule& rule, RngStream& rng) {
  const auto ids = sorted_sample(sample, problem.n);
  const long s = static_cast<long>(ids.size());

  RoundOutput out;
  out.new_state = state;
  ServerState& next = out.new_state;

  const auto [a, a_big_next, b_next] = acc_coefficients(state.A, state.B, state.lambda, state.mu);
  const Vec y = (state.A / a_big_next) * state.x + (a / a_big_next) * state.v;

  const auto grads = gradients_at(problem, ids, y);
  out.center_oracle_calls_per_client = 1;
  const Vec mean_grad = mean_of(grads);

  auto solved = solve_sampled(problem, ids, grads, mean_grad, y, state.lambda, true, solver, rule,
                              state.round, rng);
  out.any_cap = solved.any_cap;

  next.x = solved.x_mean;
  next.v = acc_prox_center(state.v, solved.x_mean, solved.client_grad_mean, a, state.B, state.mu);
  next.y = y;
  next.A = a_big_next;
  next.B = b_next;
  next.round = state.round + 1;
  next.push_average(next.x, 1.0 + state.mu / state.lambda);

  out.per_client = std::move(solved.results);
  out.comm_vectors_down = 2 * s;
  out.comm_vectors_up = 3 * s;
  return out;
}

RoundOutput dane_round(const ServerState& state, const ProblemInstance& problem,
                       const LocalSolver& solver, const StoppingRule& rule, RngStream& rng) {
  std::vector<int> all(static_cast<size_t>(problem.n));
  for (int i = 0; i < problem.n; ++i) all[static_cast<size_t>(i)] = i;

  RoundOutput out;
  out.new_state = state;
  ServerState& next = out.new_state;

  const auto grads = gradients_at(problem, all, state.x);
  out.center_oracle_calls_per_client = 1;
  const Vec mean_grad = mean_of(grads);

  auto solved = solve_sampled(problem, all, grads, mean_grad, state.x, state.lambda, true, solver,
                              rule, state.round, rng);
  out.any_cap = solved.any_cap;

  next.x = solved.x_mean;
  next.v = next.x;  // no stabilized center; the next prox center is x itself
  next.round = state.round + 1;
  next.push_average(next.x, 1.0 + state.mu / state.lambda);

  out.per_client = std::move(solved.results);
  out.comm_vectors_down = 2 * problem.n;  // center + mean gradient
  out.comm_vectors_up = 2 * problem.n;    // gradient at center, solution
  return out;
}

RoundOutput fedprox_round(const ServerState& state, const ProblemInstance& problem,
                          const std::vector<int>& sample, const LocalSolver& solver,
                          const StoppingRule& rule, RngStream& rng) {
  const auto ids = sorted_sample(sample, problem.n);
  const long s = static_cast<long>(ids.size());

  RoundOutput out;
  out.new_state = state;
  ServerState& next = out.new_state;

  auto solved = solve_sampled(problem, ids, {}, Vec(), state.x, state.lambda, false, solver, rule,
                              state.round, rng);
  out.any_cap = solved.any_cap;

  next.x = solved.x_mean;
  next.v = next.x;
  next.round = state.round + 1;
  next.push_average(next.x, 1.0 + state.mu / state.lambda);

  out.per_client = std::move(solved.results);
  out.comm_vectors_down = 1 * s;  // center only
  out.comm_vectors_up = 1 * s;    // solution only
  return out;
}

RoundOutput sdane_dl_round(const ServerState& state, const ProblemInstance& problem,
                           const std::vector<int>& sample, const LocalSolver& solver,
                           const StoppingRule& rule, RngStream& rng, int option, double gamma,
                           double eta) {
  if (option != 1 && option != 2) throw std::invalid_argument("sdane_dl_round: option is 1 or 2");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("sdane_dl_round: gamma in [0,1]");
  if (!(eta > 0.0)) throw std::invalid_argument("sdane_dl_round: eta > 0");
  const auto ids = sorted_sample(sample, problem.n);
  const long s = static_cast<long>(ids.size());
  const bool drift = option == 1;

  RoundOutput out;
  out.new_state = state;
  ServerState& next = out.new_state;

  std::vector<Vec> grads;
  Vec mean_grad;
  if (drift) {
    grads = gradients_at(problem, ids, state.v);
    out.center_oracle_calls_per_client = 1;
    mean_grad = mean_of(grads);
  }

  auto solved = solve_sampled(problem, ids, grads, mean_grad, state.v, state.lambda, drift, solver,
                              rule, state.round, rng);
  out.any_cap = solved.any_cap;

  next.x = solved.x_mean;
  next.v = gamma * next.x + (1.0 - gamma) * state.v - eta * solved.client_grad_mean;
  next.round = state.round + 1;
  next.push_average(next.x, 1.0 + state.mu / state.lambda);

  out.per_client = std::move(solved.results);
  out.comm_vectors_down = (drift ? 2 : 1) * s;
  out.comm_vectors_up = (drift ? 3 : 2) * s;
  return out;
}

std::pair<Vec, Vec> stabilized_ppm_step(const Vec& x, const Vec& v, const ClientPtr& f,
                                        double lambda, double mu, const LocalSolver& solver,
                                        const StoppingRule& rule, long round_index,
                                        RngStream& rng) {
  (void)x;  // the step depends on v only; kept for interface symmetry
  Vec g = f->grad(v);
  const Vec mean_grad = g / 1.0;
  ProxSubproblem sub = build_subproblem(f, mean_grad, g, v, lambda, true);
  RngStream client_rng = rng.substream(static_cast<uint64_t>(f->client_id()));
  LocalSolveResult res = solver.solve(sub, v, rule, round_index, client_rng);
  const Vec client_grad = sub.client_grad_from(res.x_out, res.grad_at_x_out);
  const Vec x_next = res.x_out / 1.0;
  const Vec g_bar = client_grad / 1.0;
  Vec v_next = sdane_prox_center(v, x_next, g_bar, lambda, mu);
  return {x_next, std::move(v_next)};
}

}  // namespace sdane
