#include "sdane/local_solvers.hpp"

#include <atomic>
#include <cassert>
#include <cmath>
#include <iostream>

namespace sdane {

namespace {

void warn_large_step_once(double step, double limit) {
  static std::atomic<bool> warned{false};
  if (!warned.exchange(true))
    std::cerr << "solve_gd: step " << step << " exceeds 1/(L+lambda) = " << limit
              << "; convergence is not guaranteed\n";
}

}  // namespace

LocalSolveResult solve_gd(const ProxSubproblem& sub, const Vec& x0, double step,
                          const StoppingRule& rule, long cap, long round_index) {
  if (!(step > 0.0)) throw std::invalid_argument("solve_gd: step > 0");
  const double step_limit = 1.0 / sub.smoothness();
  const bool safe_step = step <= step_limit * (1.0 + 1e-12);
  if (!safe_step) warn_large_step_once(step, step_limit);

  LocalSolveResult res;
  Vec x = x0;
  long calls = 0;
#ifndef NDEBUG
  double prev_gn = std::numeric_limits<double>::infinity();
  double first_gn = 0.0;
#endif
  for (;;) {
    Vec g = sub.grad(x);
    ++calls;
#ifndef NDEBUG
    // Non-increasing gradient norms hold for steps within 1/(L+lambda);
    // the additive floor absorbs ulp-level wobble after full convergence.
    if (safe_step) {
      const double gn = g.norm();
      if (calls == 1) first_gn = gn;
      assert(gn <= prev_gn * (1.0 + 1e-12) + 1e-13 * first_gn + 1e-300);
      prev_gn = gn;
    }
#endif
    if (stop_satisfied(rule, sub, x, g, round_index)) {
      res.x_out = std::move(x);
      res.grad_at_x_out = std::move(g);
      res.oracle_calls = calls;
      res.stopped_by = StopReason::rule;
      return res;
    }
    if (calls >= cap) {
      res.x_out = std::move(x);
      res.grad_at_x_out = std::move(g);
      res.oracle_calls = calls;
      res.stopped_by = StopReason::cap;
      return res;
    }
    x -= step * g;
  }
}

LocalSolveResult solve_fgd(const ProxSubproblem& sub, const Vec& x0, const StoppingRule& rule,
                           long cap, long round_index) {
  const double big_l = sub.smoothness();
  const double mu = sub.convexity();
  const double beta =
      (std::sqrt(big_l) - std::sqrt(mu)) / (std::sqrt(big_l) + std::sqrt(mu));

  LocalSolveResult res;
  Vec y = x0;
  Vec x_prev = x0;
  long calls = 0;
  for (;;) {
    Vec g = sub.grad(y);
    ++calls;
    if (stop_satisfied(rule, sub, y, g, round_index)) {
      res.x_out = std::move(y);
      res.grad_at_x_out = std::move(g);
      res.oracle_calls = calls;
      res.stopped_by = StopReason::rule;
      return res;
    }
    if (calls >= cap) {
      res.x_out = std::move(y);
      res.grad_at_x_out = std::move(g);
      res.oracle_calls = calls;
      res.stopped_by = StopReason::cap;
      return res;
    }
    Vec x_next = y - g / big_l;
    y = x_next + beta * (x_next - x_prev);
    x_prev = std::move(x_next);
  }
}

LocalSolveResult solve_sgd(const ProxSubproblem& sub, const Vec& x0, double h_step, int batch,
                           long k_cap, const StoppingRule& rule, RngStream& rng, int check_every,
                           long round_index) {
  const double lip = sub.smoothness();
  if (!(h_step > lip))
    throw std::invalid_argument("solve_sgd: require H > L + lambda");
  if (check_every < 1) throw std::invalid_argument("solve_sgd: check_every >= 1");
  const double q = (h_step - sub.convexity()) / h_step;
  if (!(q > 0.0)) throw std::invalid_argument("solve_sgd: q = (H - mu - lambda)/H must be > 0");

  LocalSolveResult res;
  Vec z = x0;
  // Weighted average sum_{k=1..K} q^{-k} z_k / sum q^{-k}, kept in the
  // rescaled form num_K = sum q^{K-k} z_k so weights stay bounded.
  Vec avg_num = Vec::Zero(x0.size());
  double avg_den = 0.0;
  long k = 0;
  const auto averaged = [&]() { return Vec(avg_num / avg_den); };
  for (;;) {
    if (k >= k_cap) {
      Vec x_bar = k > 0 ? averaged() : z;
      Vec g = sub.grad(x_bar);
      ++res.oracle_calls;
      res.stopped_by =
          stop_satisfied(rule, sub, x_bar, g, round_index) ? StopReason::rule : StopReason::cap;
      res.x_out = std::move(x_bar);
      res.grad_at_x_out = std::move(g);
      res.stochastic_oracle_calls = k;
      return res;
    }
    Vec g_stoch = sub.stoch_grad(z, batch, rng);
    z -= g_stoch / h_step;
    ++k;
    avg_num = q * avg_num + z;
    avg_den = q * avg_den + 1.0;
    if (k % check_every == 0) {
      Vec x_bar = averaged();
      Vec g = sub.grad(x_bar);
      ++res.oracle_calls;
      if (stop_satisfied(rule, sub, x_bar, g, round_index)) {
        res.x_out = std::move(x_bar);
        res.grad_at_x_out = std::move(g);
        res.stochastic_oracle_calls = k;
        res.stopped_by = StopReason::rule;
        return res;
      }
    }
  }
}

LocalSolveResult solve_exact_quadratic(const ProxSubproblem& sub, long round_index) {
  const auto* q = dynamic_cast<const QuadraticClient*>(sub.base.get());
  if (q == nullptr)
    throw std::invalid_argument("solve_exact_quadratic: diagonal-quadratic clients only");
  // grad F = H x - rhs + shift + lambda (x - c) = 0, per coordinate.
  const Vec denom = q->hessian_diag().array() + sub.lambda;
  const Vec numer = q->linear_rhs() - sub.shift + sub.lambda * sub.prox_center;
  LocalSolveResult res;
  res.x_out = (numer.array() / denom.array()).matrix();
  res.grad_at_x_out = sub.grad(res.x_out);
  res.oracle_calls = 1;
  res.stopped_by = StopReason::rule;
  (void)round_index;
  return res;
}

}  // namespace sdane
