#pragma once

#include "sdane/subproblem.hpp"

namespace sdane {

enum class StopReason { rule, cap };

struct LocalSolveResult {
  Vec x_out;
  Vec grad_at_x_out;               // subproblem gradient at x_out, reused by the server
  long oracle_calls{0};            // deterministic gradient evaluations
  long stochastic_oracle_calls{0};  // mini-batch gradient evaluations
  StopReason stopped_by{StopReason::rule};
};

// Gradient descent x_{k+1} = x_k - step * grad F(x_k); returns the first
// iterate passing the rule, else the last one at the call cap. Each iterate
// costs one oracle call shared between the step and the stopping check.
// step <= 1/(L+lambda) keeps gradient norms non-increasing; larger steps are
// allowed but warned about once.
LocalSolveResult solve_gd(const ProxSubproblem& sub, const Vec& x0, double step,
                          const StoppingRule& rule, long cap, long round_index = 0);

// Constant-momentum fast gradient method on the (mu+lambda)-strongly-convex,
// (L+lambda)-smooth subproblem; stopping contract as in solve_gd. Momentum is
// never carried across solves.
LocalSolveResult solve_fgd(const ProxSubproblem& sub, const Vec& x0, const StoppingRule& rule,
                           long cap, long round_index = 0);

// Shifted mini-batch SGD z_{k+1} = z_k - (1/H) stoch_grad_F(z_k); the output
// point is the weighted average sum q^{-k} z_k / sum q^{-k} with
// q = (H - mu - lambda)/H. The rule is checked on the averaged iterate every
// check_every steps with a true subproblem gradient (counted separately).
LocalSolveResult solve_sgd(const ProxSubproblem& sub, const Vec& x0, double h_step, int batch,
                           long k_cap, const StoppingRule& rule, RngStream& rng,
                           int check_every = 10, long round_index = 0);

// Closed-form minimizer for diagonal-quadratic clients; one oracle call to
// report the (numerically zero) gradient at the solution.
LocalSolveResult solve_exact_quadratic(const ProxSubproblem& sub, long round_index = 0);

// ---------------------------------------------------------------------------
// Pluggable solver handle used by the round engines.
// ---------------------------------------------------------------------------
class LocalSolver {
 public:
  virtual ~LocalSolver() = default;
  virtual LocalSolveResult solve(const ProxSubproblem& sub, const Vec& x0,
                                 const StoppingRule& rule, long round_index,
                                 RngStream& rng) const = 0;
};

class GdSolver : public LocalSolver {
 public:
  // step <= 0 selects 1/(L+lambda) per subproblem.
  explicit GdSolver(double step = 0.0) : step_(step) {}
  LocalSolveResult solve(const ProxSubproblem& sub, const Vec& x0, const StoppingRule& rule,
                         long round_index, RngStream&) const override {
    const double step = step_ > 0.0 ? step_ : 1.0 / sub.smoothness();
    return solve_gd(sub, x0, step, rule, rule.max_oracle_calls, round_index);
  }

 private:
  double step_;
};

class FgdSolver : public LocalSolver {
 public:
  LocalSolveResult solve(const ProxSubproblem& sub, const Vec& x0, const StoppingRule& rule,
                         long round_index, RngStream&) const override {
    return solve_fgd(sub, x0, rule, rule.max_oracle_calls, round_index);
  }
};

class SgdSolver : public LocalSolver {
 public:
  SgdSolver(double h_step, int batch, int check_every = 10)
      : h_step_(h_step), batch_(batch), check_every_(check_every) {}
  LocalSolveResult solve(const ProxSubproblem& sub, const Vec& x0, const StoppingRule& rule,
                         long round_index, RngStream& rng) const override {
    return solve_sgd(sub, x0, h_step_, batch_, rule.max_oracle_calls, rule, rng, check_every_,
                     round_index);
  }

 private:
  double h_step_;
  int batch_;
  int check_every_;
};

class ExactQuadraticSolver : public LocalSolver {
 public:
  LocalSolveResult solve(const ProxSubproblem& sub, const Vec&, const StoppingRule&,
                         long round_index, RngStream&) const override {
    return solve_exact_quadratic(sub, round_index);
  }
};

}  // namespace sdane
