#pragma once

#include "sdane/problems.hpp"

namespace sdane {

// ---------------------------------------------------------------------------
// Drift-corrected regularized local objective
//   F(x) = f_i(x) + <shift, x> + lambda/2 ||x - prox_center||^2
// Immutable once built; concurrent evaluation is safe.
// ---------------------------------------------------------------------------
struct ProxSubproblem {
  ClientPtr base;
  Vec shift;        // linear drift-correction term (zero allowed)
  Vec prox_center;  // v^r, y^r or x^r depending on the round engine
  double lambda{0.0};

  double smoothness() const { return base->smoothness_L() + lambda; }
  double convexity() const { return base->convexity_mu() + lambda; }

  double value(const Vec& x) const {
    return base->value(x) + shift.dot(x) + 0.5 * lambda * (x - prox_center).squaredNorm();
  }
  // One gradient oracle call on the base client.
  Vec grad(const Vec& x) const { return base->grad(x) + shift + lambda * (x - prox_center); }
  // One stochastic oracle call on the base client.
  Vec stoch_grad(const Vec& x, int batch_size, RngStream& rng) const {
    return base->stoch_grad(x, batch_size, rng) + shift + lambda * (x - prox_center);
  }
  // Recovers grad f_i(x) from an already-computed subproblem gradient.
  Vec client_grad_from(const Vec& x, const Vec& grad_f_at_x) const {
    return grad_f_at_x - shift - lambda * (x - prox_center);
  }
};

// drift=true: shift = mean-of-participants gradient minus own gradient at the
// center; drift=false: plain proximal regularization (FedProx style).
ProxSubproblem build_subproblem(ClientPtr client, const Vec& participants_mean_grad_at_center,
                                const Vec& own_grad_at_center, const Vec& prox_center,
                                double lambda, bool drift);

// ---------------------------------------------------------------------------
// Stopping rules for the inner solvers
// ---------------------------------------------------------------------------
enum class StopKind { relative_grad, dane_decaying, stochastic_slack };

std::string to_string(StopKind kind);
StopKind stop_kind_from_string(const std::string& name);

struct StoppingRule {
  StopKind kind{StopKind::relative_grad};
  double theta{0.5};
  double slack{0.0};
  long max_oracle_calls{100000};
};

// Pure predicate on an already-computed subproblem gradient:
//   relative_grad:    ||g|| <= theta * lambda * ||x - c||
//   dane_decaying:    ||g|| <= theta * lambda / (r+1) * ||x - c||
//   stochastic_slack: ||g||^2 <= theta^2 lambda^2 ||x - c||^2 + slack
// All boundaries are inclusive so the exact minimizer always passes.
bool stop_satisfied(const StoppingRule& rule, const ProxSubproblem& sub, const Vec& x,
                    const Vec& grad_at_x, long round_index);

// Spec-level form: evaluates the subproblem gradient (one oracle call).
bool check_stop(const StoppingRule& rule, const ProxSubproblem& sub, const Vec& x,
                long round_index);

}  // namespace sdane
