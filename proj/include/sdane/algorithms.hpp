#pragma once

#include <optional>
#include <tuple>

#include "sdane/local_solvers.hpp"
#include "sdane/sampling.hpp"

namespace sdane {

// ---------------------------------------------------------------------------
// Server-side state shared by all round engines. The averaged output
// x_bar^R = sum p^r x^r / sum p^r is maintained in a rescaled
// (numerator, denominator) form so the weights p^r never overflow.
// ---------------------------------------------------------------------------
struct ServerState {
  Vec x;
  Vec v;
  std::optional<Vec> y;  // accelerated extrapolation point of the last round
  double A{0.0};         // A_0 = 0
  double B{1.0};         // B_0 = 1
  long round{0};
  double lambda{0.0};
  double mu{0.0};

  Vec avg_num;
  double avg_den{0.0};

  // Previous prox center and drift gradients, kept for adaptive lambda.
  std::optional<Vec> prev_center;
  std::vector<Vec> prev_center_grads_h;

  static ServerState initial(const Vec& x0, double lambda, double mu);

  // Records x^{r+1} with weight ratio p = 1 + mu/lambda.
  void push_average(const Vec& x_next, double p);
  // x_bar^R; falls back to x before any round has completed.
  Vec averaged_output() const;
};

struct RoundOutput {
  ServerState new_state;
  std::vector<LocalSolveResult> per_client;  // ascending client id
  long comm_vectors_up{0};
  long comm_vectors_down{0};
  long center_oracle_calls_per_client{0};  // gradient-at-center evaluations
  bool any_cap{false};
};

struct RoundOptions {
  bool adaptive_lambda{false};
  double lambda_floor{1e-2};
};

// ---------------------------------------------------------------------------
// Scalar coefficient and prox-center updates
// ---------------------------------------------------------------------------

// Solves lambda = (A + a) B / a^2 for the unique positive root and advances
// the estimating-sequence pair: returns (a_next, A_next, B_next).
std::tuple<double, double, double> acc_coefficients(double A, double B, double lambda, double mu);

// argmin of (1/s) sum [<g_i, x> + mu/2 ||x - x_i||^2] + lambda/2 ||x - v||^2:
// (mu x_bar + lambda v - g_bar) / (mu + lambda).
Vec sdane_prox_center(const Vec& v, const Vec& x_bar, const Vec& g_bar, double lambda, double mu);

// Accelerated variant with weight a_next on the model term and B on the
// regularizer: (a mu x_bar + B v - a g_bar) / (B + a mu).
Vec acc_prox_center(const Vec& v, const Vec& x_bar, const Vec& g_bar, double a_next, double B,
                    double mu);

// Local second-order dissimilarity estimate from consecutive prox centers,
// floored at lambda_floor; a degenerate step returns lambda_prev.
double adaptive_lambda(const Vec& v_curr, const Vec& v_prev, const std::vector<Vec>& grads_h_curr,
                       const std::vector<Vec>& grads_h_prev, double lambda_floor,
                       double lambda_prev);

// ---------------------------------------------------------------------------
// Round engines. `rng` is the round-level stream; engines derive one
// substream per client id, so results do not depend on sample order.
// ---------------------------------------------------------------------------
RoundOutput sdane_round(const ServerState& state, const ProblemInstance& problem,
                        const std::vector<int>& sample, const LocalSolver& solver,
                        const StoppingRule& rule, RngStream& rng, const RoundOptions& opts = {});

RoundOutput acc_sdane_round(const ServerState& state, const ProblemInstance& problem,
                            const std::vector<int>& sample, const LocalSolver& solver,
                            const StoppingRule& rule, RngStream& rng);

// Full participation; prox center is x^r itself and no stabilized center is
// kept (v mirrors x for reporting).
RoundOutput dane_round(const ServerState& state, const ProblemInstance& problem,
                       const LocalSolver& solver, const StoppingRule& rule, RngStream& rng);

RoundOutput fedprox_round(const ServerState& state, const ProblemInstance& problem,
                          const std::vector<int>& sample, const LocalSolver& solver,
                          const StoppingRule& rule, RngStream& rng);

// Option 1 keeps the drift correction, option 2 drops it; the prox center
// update is v <- gamma x^{r+1} + (1-gamma) v - eta * mean grad.
RoundOutput sdane_dl_round(const ServerState& state, const ProblemInstance& problem,
                           const std::vector<int>& sample, const LocalSolver& solver,
                           const StoppingRule& rule, RngStream& rng, int option, double gamma,
                           double eta);

// Single-machine stabilized proximal-point step; arithmetic matches
// sdane_round with a single participant bit for bit.
std::pair<Vec, Vec> stabilized_ppm_step(const Vec& x, const Vec& v, const ClientPtr& f,
                                        double lambda, double mu, const LocalSolver& solver,
                                        const StoppingRule& rule, long round_index,
                                        RngStream& rng);

}  // namespace sdane
