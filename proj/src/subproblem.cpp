#include "sdane/subproblem.hpp"

namespace sdane {

ProxSubproblem build_subproblem(ClientPtr client, const Vec& participants_mean_grad_at_center,
                                const Vec& own_grad_at_center, const Vec& prox_center,
                                double lambda, bool drift) {
  if (!(lambda > 0.0)) throw std::invalid_argument("build_subproblem: lambda > 0");
  const auto d = prox_center.size();
  if (client->dimension() != d ||
      (drift && (participants_mean_grad_at_center.size() != d || own_grad_at_center.size() != d)))
    throw std::invalid_argument("build_subproblem: dimension mismatch");
  ProxSubproblem sub;
  sub.base = std::move(client);
  sub.shift = drift ? Vec(participants_mean_grad_at_center - own_grad_at_center)
                    : Vec(Vec::Zero(d));
  sub.prox_center = prox_center;
  sub.lambda = lambda;
  return sub;
}

std::string to_string(StopKind kind) {
  switch (kind) {
    case StopKind::relative_grad: return "relative_grad";
    case StopKind::dane_decaying: return "dane_decaying";
    case StopKind::stochastic_slack: return "stochastic_slack";
  }
  return "unknown";
}

StopKind stop_kind_from_string(const std::string& name) {
  if (name == "relative_grad") return StopKind::relative_grad;
  if (name == "dane_decaying") return StopKind::dane_decaying;
  if (name == "stochastic_slack") return StopKind::stochastic_slack;
  throw std::invalid_argument("unknown stopping rule: " + name);
}

bool stop_satisfied(const StoppingRule& rule, const ProxSubproblem& sub, const Vec& x,
                    const Vec& grad_at_x, long round_index) {
  const double dist = (x - sub.prox_center).norm();
  const double gn = grad_at_x.norm();
  switch (rule.kind) {
    case StopKind::relative_grad:
      return gn <= rule.theta * sub.lambda * dist;
    case StopKind::dane_decaying:
      return gn <= rule.theta * sub.lambda / static_cast<double>(round_index + 1) * dist;
    case StopKind::stochastic_slack:
      return gn * gn <=
             rule.theta * rule.theta * sub.lambda * sub.lambda * dist * dist + rule.slack;
  }
  return false;
}

bool check_stop(const StoppingRule& rule, const ProxSubproblem& sub, const Vec& x,
                long round_index) {
  if (!x.allFinite()) throw std::invalid_argument("check_stop: non-finite point");
  return stop_satisfied(rule, sub, x, sub.grad(x), round_index);
}

}  // namespace sdane
