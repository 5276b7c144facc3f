#pragma once

#include <atomic>
#include <memory>

#include "doctest.h"
#include "sdane/problems.hpp"

namespace sdane::testing {

// Forwarding client that counts oracle evaluations; used to audit the
// solver-reported call counts.
class CountingClient : public ClientFunction {
 public:
  explicit CountingClient(ClientPtr inner) : inner_(std::move(inner)) {}

  double value(const Vec& x) const override {
    ++value_calls;
    return inner_->value(x);
  }
  Vec grad(const Vec& x) const override {
    ++grad_calls;
    return inner_->grad(x);
  }
  Vec batch_grad(const Vec& x, std::span<const int> batch) const override {
    ++batch_calls;
    return inner_->batch_grad(x, batch);
  }
  int client_id() const override { return inner_->client_id(); }
  int data_size() const override { return inner_->data_size(); }
  int dimension() const override { return inner_->dimension(); }
  double smoothness_L() const override { return inner_->smoothness_L(); }
  double convexity_mu() const override { return inner_->convexity_mu(); }

  mutable std::atomic<long> value_calls{0};
  mutable std::atomic<long> grad_calls{0};
  mutable std::atomic<long> batch_calls{0};

 private:
  ClientPtr inner_;
};

// Single diagonal-quadratic term client: f(x) = 1/2 <diag(a)(x-b), x-b>.
inline ClientPtr quad1(int id, const Vec& a, const Vec& b, double ridge = 0.0) {
  Mat am(1, a.size()), bm(1, b.size());
  am.row(0) = a.transpose();
  bm.row(0) = b.transpose();
  return std::make_shared<QuadraticClient>(id, am, bm, ridge);
}

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v(k++) = x;
  return v;
}

// Central finite differences of a scalar function.
template <typename F>
Vec fd_gradient(F&& f, const Vec& x, double h = 1e-6) {
  Vec g(x.size());
  Vec xp = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double step = h * std::max(1.0, std::abs(x(k)));
    xp(k) = x(k) + step;
    const double fp = f(xp);
    xp(k) = x(k) - step;
    const double fm = f(xp);
    xp(k) = x(k);
    g(k) = (fp - fm) / (2.0 * step);
  }
  return g;
}

inline ProblemInstance identical_clients_problem(int n, const Vec& a, const Vec& b) {
  ProblemInstance p;
  p.family = ProblemFamily::quadratic;
  p.n = n;
  p.d = static_cast<int>(a.size());
  for (int i = 0; i < n; ++i) p.clients.push_back(quad1(i, a, b));
  Vec x_star = b;
  p.f_star = p.f(x_star);
  p.x_star = std::move(x_star);
  p.provenance = {{"generator", "test"}};
  return p;
}

}  // namespace sdane::testing
