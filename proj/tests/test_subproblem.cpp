#include <cmath>

#include "sdane/subproblem.hpp"
#include "test_helpers.hpp"

using namespace sdane;
using sdane::testing::fd_gradient;
using sdane::testing::quad1;
using sdane::testing::vec;

TEST_CASE("build_subproblem: drift shift and degenerate cases") {
  const auto client = quad1(0, vec({2.0, 1.0}), vec({0.0, 0.0}));
  const Vec center = vec({1.0, 1.0});

  // Single participant: mean gradient equals own gradient, shift = 0.
  const Vec g = client->grad(center);
  const auto sub1 = build_subproblem(client, g, g, center, 2.0, true);
  CHECK(sub1.shift.norm() == 0.0);
  const auto sub2 = build_subproblem(client, g, g, center, 2.0, false);
  CHECK(sub2.shift.norm() == 0.0);

  CHECK_THROWS_AS(build_subproblem(client, g, g, center, 0.0, true), std::invalid_argument);
  CHECK_THROWS_AS(build_subproblem(client, vec({1.0}), g, center, 1.0, true),
                  std::invalid_argument);
}

TEST_CASE("build_subproblem: two-client shifts are opposite and sum to zero") {
  const auto c1 = quad1(0, vec({1.0, 1.0}), vec({-1.0, 0.0}));  // grad at 0: (1, 0)
  const auto c2 = quad1(1, vec({1.0, 1.0}), vec({1.0, 0.0}));   // grad at 0: (-1, 0)
  const Vec center = Vec::Zero(2);
  const Vec g1 = c1->grad(center), g2 = c2->grad(center);
  CHECK(g1(0) == doctest::Approx(1.0));
  CHECK(g2(0) == doctest::Approx(-1.0));
  const Vec mean = 0.5 * (g1 + g2);
  const auto s1 = build_subproblem(c1, mean, g1, center, 1.0, true);
  const auto s2 = build_subproblem(c2, mean, g2, center, 1.0, true);
  CHECK(s1.shift(0) == doctest::Approx(-1.0));
  CHECK(s2.shift(0) == doctest::Approx(1.0));
  CHECK((s1.shift + s2.shift).norm() <= 1e-12);
}

TEST_CASE("build_subproblem: without drift the center gradient is the client's own") {
  const auto client = quad1(0, vec({3.0, 2.0}), vec({0.4, -0.3}));
  const Vec center = vec({0.2, 0.9});
  const auto sub = build_subproblem(client, Vec(), Vec(), center, 5.0, false);
  CHECK((sub.grad(center) - client->grad(center)).norm() == 0.0);  // lambda term vanishes
}

TEST_CASE("subproblem: gradient matches finite differences of the value") {
  const auto p = gen_quadratic(3, 2, 5, 15.0, 44);
  RngStream rng(4);
  const Vec center = [&] {
    Vec c(p.d);
    for (int k = 0; k < p.d; ++k) c(k) = rng.normal();
    return c;
  }();
  std::vector<Vec> grads;
  for (const auto& c : p.clients) grads.push_back(c->grad(center));
  Vec mean = Vec::Zero(p.d);
  for (const auto& g : grads) mean += g;
  mean /= 3.0;

  for (int i = 0; i < 3; ++i) {
    const auto sub = build_subproblem(p.clients[static_cast<size_t>(i)], mean,
                                      grads[static_cast<size_t>(i)], center, 3.0, true);
    for (int probe = 0; probe < 5; ++probe) {
      Vec x(p.d);
      for (int k = 0; k < p.d; ++k) x(k) = rng.normal();
      const Vec g = sub.grad(x);
      const Vec g_fd = fd_gradient([&](const Vec& y) { return sub.value(y); }, x);
      CHECK((g - g_fd).norm() <= 1e-5 * std::max(1.0, g.norm()));
      // Explicit decomposition grad F = grad f + shift + lambda (x - c).
      const Vec manual = sub.base->grad(x) + sub.shift + 3.0 * (x - center);
      CHECK((g - manual).norm() == 0.0);
    }
  }
}

TEST_CASE("subproblem: (mu+lambda)-convex and (L+lambda)-smooth secants") {
  const auto p = gen_quadratic(2, 3, 6, 30.0, 91);
  const auto& client = p.clients[0];
  const Vec center = Vec::Zero(p.d);
  const Vec g = client->grad(center);
  const auto sub = build_subproblem(client, g, g, center, 4.0, true);
  const double mu = sub.convexity();
  const double lip = sub.smoothness();
  CHECK(mu == doctest::Approx(client->convexity_mu() + 4.0));
  CHECK(lip == doctest::Approx(client->smoothness_L() + 4.0));
  RngStream rng(6);
  for (int probe = 0; probe < 20; ++probe) {
    Vec x(p.d), y(p.d);
    for (int k = 0; k < p.d; ++k) x(k) = rng.normal();
    for (int k = 0; k < p.d; ++k) y(k) = rng.normal();
    const double base = sub.value(x) + sub.grad(x).dot(y - x);
    CHECK(sub.value(y) >= base + 0.5 * mu * (x - y).squaredNorm() - 1e-9);
    CHECK(sub.value(y) <= base + 0.5 * lip * (x - y).squaredNorm() + 1e-9);
  }
}

TEST_CASE("check_stop: exact minimizer passes every rule") {
  const auto client = quad1(0, vec({2.0, 3.0}), vec({1.0, -2.0}));
  const Vec center = vec({0.5, 0.5});
  const Vec g = client->grad(center);
  const auto sub = build_subproblem(client, g, g, center, 2.0, true);

  // Closed-form minimizer of the diagonal quadratic subproblem.
  const auto* q = dynamic_cast<const QuadraticClient*>(client.get());
  const Vec x_opt = ((q->linear_rhs() - sub.shift + 2.0 * center).array() /
                     (q->hessian_diag().array() + 2.0))
                        .matrix();
  CHECK(sub.grad(x_opt).norm() <= 1e-12);
  for (StopKind kind : {StopKind::relative_grad, StopKind::dane_decaying,
                        StopKind::stochastic_slack}) {
    for (double theta : {1e-6, 0.5, 1.0}) {
      StoppingRule rule{kind, theta, 0.0, 1000};
      CHECK(check_stop(rule, sub, x_opt, 7));
    }
  }
}

TEST_CASE("check_stop: x at the center with zero gradient passes all kinds") {
  // Zero base function: F(x) = <shift, x> + lambda/2 ||x - c||^2 with shift 0.
  const auto client = quad1(0, vec({0.0}), vec({0.0}));
  const Vec center = vec({0.0});
  const auto sub = build_subproblem(client, vec({0.0}), vec({0.0}), center, 2.0, true);
  CHECK(sub.grad(center).norm() == 0.0);
  for (StopKind kind : {StopKind::relative_grad, StopKind::dane_decaying,
                        StopKind::stochastic_slack})
    CHECK(check_stop(StoppingRule{kind, 0.5, 0.0, 10}, sub, center, 0));
}

TEST_CASE("check_stop: relative_grad boundary case is inclusive") {
  // ||grad F|| = 1 at ||x - c|| = 1 with theta lambda = 1: passes with <=.
  const auto client = quad1(0, vec({0.0}), vec({0.0}));  // identically zero function
  const Vec center = vec({0.0});
  auto sub = build_subproblem(client, Vec(), Vec(), center, 2.0, false);
  const Vec x = vec({1.0});
  // grad F(x) = lambda (x - c) = 2; inject a shift making it exactly 1.
  sub.shift = vec({-1.0});
  CHECK(sub.grad(x)(0) == doctest::Approx(1.0));
  CHECK(check_stop(StoppingRule{StopKind::relative_grad, 0.5, 0.0, 10}, sub, x, 0));
  CHECK_FALSE(check_stop(StoppingRule{StopKind::relative_grad, 0.49, 0.0, 10}, sub, x, 0));
}

TEST_CASE("check_stop: dane_decaying example 0.6 > 2/4 fails at round 3") {
  const auto client = quad1(0, vec({0.0}), vec({0.0}));
  const Vec center = vec({0.0});
  auto sub = build_subproblem(client, Vec(), Vec(), center, 2.0, false);
  sub.shift = vec({-1.4});  // grad F(x) = 2x - 1.4 = 0.6 at x = 1
  const Vec x = vec({1.0});
  CHECK(sub.grad(x)(0) == doctest::Approx(0.6));
  const StoppingRule rule{StopKind::dane_decaying, 1.0, 0.0, 10};
  CHECK_FALSE(check_stop(rule, sub, x, 3));  // threshold 2/4 = 0.5 < 0.6
  CHECK(check_stop(rule, sub, x, 1));        // threshold 2/2 = 1.0 >= 0.6
}

TEST_CASE("check_stop: stochastic_slack admits a gradient within the slack budget") {
  const auto client = quad1(0, vec({0.0}), vec({0.0}));
  const Vec center = vec({0.0});
  auto sub = build_subproblem(client, Vec(), Vec(), center, 1.0, false);
  sub.shift = vec({0.3});
  const Vec x = center;  // distance 0: only the slack can admit the point
  CHECK_FALSE(check_stop(StoppingRule{StopKind::stochastic_slack, 0.5, 0.05, 10}, sub, x, 0));
  CHECK(check_stop(StoppingRule{StopKind::stochastic_slack, 0.5, 0.09 + 1e-12, 10}, sub, x, 0));
}
