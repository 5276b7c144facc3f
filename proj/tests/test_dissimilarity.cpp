#include <cmath>

#include "test_helpers.hpp"

using namespace sdane;
using sdane::testing::identical_clients_problem;
using sdane::testing::quad1;
using sdane::testing::vec;

TEST_CASE("estimate_sod: delta_1 = 0 for any instance") {
  const auto p = gen_quadratic(5, 2, 6, 40.0, 8);
  CHECK(estimate_sod(p, 1, EstimateMethod::exact_quadratic) == 0.0);
  CHECK(estimate_sod(p, 1, EstimateMethod::probe_estimate, 16) == 0.0);
  CHECK_THROWS_AS(estimate_sod(p, 6, EstimateMethod::exact_quadratic), std::invalid_argument);
}

TEST_CASE("estimate_sod: identical clients give 0 for every s") {
  const auto p = identical_clients_problem(4, vec({2.0, 5.0}), vec({1.0, -1.0}));
  for (int s = 1; s <= 4; ++s) {
    CHECK(estimate_sod(p, s, EstimateMethod::exact_quadratic) == 0.0);
    CHECK(estimate_sod(p, s, EstimateMethod::probe_estimate, 8) <= 1e-12);
  }
}

TEST_CASE("estimate_sod: monotone bounds from smoothness") {
  const auto p = gen_quadratic(6, 3, 10, 25.0, 14);
  const double max_l = p.max_smoothness();
  for (int s = 1; s <= 6; ++s) {
    const double delta = estimate_sod(p, s, EstimateMethod::exact_quadratic);
    CHECK(delta <= 2.0 * max_l);
    CHECK(delta <= max_l);  // all clients convex
  }
}

TEST_CASE("estimate_sod: probe estimate never exceeds the exact value") {
  for (uint64_t seed : {3ULL, 19ULL, 101ULL}) {
    const auto p = gen_quadratic(5, 2, 7, 30.0, seed);
    for (int s : {2, 3, 5}) {
      const double exact = estimate_sod(p, s, EstimateMethod::exact_quadratic);
      const double probe = estimate_sod(p, s, EstimateMethod::probe_estimate, 32, seed);
      CHECK(probe <= exact + 1e-9);
      CHECK(probe >= 0.0);
    }
  }
}

TEST_CASE("estimate_sod: power iteration agrees with the exact diagonal maximum") {
  const auto p = gen_quadratic(4, 2, 9, 50.0, 77);
  for (int s : {2, 4}) {
    const double exact = estimate_sod(p, s, EstimateMethod::exact_quadratic);
    const double power = estimate_sod(p, s, EstimateMethod::power_iteration);
    CHECK(power == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("estimate_ed: Delta_n = 0 and boundary identities") {
  const auto p = gen_quadratic(5, 2, 6, 20.0, 4);
  CHECK(estimate_ed(p, 5, EstimateMethod::exact_quadratic) == 0.0);  // m_[n] vanishes
  CHECK(estimate_ed(p, 5, EstimateMethod::probe_estimate, 16) <= 1e-12);
  // delta_1 + Delta_1 = delta_max decomposition at s = 1: delta_1 = 0, so
  // Delta_1 must equal delta_max.
  const double ed1 = estimate_ed(p, 1, EstimateMethod::exact_quadratic);
  const double dmax = estimate_delta_max(p, EstimateMethod::exact_quadratic);
  CHECK(ed1 == doctest::Approx(dmax).epsilon(1e-12));
}

TEST_CASE("estimate_bgv: identical clients have zero variance") {
  auto p = identical_clients_problem(3, vec({1.0, 2.0}), vec({0.5, 0.5}));
  CHECK(estimate_bgv(p, 12) <= 1e-12);
  const auto report =
      build_dissimilarity_report(p, {1, 3}, EstimateMethod::exact_quadratic, 12, 5);
  CHECK(report.zeta <= 1e-12);
  CHECK_FALSE(report.zeta_unbounded_suspected);
}

TEST_CASE("estimate_bgv: constant gradient offsets give zeta = 1 at every probe") {
  // f_1' = x + 1 and f_2' = x - 1: unit curvature with centers -+1.
  ProblemInstance p;
  p.family = ProblemFamily::quadratic;
  p.n = 2;
  p.d = 1;
  p.clients.push_back(quad1(0, vec({1.0}), vec({-1.0})));
  p.clients.push_back(quad1(1, vec({1.0}), vec({1.0})));
  reference_solve(p, 1e-12);
  CHECK(estimate_bgv(p, 24) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("estimate_bgv: heterogeneous quadratics raise the unbounded flag") {
  const auto p = gen_quadratic(6, 2, 8, 40.0, 6);
  const auto report = build_dissimilarity_report(p, {6}, EstimateMethod::exact_quadratic, 24, 6);
  CHECK(report.zeta > 0.0);
  CHECK(report.zeta_unbounded_suspected);
}

TEST_CASE("dissimilarity report: sampled-subset flag and json shape") {
  const auto p = gen_quadratic(20, 1, 4, 10.0, 33);
  // C(20,10) = 184756 > 10^4: subset sampling kicks in and is flagged.
  const auto report =
      build_dissimilarity_report(p, {1, 10, 20}, EstimateMethod::exact_quadratic, 8, 9);
  CHECK(report.subsets_sampled);
  const auto j = report.to_json();
  CHECK(j.at("delta_s").size() == 3);
  CHECK(j.at("Delta_s").size() == 3);
  CHECK(j.at("method") == "exact_quadratic");
  CHECK(j.at("subsets_sampled_lower_bound").get<bool>());
  CHECK(j.at("delta_s")[0].at("value").get<double>() == 0.0);

  // Sampled estimates stay below the bound from all-subset smoothness.
  for (const auto& [s, v] : report.delta_s) CHECK(v <= p.max_smoothness());
}

TEST_CASE("estimate_sod: probe mode works on non-quadratic families") {
  const auto p = gen_polyhedron(4, 16, 4, 3.0, 12);
  const double delta = estimate_sod(p, 4, EstimateMethod::probe_estimate, 16);
  CHECK(delta >= 0.0);
  CHECK(delta <= 2.0 * p.max_smoothness());
  CHECK_THROWS_AS(estimate_sod(p, 4, EstimateMethod::exact_quadratic), std::invalid_argument);
}
