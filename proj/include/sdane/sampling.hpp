#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sdane/rng.hpp"

namespace sdane {

using Vec = Eigen::VectorXd;

// One uniform without-replacement draw of s distinct client ids, sorted
// ascending so that every later reduction has a canonical order.
struct SampleDraw {
  std::vector<int> ids;
  long seed_stream_position{0};
};

// Uniform over all C(n, s) subsets; partial Fisher-Yates then sort.
SampleDraw sample_subset(int n, int s, RngStream& rng);

// All s-element subsets of [0, n), lexicographic. Throws if C(n, s) exceeds
// `cap` (the enumeration guard used by the dissimilarity estimators).
std::vector<std::vector<int>> enumerate_subsets(int n, int s, long cap = 10000);

double binomial_coefficient(int n, int s);

// Exact E[||x_bar_S - x_bar||^2] over all subsets of size s, by enumeration.
// Test oracle for the finite-population sampling variance identity.
double subset_mean_variance_oracle(const std::vector<Vec>& values, int s);

}  // namespace sdane
