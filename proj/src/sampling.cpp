#include "sdane/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sdane {

SampleDraw sample_subset(int n, int s, RngStream& rng) {
  if (s < 1 || s > n) throw std::invalid_argument("sample_subset: need 1 <= s <= n");
  const long stream_position = rng.position();
  std::vector<int> pool(static_cast<size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int k = 0; k < s; ++k) {
    const long j = k + rng.uniform_int(n - k);
    std::swap(pool[static_cast<size_t>(k)], pool[static_cast<size_t>(j)]);
  }
  SampleDraw draw;
  draw.ids.assign(pool.begin(), pool.begin() + s);
  std::sort(draw.ids.begin(), draw.ids.end());
  draw.seed_stream_position = stream_position;
  return draw;
}

double binomial_coefficient(int n, int s) {
  if (s < 0 || s > n) return 0.0;
  s = std::min(s, n - s);
  double c = 1.0;
  for (int k = 1; k <= s; ++k) c = c * (n - s + k) / k;
  return c;
}

std::vector<std::vector<int>> enumerate_subsets(int n, int s, long cap) {
  if (s < 1 || s > n) throw std::invalid_argument("enumerate_subsets: need 1 <= s <= n");
  if (binomial_coefficient(n, s) > static_cast<double>(cap))
    throw std::invalid_argument("enumerate_subsets: C(n,s) exceeds enumeration cap");
  std::vector<std::vector<int>> out;
  std::vector<int> idx(static_cast<size_t>(s));
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    out.push_back(idx);
    int k = s - 1;
    while (k >= 0 && idx[static_cast<size_t>(k)] == n - s + k) --k;
    if (k < 0) break;
    ++idx[static_cast<size_t>(k)];
    for (int j = k + 1; j < s; ++j)
      idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
  }
  return out;
}

double subset_mean_variance_oracle(const std::vector<Vec>& values, int s) {
  const int n = static_cast<int>(values.size());
  if (n < 2) throw std::invalid_argument("subset_mean_variance_oracle: need n >= 2");
  const auto subsets = enumerate_subsets(n, s);
  Vec mean = Vec::Zero(values[0].size());
  for (const auto& v : values) mean += v;
  mean /= static_cast<double>(n);
  double acc = 0.0;
  for (const auto& subset : subsets) {
    Vec sub_mean = Vec::Zero(mean.size());
    for (int id : subset) sub_mean += values[static_cast<size_t>(id)];
    sub_mean /= static_cast<double>(s);
    acc += (sub_mean - mean).squaredNorm();
  }
  return acc / static_cast<double>(subsets.size());
}

}  // namespace sdane
