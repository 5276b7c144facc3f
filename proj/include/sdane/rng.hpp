#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace sdane {

// Deterministic SplitMix64 stream with counter-based substream derivation.
// Every run-level source of randomness is derived from one master seed via
// substream(tag) chains, so results do not depend on call interleaving:
// e.g. master.substream(kSolver).substream(round).substream(client_id).
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : state_(seed), key_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    ++position_;
    return mix64(state_);
  }

  // Number of raw draws consumed so far.
  long position() const { return position_; }

  // Derives an independent stream keyed by (origin seed, tag); does not
  // advance this stream.
  RngStream substream(uint64_t tag) const {
    return RngStream(mix64(key_ ^ mix64(tag ^ 0x632BE59BD9B4E019ULL)));
  }

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), n >= 1.
  long uniform_int(long n) {
    // 128-bit multiply rejection-free mapping (bias < 2^-64, irrelevant here).
    const unsigned __int128 m =
        static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
    return static_cast<long>(m >> 64);
  }

  // Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // Gamma(alpha, 1) via Marsaglia-Tsang; alpha<1 handled by the boost trick.
  double gamma(double alpha) {
    if (alpha < 1.0) {
      const double u = uniform();
      return gamma(alpha + 1.0) * std::pow(u > 0.0 ? u : 5e-324, 1.0 / alpha);
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = 0.0, v = 0.0;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Dirichlet(alpha * 1_n) proportions.
  std::vector<double> dirichlet(double alpha, int n) {
    std::vector<double> p(static_cast<size_t>(n));
    double sum = 0.0;
    for (auto& pi : p) {
      pi = gamma(alpha);
      sum += pi;
    }
    for (auto& pi : p) pi = (sum > 0.0) ? pi / sum : 1.0 / n;
    return p;
  }

 private:
  static uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  uint64_t state_;
  uint64_t key_;
  long position_{0};
  double cached_{0.0};
  bool have_cached_{false};
};

// Fixed purpose tags for substream derivation.
enum RngPurpose : uint64_t {
  kRngSampling = 1,
  kRngSolver = 2,
  kRngGenerator = 3,
  kRngProbe = 4,
};

}  // namespace sdane
