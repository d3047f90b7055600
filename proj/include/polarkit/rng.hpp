// Counter-based random streams for reproducible parallel simulation. A
// trial's randomness depends only on (campaign seed, stream id, trial
// index), never on scheduling, so campaigns are bit-identical for any
// worker count.

#pragma once

#include <cmath>
#include <cstdint>

namespace polarkit {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  std::uint64_t z = h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// The random stream of one simulation trial.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial)
      : gen_(hash_combine(hash_combine(hash_combine(0x243f6a8885a308d3ull, seed), stream),
                          trial)) {}

  std::uint64_t next_u64() { return gen_.next(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n).
  int next_below(int n) {
    const auto bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x > limit);
    return static_cast<int>(x % bound);
  }

  /// Standard normal via Box-Muller (explicit, so the stream is portable).
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u = 1.0 - next_unit();  // (0, 1]
    const double v = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double angle = 2.0 * M_PI * v;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

 private:
  SplitMix64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace polarkit
