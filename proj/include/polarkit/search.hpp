// Exhaustive search over the u1 + pi(u2) kernel family, and the two
// one-parameter signal-set optimizations solved by bisection.
//
// The search enumerates the (q-1)! permutations with pi(0) = 0; adding a
// constant to pi only rotates the x1 labels, which leaves every PSK distance
// (and, more generally, every worst-reference spectrum of a group-matched
// set) unchanged. Candidates are ranked by their worst-reference good
// spectrum under compare_spectra, which maximizes d_min, then minimizes
// N(d_min), then compares the remaining lines; ties resolve to the
// lexicographically smallest pi.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "polarkit/spectrum.hpp"

namespace polarkit {

/// Thrown when an exhaustive search would be too large; the CLI maps it to
/// the runtime-refusal exit code.
struct SearchSizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SearchCertificate { equidistant, almost_equidistant, best_found };

inline const char* to_string(SearchCertificate c) {
  switch (c) {
    case SearchCertificate::equidistant: return "equidistant";
    case SearchCertificate::almost_equidistant: return "almost-equidistant";
    default: return "best-found";
  }
}

struct SearchResult {
  Permutation best_pi;
  DistanceSpectrum spectrum;  // worst-reference good spectrum of best_pi
  SearchCertificate certificate = SearchCertificate::best_found;
  std::uint64_t explored = 0;
  std::vector<Permutation> optima;  // every optimal canonical pi, in lexicographic order
};

namespace detail {

inline std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

// The index-th permutation (lexicographic) of the sorted item list.
inline std::vector<Symbol> unrank_permutation(std::uint64_t index,
                                              std::vector<Symbol> items) {
  std::vector<Symbol> out;
  out.reserve(items.size());
  std::uint64_t radix = factorial(static_cast<int>(items.size()));
  while (!items.empty()) {
    radix /= items.size();
    const auto pos = static_cast<std::size_t>(index / radix);
    index %= radix;
    out.push_back(items[pos]);
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(pos));
  }
  return out;
}

// The reference whose good spectrum is worst under compare_spectra.
inline DistanceSpectrum worst_good_spectrum(const SignalSet& set, const Kernel& kernel) {
  const int q = set.q();
  DistanceSpectrum worst;
  bool first = true;
  for (Symbol u1 = 0; u1 < q; ++u1) {
    for (Symbol u2 = 0; u2 < q; ++u2) {
      DistanceSpectrum s = good_spectrum(set, kernel, u1, u2);
      if (first || compare_spectra(s, worst) < 0) {
        worst = std::move(s);
        first = false;
      }
    }
  }
  return worst;
}

inline SearchCertificate classify_spectrum(const DistanceSpectrum& s, int q) {
  if (s.lines.size() == 1 && s.lines.front().count == q - 1)
    return SearchCertificate::equidistant;
  if (s.lines.size() == 2 && s.lines.front().count == q - 2 && s.lines.back().count == 1)
    return SearchCertificate::almost_equidistant;
  return SearchCertificate::best_found;
}

struct SearchShard {
  std::vector<std::vector<Symbol>> optima;  // in candidate-index order
  DistanceSpectrum best;
  bool any = false;
};

}  // namespace detail

/// Exhaustive search over canonical permutations (pi(0) = 0) for the kernel
/// u1 + pi(u2) with the best worst-reference good spectrum. Thread count
/// does not affect the result. Refuses q > 10 (factorial growth).
inline SearchResult search_permutations(const SignalSet& set, int threads = 1) {
  const int q = set.q();
  if (q > 10)
    throw SearchSizeError("exhaustive permutation search is limited to q <= 10 ((q-1)! "
                          "candidates); q=" + std::to_string(q) +
                          " needs a heuristic search, which this tool does not provide");
  const std::uint64_t total = detail::factorial(q - 1);
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  const auto worker_count =
      static_cast<std::uint64_t>(threads) < total ? static_cast<std::uint64_t>(threads) : total;

  std::vector<Symbol> tail(static_cast<std::size_t>(q - 1));
  for (int v = 1; v < q; ++v) tail[static_cast<std::size_t>(v - 1)] = v;

  std::vector<detail::SearchShard> shards(worker_count);
  auto run_shard = [&](std::uint64_t shard_idx) {
    const std::uint64_t lo = total * shard_idx / worker_count;
    const std::uint64_t hi = total * (shard_idx + 1) / worker_count;
    if (lo >= hi) return;
    detail::SearchShard& shard = shards[shard_idx];
    std::vector<Symbol> suffix = detail::unrank_permutation(lo, tail);
    std::vector<Symbol> image(static_cast<std::size_t>(q));
    image[0] = 0;
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      std::copy(suffix.begin(), suffix.end(), image.begin() + 1);
      const Kernel kernel = permutation_kernel(q, Permutation(image));
      DistanceSpectrum s = detail::worst_good_spectrum(set, kernel);
      const int cmp = shard.any ? compare_spectra(s, shard.best) : 1;
      if (cmp > 0) {
        shard.best = s;
        shard.optima.clear();
        shard.optima.push_back(image);
        shard.any = true;
      } else if (cmp == 0) {
        shard.optima.push_back(image);
      }
      std::next_permutation(suffix.begin(), suffix.end());
    }
  };

  if (worker_count == 1) {
    run_shard(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (std::uint64_t w = 0; w < worker_count; ++w)
      pool.emplace_back(run_shard, w);
    for (std::thread& t : pool) t.join();
  }

  // Deterministic merge: shards cover candidate-index ranges in order.
  DistanceSpectrum best;
  std::vector<std::vector<Symbol>> optima;
  bool any = false;
  for (detail::SearchShard& shard : shards) {
    if (!shard.any) continue;
    const int cmp = any ? compare_spectra(shard.best, best) : 1;
    if (cmp > 0) {
      best = shard.best;
      optima = std::move(shard.optima);
      any = true;
    } else if (cmp == 0) {
      for (auto& img : shard.optima) optima.push_back(std::move(img));
    }
  }

  const SearchCertificate certificate = detail::classify_spectrum(best, q);
  SearchResult result{Permutation(optima.front()), std::move(best), certificate, total, {}};
  result.optima.reserve(optima.size());
  for (auto& img : optima) result.optima.emplace_back(std::move(img));
  return result;
}

namespace detail {

// Bisection for a strictly monotone continuous g on [lo, hi] with a sign
// change; returns the root to about 1e-13 absolute.
inline double bisect(const std::function<double(double)>& g, double lo, double hi) {
  double flo = g(lo);
  const double fhi = g(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::logic_error("bisection interval does not bracket a root");
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = g(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

struct QuadRotationResult {
  double x;       // ||s0 - s1|| in sqrt(Es) units at the equidistance point
  SignalSet set;  // the rotated set at that x (Es = 1)
};

/// Solve ||s0-s1||^2 + ||s0-s2||^2 = 2 ||s0-s3||^2 over the rotated 4-point
/// family. The root is found numerically (x^2 + 4 = 2(4 - x^2) happens at
/// x = 2/sqrt(3)).
inline QuadRotationResult optimize_quad_rotation() {
  const double x = detail::bisect(
      [](double v) { return (v * v + 4.0) - 2.0 * (4.0 - v * v); }, 0.1, 1.9);
  return {x, rotated_quad(x)};
}

struct Pam3ShiftResult {
  double beta_over_alpha;  // second gap over first gap at the equidistance point
  SignalSet set;           // the 3-point line set with alpha = 1
};

/// Solve alpha^2 + (alpha+beta)^2 = 2 beta^2 for collinear points with gaps
/// alpha, beta (alpha = 1); the root is beta = 1 + sqrt(3). The returned set
/// places the endpoints symmetrically about the origin.
inline Pam3ShiftResult optimize_pam3_shift() {
  const double beta = detail::bisect(
      [](double b) { return (1.0 + (1.0 + b) * (1.0 + b)) - 2.0 * b * b; }, 1.0, 4.0);
  const double half_span = 0.5 * (1.0 + beta);
  std::vector<Point> pts = {{-half_span, 0.0}, {-half_span + 1.0, 0.0}, {half_span, 0.0}};
  return {beta, SignalSet(1, std::move(pts))};
}

}  // namespace polarkit
