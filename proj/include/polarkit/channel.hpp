// AWGN channel model: modulation, noise sampling, and per-symbol likelihood
// evaluation.
//
// Convention pinned across the toolkit: SNR = Es/N0 with N0 the noise power
// per 2 dimensions, so the per-dimension variance is sigma1^2 = N0/2. This
// makes the pairwise error probability Q((d/sqrt(Es)) * sqrt(SNR/2)).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "polarkit/rng.hpp"
#include "polarkit/signal_set.hpp"

namespace polarkit {

struct ChannelParams {
  double snr_db = 0.0;
  double snr_linear = 1.0;
  double n0 = 0.0;        // noise power per 2 dimensions
  double sigma1_sq = 0.0; // per-dimension variance

  // snr_db = +infinity models the noiseless channel (n0 = 0).
  ChannelParams(double snr_db_in, double es) : snr_db(snr_db_in) {
    if (std::isnan(snr_db) || !(es > 0.0))
      throw std::invalid_argument("channel params need finite es > 0 and a valid SNR");
    snr_linear = std::pow(10.0, snr_db / 10.0);
    if (!(snr_linear > 0.0))
      throw std::invalid_argument("SNR must be > 0 in linear units");
    n0 = std::isinf(snr_linear) ? 0.0 : es / snr_linear;
    sigma1_sq = n0 / 2.0;
  }
};

/// Normalized posterior over the q symbols given one observation.
class LikelihoodVector {
 public:
  explicit LikelihoodVector(int q) : p_(static_cast<std::size_t>(q), 0.0) {}

  static LikelihoodVector delta(int q, Symbol s) {
    LikelihoodVector v(q);
    v.p_[static_cast<std::size_t>(s)] = 1.0;
    return v;
  }

  static LikelihoodVector uniform(int q) {
    LikelihoodVector v(q);
    const double u = 1.0 / static_cast<double>(q);
    for (double& e : v.p_) e = u;
    return v;
  }

  int q() const { return static_cast<int>(p_.size()); }
  double operator[](Symbol s) const { return p_[static_cast<std::size_t>(s)]; }
  double& operator[](Symbol s) { return p_[static_cast<std::size_t>(s)]; }

  double sum() const {
    double t = 0.0;
    for (double e : p_) t += e;
    return t;
  }

  /// Scale to sum 1; an all-zero vector becomes uniform (every candidate is
  /// equally impossible, which only happens after a forced wrong decision).
  void normalize() {
    const double t = sum();
    if (t > 0.0) {
      const double inv = 1.0 / t;
      for (double& e : p_) e *= inv;
    } else {
      const double u = 1.0 / static_cast<double>(p_.size());
      for (double& e : p_) e = u;
    }
  }

  /// Lowest index among maxima.
  Symbol argmax() const {
    Symbol best = 0;
    for (Symbol s = 1; s < q(); ++s)
      if (p_[static_cast<std::size_t>(s)] > p_[static_cast<std::size_t>(best)]) best = s;
    return best;
  }

  bool operator==(const LikelihoodVector& other) const { return p_ == other.p_; }

 private:
  std::vector<double> p_;
};

/// y_i = s_{x_i} + n_i with i.i.d. Gaussian noise of variance sigma1^2 per
/// real dimension (one dimension for line sets, both for planar sets).
inline std::vector<Point> transmit(const SignalSet& set, std::span<const Symbol> symbols,
                                   const ChannelParams& params, TrialRng& rng) {
  const double sigma = std::sqrt(params.sigma1_sq);
  std::vector<Point> out;
  out.reserve(symbols.size());
  for (Symbol x : symbols) {
    Point y = set.point(x);  // range-checks the label
    if (sigma > 0.0) {
      y.x += sigma * rng.next_gaussian();
      if (set.dimension() == 2) y.y += sigma * rng.next_gaussian();
    }
    out.push_back(y);
  }
  return out;
}

inline std::vector<Point> transmit(const SignalSet& set, std::span<const Symbol> symbols,
                                   const ChannelParams& params, std::uint64_t rng_seed) {
  TrialRng rng(rng_seed, 0, 0);
  return transmit(set, symbols, params, rng);
}

/// Posterior probs[x] proportional to exp(-||y - s_x||^2 / (2 sigma1^2)),
/// computed with max-subtraction. The noiseless limit returns a point mass
/// on the nearest symbol (split uniformly over exact ties).
inline LikelihoodVector likelihoods(const SignalSet& set, const Point& y,
                                    const ChannelParams& params) {
  if (!std::isfinite(y.x) || !std::isfinite(y.y))
    throw std::invalid_argument("observation is not finite");
  const int q = set.q();
  LikelihoodVector probs(q);
  if (params.sigma1_sq == 0.0) {
    double best = distance_sq(y, set.point(0));
    for (Symbol s = 1; s < q; ++s)
      best = std::min(best, distance_sq(y, set.point(s)));
    for (Symbol s = 0; s < q; ++s)
      probs[s] = distance_sq(y, set.point(s)) <= best ? 1.0 : 0.0;
    probs.normalize();
    return probs;
  }
  const double scale = -1.0 / (2.0 * params.sigma1_sq);
  double max_exponent = -std::numeric_limits<double>::infinity();
  for (Symbol s = 0; s < q; ++s) {
    probs[s] = scale * distance_sq(y, set.point(s));
    max_exponent = std::max(max_exponent, probs[s]);
  }
  for (Symbol s = 0; s < q; ++s) probs[s] = std::exp(probs[s] - max_exponent);
  probs.normalize();
  return probs;
}

}  // namespace polarkit
