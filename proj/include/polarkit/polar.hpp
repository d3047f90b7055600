// q-ary polar encoder with per-stage kernel assignment, probability-domain
// successive-cancellation decoding, and Monte Carlo reliability measurement.
//
// Wiring (natural input order, no bit reversal): one encoding stage pairs
// adjacent entries of each block, writes the kernel outputs f(a, b) to the
// first half of the block and the pass-through symbols b to the second
// half; stage 1 acts on the whole input vector and stage n (the channel
// stage) on length-2 blocks next to the channel. Equivalently,
//   enc(u; k1..kn) = enc(a; k2..kn) ++ enc(b; k2..kn)
// with a_i = k1(u_{2i}, u_{2i+1}) and b_i = u_{2i+1}.
//
// The SC decoder walks u in natural index order. For each pair it applies
// the bad-channel merge  P(u1) ~ sum_u2 W1(f(u1,u2)) W2(u2)  and, once u1
// is decided, the good-channel merge  P(u2) ~ W1(f(u1,u2)) W2(u2), where W1
// and W2 are the running soft outputs of the two half-length decoders. The
// 1/q factors of the transition laws are dropped (decision-irrelevant); all
// merges renormalize.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "polarkit/channel.hpp"
#include "polarkit/kernel.hpp"
#include "polarkit/signal_set.hpp"

namespace polarkit {

struct PolarCodeConfig {
  int q;
  int n;                              // block length N = 2^n
  std::vector<Kernel> stage_kernels;  // size n; [0] = input side, [n-1] = channel side
  std::vector<int> frozen;            // sorted indices fixed to frozen_value
  SignalSet set;
  Symbol frozen_value = 0;

  int block_length() const { return 1 << n; }

  void validate() const {
    if (n < 1 || n > 20) throw std::invalid_argument("stage count n must be in 1..20");
    if (set.q() != q) throw std::invalid_argument("signal set q does not match config q");
    if (stage_kernels.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("config needs one kernel per stage");
    for (const Kernel& k : stage_kernels) {
      if (k.q() != q) throw std::invalid_argument("stage kernel q does not match config q");
      if (!k.validate()) throw std::invalid_argument("stage kernel is not invertible");
    }
    if (frozen.size() > static_cast<std::size_t>(block_length()))
      throw std::invalid_argument("more frozen indices than code symbols");
    for (std::size_t i = 0; i < frozen.size(); ++i) {
      if (frozen[i] < 0 || frozen[i] >= block_length())
        throw std::invalid_argument("frozen index out of range");
      if (i > 0 && frozen[i] <= frozen[i - 1])
        throw std::invalid_argument("frozen indices must be sorted and unique");
    }
    if (frozen_value < 0 || frozen_value >= q)
      throw std::invalid_argument("frozen value out of range");
  }
};

/// The same kernel at every stage.
inline std::vector<Kernel> uniform_stages(const Kernel& kernel, int n) {
  return std::vector<Kernel>(static_cast<std::size_t>(n), kernel);
}

/// The special kernel at the channel stage only, standard kernels elsewhere.
inline std::vector<Kernel> channel_stage_only(const Kernel& special, int n) {
  std::vector<Kernel> stages(static_cast<std::size_t>(n), standard_kernel(special.q()));
  stages.back() = special;
  return stages;
}

inline PolarCodeConfig make_config(SignalSet set, int n, std::vector<Kernel> stages,
                                   std::vector<int> frozen = {}) {
  PolarCodeConfig cfg{set.q(), n, std::move(stages), std::move(frozen), std::move(set)};
  std::sort(cfg.frozen.begin(), cfg.frozen.end());
  cfg.validate();
  return cfg;
}

/// Apply the n butterfly stages to u. Frozen positions are not special here;
/// the transform is a pure bijection on X^N.
inline std::vector<Symbol> encode(const PolarCodeConfig& config,
                                  std::span<const Symbol> u) {
  const int len = config.block_length();
  if (static_cast<int>(u.size()) != len)
    throw std::invalid_argument("input length is not 2^n");
  for (Symbol v : u)
    if (v < 0 || v >= config.q) throw std::invalid_argument("input symbol out of range");

  std::vector<Symbol> x(u.begin(), u.end());
  std::vector<Symbol> scratch(static_cast<std::size_t>(len));
  int block = len;
  for (int stage = 0; stage < config.n; ++stage, block /= 2) {
    const Kernel& k = config.stage_kernels[static_cast<std::size_t>(stage)];
    for (int base = 0; base < len; base += block) {
      const int half = block / 2;
      for (int i = 0; i < half; ++i) {
        const Symbol a = x[static_cast<std::size_t>(base + 2 * i)];
        const Symbol b = x[static_cast<std::size_t>(base + 2 * i + 1)];
        scratch[static_cast<std::size_t>(base + i)] = k(a, b);
        scratch[static_cast<std::size_t>(base + half + i)] = b;
      }
    }
    std::swap(x, scratch);
  }
  return x;
}

namespace detail {

inline void bad_merge(const Kernel& k, const LikelihoodVector& wa,
                      const LikelihoodVector& wb, LikelihoodVector& out) {
  const int q = k.q();
  for (Symbol u1 = 0; u1 < q; ++u1) {
    double p = 0.0;
    for (Symbol u2 = 0; u2 < q; ++u2) p += wa[k(u1, u2)] * wb[u2];
    out[u1] = p;
  }
  out.normalize();
}

inline void good_merge(const Kernel& k, Symbol u1, const LikelihoodVector& wa,
                       const LikelihoodVector& wb, LikelihoodVector& out) {
  const int q = k.q();
  for (Symbol u2 = 0; u2 < q; ++u2) out[u2] = wa[k(u1, u2)] * wb[u2];
  out.normalize();
}

// One node of the SC tree, covering a contiguous range of channel
// observations. Driven one u-symbol at a time: next_soft() yields the
// posterior of the pending symbol, push_decision() feeds the decision back.
// The two half-length children advance in lockstep, one derived symbol per
// decided pair. Buffers are reused across codewords via reset().
class ScNode {
 public:
  ScNode(int q, std::span<const Kernel> stages, int first_obs, int len)
      : len_(len), first_obs_(first_obs), wa_(q), wb_(q), soft_(q) {
    if (len_ > 1) {
      kernel_ = &stages.front();
      a_ = std::make_unique<ScNode>(q, stages.subspan(1), first_obs, len / 2);
      b_ = std::make_unique<ScNode>(q, stages.subspan(1), first_obs + len / 2, len / 2);
    }
  }

  void reset(const LikelihoodVector* obs) {
    obs_ = obs;
    step_ = 0;
    if (len_ > 1) {
      a_->reset(obs);
      b_->reset(obs);
    }
  }

  const LikelihoodVector& next_soft() {
    if (len_ == 1) return obs_[first_obs_];
    if (step_ % 2 == 0) {
      wa_ = a_->next_soft();
      wb_ = b_->next_soft();
      bad_merge(*kernel_, wa_, wb_, soft_);
    } else {
      good_merge(*kernel_, pair_first_, wa_, wb_, soft_);
    }
    return soft_;
  }

  void push_decision(Symbol d) {
    if (len_ == 1) {
      ++step_;
      return;
    }
    if (step_ % 2 == 0) {
      pair_first_ = d;
    } else {
      a_->push_decision((*kernel_)(pair_first_, d));
      b_->push_decision(d);
    }
    ++step_;
  }

 private:
  int len_;
  int first_obs_;
  const Kernel* kernel_ = nullptr;
  std::unique_ptr<ScNode> a_, b_;
  const LikelihoodVector* obs_ = nullptr;
  LikelihoodVector wa_, wb_, soft_;
  int step_ = 0;
  Symbol pair_first_ = 0;
};

}  // namespace detail

/// Reusable successive-cancellation decoder for one code configuration.
class ScDecoder {
 public:
  explicit ScDecoder(const PolarCodeConfig& config)
      : config_(config), frozen_mask_(static_cast<std::size_t>(config.block_length()), 0) {
    config_.validate();
    root_ = std::make_unique<detail::ScNode>(config_.q, config_.stage_kernels, 0,
                                             config_.block_length());
    for (int idx : config_.frozen) frozen_mask_[static_cast<std::size_t>(idx)] = 1;
  }

  const PolarCodeConfig& config() const { return config_; }

  /// Standard SC: frozen indices are forced to the frozen value, the rest
  /// take the argmax of their merged posterior (lowest symbol on ties).
  std::vector<Symbol> decode(std::span<const LikelihoodVector> channel) {
    check_channel(channel);
    const int len = config_.block_length();
    std::vector<Symbol> u_hat(static_cast<std::size_t>(len));
    root_->reset(channel.data());
    for (int i = 0; i < len; ++i) {
      const LikelihoodVector& soft = root_->next_soft();
      const Symbol d =
          frozen_mask_[static_cast<std::size_t>(i)] ? config_.frozen_value : soft.argmax();
      u_hat[static_cast<std::size_t>(i)] = d;
      root_->push_decision(d);
    }
    return u_hat;
  }

  /// Genie-aided pass: every index is decided by argmax and scored against
  /// the true symbol, then the true symbol is fed back. Fills one error flag
  /// per index. The frozen set is ignored (reliabilities are measured for
  /// the unfrozen transform).
  void genie_pass(std::span<const LikelihoodVector> channel, std::span<const Symbol> u_true,
                  std::span<std::uint8_t> error_out) {
    check_channel(channel);
    const int len = config_.block_length();
    if (static_cast<int>(u_true.size()) != len || static_cast<int>(error_out.size()) != len)
      throw std::invalid_argument("genie vectors must have length 2^n");
    root_->reset(channel.data());
    for (int i = 0; i < len; ++i) {
      const LikelihoodVector& soft = root_->next_soft();
      const Symbol truth = u_true[static_cast<std::size_t>(i)];
      error_out[static_cast<std::size_t>(i)] = soft.argmax() != truth ? 1 : 0;
      root_->push_decision(truth);
    }
  }

 private:
  void check_channel(std::span<const LikelihoodVector> channel) const {
    if (static_cast<int>(channel.size()) != config_.block_length())
      throw std::invalid_argument("need one likelihood vector per code symbol");
    for (const LikelihoodVector& w : channel)
      if (w.q() != config_.q)
        throw std::invalid_argument("likelihood vector alphabet does not match config");
  }

  PolarCodeConfig config_;
  std::unique_ptr<detail::ScNode> root_;
  std::vector<std::uint8_t> frozen_mask_;
};

inline std::vector<Symbol> sc_decode(const PolarCodeConfig& config,
                                     std::span<const LikelihoodVector> channel) {
  ScDecoder decoder(config);
  return decoder.decode(channel);
}

/// Same, with an explicit frozen set overriding the one in the config.
inline std::vector<Symbol> sc_decode(const PolarCodeConfig& config,
                                     std::span<const LikelihoodVector> channel,
                                     std::vector<int> frozen) {
  PolarCodeConfig cfg = config;
  cfg.frozen = std::move(frozen);
  std::sort(cfg.frozen.begin(), cfg.frozen.end());
  ScDecoder decoder(cfg);
  return decoder.decode(channel);
}

struct IndexReliability {
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
  double error_rate = 0.0;
  double std_err = 0.0;  // Monte Carlo standard error of error_rate
};

/// Per-index genie-aided first-decision error rates at the given channel
/// parameters, measured over `trials` random codewords. Deterministic for a
/// given seed regardless of thread count.
inline std::vector<IndexReliability> genie_reliabilities(const PolarCodeConfig& config,
                                                         const ChannelParams& params,
                                                         std::uint64_t trials,
                                                         std::uint64_t seed,
                                                         int threads = 0) {
  config.validate();
  if (trials < 1) throw std::invalid_argument("genie_reliabilities needs trials >= 1");
  const int len = config.block_length();
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  const auto worker_count =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), trials);

  std::vector<std::vector<std::uint64_t>> counts(
      worker_count, std::vector<std::uint64_t>(static_cast<std::size_t>(len), 0));

  auto run_range = [&](std::uint64_t w) {
    const std::uint64_t lo = trials * w / worker_count;
    const std::uint64_t hi = trials * (w + 1) / worker_count;
    ScDecoder decoder(config);
    std::vector<Symbol> u(static_cast<std::size_t>(len));
    std::vector<std::uint8_t> err(static_cast<std::size_t>(len));
    std::vector<LikelihoodVector> w_ch;
    w_ch.reserve(static_cast<std::size_t>(len));
    for (std::uint64_t t = lo; t < hi; ++t) {
      TrialRng rng(seed, 0, t);
      for (Symbol& s : u) s = rng.next_below(config.q);
      const std::vector<Symbol> x = encode(config, u);
      const std::vector<Point> y = transmit(config.set, x, params, rng);
      w_ch.clear();
      for (const Point& obs : y) w_ch.push_back(likelihoods(config.set, obs, params));
      decoder.genie_pass(w_ch, u, err);
      for (int i = 0; i < len; ++i)
        counts[w][static_cast<std::size_t>(i)] += err[static_cast<std::size_t>(i)];
    }
  };

  if (worker_count == 1) {
    run_range(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (std::uint64_t w = 0; w < worker_count; ++w) pool.emplace_back(run_range, w);
    for (std::thread& t : pool) t.join();
  }

  std::vector<IndexReliability> out(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) {
    std::uint64_t e = 0;
    for (const auto& c : counts) e += c[static_cast<std::size_t>(i)];
    const double rate = static_cast<double>(e) / static_cast<double>(trials);
    out[static_cast<std::size_t>(i)] = {
        e, trials, rate, std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials))};
  }
  return out;
}

/// Freeze the N-K least reliable indices (highest error rate; ties freeze
/// the lower index first). Returns the sorted frozen set.
inline std::vector<int> select_information_set(std::span<const double> error_rates, int k) {
  const int len = static_cast<int>(error_rates.size());
  if (k < 0 || k > len)
    throw std::invalid_argument("information size K must be in 0..N");
  std::vector<int> order(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ra = error_rates[static_cast<std::size_t>(a)];
    const double rb = error_rates[static_cast<std::size_t>(b)];
    if (ra != rb) return ra > rb;
    return a < b;
  });
  std::vector<int> frozen(order.begin(), order.begin() + (len - k));
  std::sort(frozen.begin(), frozen.end());
  return frozen;
}

inline std::vector<int> select_information_set(const std::vector<IndexReliability>& table,
                                               int k) {
  std::vector<double> rates;
  rates.reserve(table.size());
  for (const IndexReliability& r : table) rates.push_back(r.error_rate);
  return select_information_set(rates, k);
}

}  // namespace polarkit
