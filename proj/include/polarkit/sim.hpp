// Monte Carlo campaigns over the one-step synthetic channels and full
// codes, with Wilson confidence intervals, optional union-bound overlays,
// and scheduling-independent reproducibility.
//
// Trials partition across workers by index range; each trial draws its
// randomness from (seed, snr_index, trial_index), so the error counts --
// and therefore every derived number -- are identical for any thread count.
// The optional early stop is evaluated on fixed-size chunks of trials to
// keep the stopping point deterministic as well.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "polarkit/channel.hpp"
#include "polarkit/polar.hpp"
#include "polarkit/rng.hpp"
#include "polarkit/spectrum.hpp"

namespace polarkit {

struct WilsonInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// 95% (by default) Wilson score interval for a binomial proportion; well
/// behaved at zero and small error counts.
inline WilsonInterval wilson_interval(std::uint64_t errors, std::uint64_t trials,
                                      double z = 1.959963984540054) {
  if (trials == 0) throw std::invalid_argument("wilson interval needs trials > 0");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (errors == 0) ci.lo = 0.0;
  if (errors == trials) ci.hi = 1.0;
  return ci;
}

struct SimPoint {
  double snr_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double rate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::optional<double> bound;
};

struct SimMetadata {
  std::string campaign;
  std::string role;  // "good" | "bad" | "fer"
  std::string set_desc;
  std::string kernel_desc;
  std::uint64_t seed = 0;
  std::uint64_t max_trials = 0;
  std::uint64_t early_stop_errors = 0;  // 0 = fixed trial count
  std::uint64_t early_stop_chunk = 0;
};

struct SimResult {
  SimMetadata metadata;
  std::vector<SimPoint> points;
};

struct SimOptions {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  int threads = 0;                      // <= 0: hardware concurrency
  std::uint64_t early_stop_errors = 0;  // 0 disables the early stop
  std::uint64_t early_stop_chunk = 100000;
  std::string campaign = "campaign";

  void check() const {
    if (trials < 1) throw std::invalid_argument("simulation needs trials >= 1");
    if (early_stop_errors > 0 && early_stop_chunk < 1)
      throw std::invalid_argument("early stop needs a positive chunk size");
  }
};

namespace detail {

// Runs `trial(rng, snr_index, trial_index) -> error?` over trials at one SNR
// point, chunked for the deterministic early stop.
template <typename TrialFn>
inline SimPoint run_point(double snr_db, std::size_t snr_index, const SimOptions& opt,
                          TrialFn&& trial) {
  int threads = opt.threads;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;

  std::uint64_t done = 0;
  std::uint64_t errors = 0;
  const std::uint64_t chunk_size =
      opt.early_stop_errors > 0 ? std::min<std::uint64_t>(opt.early_stop_chunk, opt.trials)
                                : opt.trials;
  while (done < opt.trials) {
    const std::uint64_t chunk = std::min<std::uint64_t>(chunk_size, opt.trials - done);
    const auto worker_count =
        std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), chunk);
    std::vector<std::uint64_t> partial(worker_count, 0);
    auto run_range = [&](std::uint64_t w) {
      const std::uint64_t lo = done + chunk * w / worker_count;
      const std::uint64_t hi = done + chunk * (w + 1) / worker_count;
      std::uint64_t local = 0;
      for (std::uint64_t t = lo; t < hi; ++t) {
        TrialRng rng(opt.seed, static_cast<std::uint64_t>(snr_index), t);
        if (trial(rng)) ++local;
      }
      partial[w] = local;
    };
    if (worker_count == 1) {
      run_range(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(worker_count);
      for (std::uint64_t w = 0; w < worker_count; ++w) pool.emplace_back(run_range, w);
      for (std::thread& t : pool) t.join();
    }
    for (std::uint64_t e : partial) errors += e;
    done += chunk;
    if (opt.early_stop_errors > 0 && errors >= opt.early_stop_errors) break;
  }

  const WilsonInterval ci = wilson_interval(errors, done);
  return {snr_db, done,  errors, static_cast<double>(errors) / static_cast<double>(done),
          ci.lo,  ci.hi, std::nullopt};
}

inline std::string describe_set(const SignalSet& set) {
  return "q=" + std::to_string(set.q()) + " dim=" + std::to_string(set.dimension());
}

}  // namespace detail

/// One-step good channel: transmit x1 = f(u1,u2), x2 = u2 and decide u2 with
/// u1 known; counts symbol errors on u2.
inline SimResult simulate_good_channel(const SignalSet& set, const Kernel& kernel,
                                       std::span<const double> snr_db_list,
                                       const SimOptions& opt) {
  opt.check();
  if (set.q() != kernel.q()) throw std::invalid_argument("set and kernel q mismatch");
  if (snr_db_list.empty()) throw std::invalid_argument("need at least one SNR point");
  const int q = set.q();
  SimResult result{{opt.campaign, "good", detail::describe_set(set), "", opt.seed,
                    opt.trials, opt.early_stop_errors, opt.early_stop_chunk},
                   {}};
  for (std::size_t si = 0; si < snr_db_list.size(); ++si) {
    const ChannelParams params(snr_db_list[si], set.es());
    auto trial = [&](TrialRng& rng) -> bool {
      const Symbol u1 = rng.next_below(q);
      const Symbol u2 = rng.next_below(q);
      const Symbol tx[2] = {kernel(u1, u2), u2};
      const std::vector<Point> y = transmit(set, tx, params, rng);
      const LikelihoodVector w1 = likelihoods(set, y[0], params);
      const LikelihoodVector w2 = likelihoods(set, y[1], params);
      Symbol best = 0;
      double best_p = -1.0;
      for (Symbol cand = 0; cand < q; ++cand) {
        const double p = w1[kernel(u1, cand)] * w2[cand];
        if (p > best_p) {
          best_p = p;
          best = cand;
        }
      }
      return best != u2;
    };
    result.points.push_back(detail::run_point(snr_db_list[si], si, opt, trial));
  }
  return result;
}

/// One-step bad channel: decide u1 by marginalizing over u2; counts symbol
/// errors on u1.
inline SimResult simulate_bad_channel(const SignalSet& set, const Kernel& kernel,
                                      std::span<const double> snr_db_list,
                                      const SimOptions& opt) {
  opt.check();
  if (set.q() != kernel.q()) throw std::invalid_argument("set and kernel q mismatch");
  if (snr_db_list.empty()) throw std::invalid_argument("need at least one SNR point");
  const int q = set.q();
  SimResult result{{opt.campaign, "bad", detail::describe_set(set), "", opt.seed,
                    opt.trials, opt.early_stop_errors, opt.early_stop_chunk},
                   {}};
  for (std::size_t si = 0; si < snr_db_list.size(); ++si) {
    const ChannelParams params(snr_db_list[si], set.es());
    auto trial = [&](TrialRng& rng) -> bool {
      const Symbol u1 = rng.next_below(q);
      const Symbol u2 = rng.next_below(q);
      const Symbol tx[2] = {kernel(u1, u2), u2};
      const std::vector<Point> y = transmit(set, tx, params, rng);
      const LikelihoodVector w1 = likelihoods(set, y[0], params);
      const LikelihoodVector w2 = likelihoods(set, y[1], params);
      Symbol best = 0;
      double best_p = -1.0;
      for (Symbol cand = 0; cand < q; ++cand) {
        double p = 0.0;
        for (Symbol v = 0; v < q; ++v) p += w1[kernel(cand, v)] * w2[v];
        if (p > best_p) {
          best_p = p;
          best = cand;
        }
      }
      return best != u1;
    };
    result.points.push_back(detail::run_point(snr_db_list[si], si, opt, trial));
  }
  return result;
}

struct FerConstruction {
  // 0 keeps config.frozen fixed for the whole campaign; otherwise the frozen
  // set is rebuilt at every SNR point from genie reliabilities.
  std::uint64_t construction_trials = 0;
  std::uint64_t construction_seed = 0;
};

/// Full-code frame error rate at rate K/N: encode K uniformly drawn
/// information symbols, transmit, SC-decode; a frame errs when any
/// information symbol is wrong.
inline SimResult simulate_fer(const PolarCodeConfig& config, int k,
                              std::span<const double> snr_db_list, const SimOptions& opt,
                              const FerConstruction& construction = {}) {
  opt.check();
  config.validate();
  const int len = config.block_length();
  if (k < 0 || k > len) throw std::invalid_argument("information size K must be in 0..N");
  if (snr_db_list.empty()) throw std::invalid_argument("need at least one SNR point");
  SimResult result{{opt.campaign, "fer", detail::describe_set(config.set),
                    "N=" + std::to_string(len) + " K=" + std::to_string(k), opt.seed,
                    opt.trials, opt.early_stop_errors, opt.early_stop_chunk},
                   {}};
  for (std::size_t si = 0; si < snr_db_list.size(); ++si) {
    const ChannelParams params(snr_db_list[si], config.set.es());
    PolarCodeConfig point_config = config;
    if (construction.construction_trials > 0) {
      const std::uint64_t cseed =
          hash_combine(construction.construction_seed, static_cast<std::uint64_t>(si));
      const auto table = genie_reliabilities(config, params, construction.construction_trials,
                                             cseed, opt.threads);
      point_config.frozen = select_information_set(table, k);
    } else if (static_cast<int>(config.frozen.size()) != len - k) {
      throw std::invalid_argument("fixed frozen set does not match N-K");
    }

    int threads = opt.threads;
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;

    std::vector<std::uint8_t> frozen_mask(static_cast<std::size_t>(len), 0);
    for (int idx : point_config.frozen) frozen_mask[static_cast<std::size_t>(idx)] = 1;

    // Thread-local decoder state, same per-trial structure as run_point.
    std::uint64_t done = 0;
    std::uint64_t errors = 0;
    const std::uint64_t chunk_size =
        opt.early_stop_errors > 0 ? std::min<std::uint64_t>(opt.early_stop_chunk, opt.trials)
                                  : opt.trials;
    while (done < opt.trials) {
      const std::uint64_t chunk = std::min<std::uint64_t>(chunk_size, opt.trials - done);
      const auto worker_count =
          std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), chunk);
      std::vector<std::uint64_t> partial(worker_count, 0);
      auto run_range = [&](std::uint64_t w) {
        const std::uint64_t lo = done + chunk * w / worker_count;
        const std::uint64_t hi = done + chunk * (w + 1) / worker_count;
        ScDecoder decoder(point_config);
        std::vector<Symbol> u(static_cast<std::size_t>(len));
        std::vector<LikelihoodVector> w_ch;
        w_ch.reserve(static_cast<std::size_t>(len));
        std::uint64_t local = 0;
        for (std::uint64_t t = lo; t < hi; ++t) {
          TrialRng rng(opt.seed, static_cast<std::uint64_t>(si), t);
          for (int i = 0; i < len; ++i)
            u[static_cast<std::size_t>(i)] = frozen_mask[static_cast<std::size_t>(i)]
                                                 ? point_config.frozen_value
                                                 : rng.next_below(config.q);
          const std::vector<Symbol> x = encode(point_config, u);
          const std::vector<Point> y = transmit(config.set, x, params, rng);
          w_ch.clear();
          for (const Point& obs : y) w_ch.push_back(likelihoods(config.set, obs, params));
          const std::vector<Symbol> u_hat = decoder.decode(w_ch);
          for (int i = 0; i < len; ++i) {
            if (!frozen_mask[static_cast<std::size_t>(i)] &&
                u_hat[static_cast<std::size_t>(i)] != u[static_cast<std::size_t>(i)]) {
              ++local;
              break;
            }
          }
        }
        partial[w] = local;
      };
      if (worker_count == 1) {
        run_range(0);
      } else {
        std::vector<std::thread> pool;
        pool.reserve(worker_count);
        for (std::uint64_t w = 0; w < worker_count; ++w) pool.emplace_back(run_range, w);
        for (std::thread& t : pool) t.join();
      }
      for (std::uint64_t e : partial) errors += e;
      done += chunk;
      if (opt.early_stop_errors > 0 && errors >= opt.early_stop_errors) break;
    }

    const WilsonInterval ci = wilson_interval(errors, done);
    result.points.push_back({snr_db_list[si], done, errors,
                             static_cast<double>(errors) / static_cast<double>(done), ci.lo,
                             ci.hi, std::nullopt});
  }
  return result;
}

/// Attach union-bound values at the result's SNR points. The spectrum role
/// must match the campaign role.
inline SimResult overlay_bounds(SimResult result, const DistanceSpectrum& spectrum) {
  const char* role = spectrum.role == ChannelRole::good ? "good" : "bad";
  if (result.metadata.role != role)
    throw std::invalid_argument("spectrum role '" + std::string(role) +
                                "' does not match campaign role '" + result.metadata.role +
                                "'");
  for (SimPoint& point : result.points)
    point.bound = union_bound(spectrum, std::pow(10.0, point.snr_db / 10.0));
  return result;
}

/// Fixed-format double: 6 significant digits, locale-independent.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline void write_sim_csv(std::ostream& os, const SimResult& result) {
  os << "snr_db,trials,errors,rate,ci_lo,ci_hi,bound\n";
  for (const SimPoint& p : result.points) {
    os << format_number(p.snr_db) << ',' << p.trials << ',' << p.errors << ','
       << format_number(p.rate) << ',' << format_number(p.ci_lo) << ','
       << format_number(p.ci_hi) << ',';
    if (p.bound) os << format_number(*p.bound);
    os << '\n';
  }
}

/// SNR (dB) at which the campaign crosses `target` rate, by log-linear
/// interpolation between the bracketing points; empty when the curve never
/// crosses it.
inline std::optional<double> snr_at_rate(const SimResult& result, double target) {
  for (std::size_t i = 1; i < result.points.size(); ++i) {
    const SimPoint& a = result.points[i - 1];
    const SimPoint& b = result.points[i];
    if (a.rate <= 0.0 || b.rate <= 0.0) continue;
    const bool crosses = (a.rate >= target && b.rate <= target) ||
                         (a.rate <= target && b.rate >= target);
    if (!crosses || a.rate == b.rate) continue;
    const double la = std::log10(a.rate);
    const double lb = std::log10(b.rate);
    const double f = (std::log10(target) - la) / (lb - la);
    return a.snr_db + f * (b.snr_db - a.snr_db);
  }
  return std::nullopt;
}

}  // namespace polarkit
