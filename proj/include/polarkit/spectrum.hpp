// Distance spectra of the one-step synthetic channels, the conservation law,
// the equidistant bound, and distance-spectrum union bounds.
//
// A good-channel competitor pair for reference (u1, u2) is u2' != u2 at
//   d^2 = ||s_f(u1,u2) - s_f(u1,u2')||^2 + ||s_u2 - s_u2'||^2,
// giving q-1 distances. A bad-channel competitor is (u1' != u1, u2') at
//   d^2 = ||s_f(u1,u2) - s_f(u1',u2')||^2 + ||s_u2 - s_u2'||^2,
// giving q(q-1) distances. Spectra are stored with squared distances
// normalized by Es, so d_min() is in sqrt(Es) units.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "polarkit/kernel.hpp"
#include "polarkit/signal_set.hpp"

namespace polarkit {

enum class ChannelRole { good, bad };

struct SpectrumLine {
  double d_sq;         // squared distance over Es
  std::int64_t count;  // competitor multiplicity at this line
};

struct DistanceSpectrum {
  std::vector<SpectrumLine> lines;  // ascending d_sq, counts >= 1
  Symbol u1 = 0;                    // reference pair the spectrum was computed from
  Symbol u2 = 0;
  ChannelRole role = ChannelRole::good;

  double d_min() const {
    if (lines.empty()) throw std::logic_error("empty distance spectrum");
    return std::sqrt(lines.front().d_sq);
  }

  std::int64_t total_count() const {
    std::int64_t total = 0;
    for (const SpectrumLine& line : lines) total += line.count;
    return total;
  }
};

namespace detail {

// Lines closer than this (on d^2/Es, with a relative scale for large values)
// collapse into one bin.
inline constexpr double kBinTol = 1e-9;

inline bool same_line(double a, double b) {
  return std::abs(a - b) <= kBinTol * std::max(1.0, std::min(a, b));
}

inline std::vector<SpectrumLine> bin_distances(std::vector<double>& d_sq_over_es) {
  std::sort(d_sq_over_es.begin(), d_sq_over_es.end());
  std::vector<SpectrumLine> lines;
  for (double v : d_sq_over_es) {
    if (!lines.empty() && same_line(lines.back().d_sq, v))
      ++lines.back().count;
    else
      lines.push_back({v, 1});
  }
  return lines;
}

inline void check_compatible(const SignalSet& set, const Kernel& kernel) {
  if (set.q() != kernel.q())
    throw std::invalid_argument("signal set and kernel have different q");
}

}  // namespace detail

/// Squared good-channel distance between references (u1,u2) and (u1,u2'),
/// in physical (coordinate) units.
inline double good_distance_sq(const SignalSet& set, const Kernel& kernel, Symbol u1,
                               Symbol u2, Symbol u2_alt) {
  detail::check_compatible(set, kernel);
  if (u2 == u2_alt) throw std::invalid_argument("good-channel distance needs u2 != u2'");
  return set.distance_sq(kernel.apply(u1, u2), kernel.apply(u1, u2_alt)) +
         set.distance_sq(u2, u2_alt);
}

inline double good_distance(const SignalSet& set, const Kernel& kernel, Symbol u1,
                            Symbol u2, Symbol u2_alt) {
  return std::sqrt(good_distance_sq(set, kernel, u1, u2, u2_alt));
}

/// Good-channel distance spectrum from reference (u1, u2): q-1 competitors.
inline DistanceSpectrum good_spectrum(const SignalSet& set, const Kernel& kernel,
                                      Symbol u1, Symbol u2) {
  detail::check_compatible(set, kernel);
  const int q = set.q();
  const double es = set.es();
  const Symbol x1 = kernel.apply(u1, u2);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(q - 1));
  for (Symbol alt = 0; alt < q; ++alt) {
    if (alt == u2) continue;
    const double d_sq =
        set.distance_sq(x1, kernel(u1, alt)) + set.distance_sq(u2, alt);
    values.push_back(d_sq / es);
  }
  return {detail::bin_distances(values), u1, u2, ChannelRole::good};
}

/// Bad-channel distance spectrum from reference (u1, u2): q(q-1) competitors
/// (u1' != u1, any u2').
inline DistanceSpectrum bad_spectrum(const SignalSet& set, const Kernel& kernel,
                                     Symbol u1, Symbol u2) {
  detail::check_compatible(set, kernel);
  const int q = set.q();
  const double es = set.es();
  const Symbol x1 = kernel.apply(u1, u2);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(q) * static_cast<std::size_t>(q - 1));
  for (Symbol u1_alt = 0; u1_alt < q; ++u1_alt) {
    if (u1_alt == u1) continue;
    for (Symbol u2_alt = 0; u2_alt < q; ++u2_alt) {
      const double d_sq =
          set.distance_sq(x1, kernel(u1_alt, u2_alt)) + set.distance_sq(u2, u2_alt);
      values.push_back(d_sq / es);
    }
  }
  return {detail::bin_distances(values), u1, u2, ChannelRole::bad};
}

inline bool spectra_equal(const DistanceSpectrum& a, const DistanceSpectrum& b) {
  if (a.lines.size() != b.lines.size()) return false;
  for (std::size_t i = 0; i < a.lines.size(); ++i) {
    if (a.lines[i].count != b.lines[i].count) return false;
    if (!detail::same_line(a.lines[i].d_sq, b.lines[i].d_sq)) return false;
  }
  return true;
}

/// Total order used to rank spectra by error-rate dominance at high SNR:
/// walking distances in ascending order, the spectrum with the smaller count
/// at the first differing line is better. Returns -1 if a is worse than b,
/// 0 if equal, +1 if a is better.
inline int compare_spectra(const DistanceSpectrum& a, const DistanceSpectrum& b) {
  std::size_t i = 0, j = 0;
  while (i < a.lines.size() && j < b.lines.size()) {
    const SpectrumLine& la = a.lines[i];
    const SpectrumLine& lb = b.lines[j];
    if (detail::same_line(la.d_sq, lb.d_sq)) {
      if (la.count != lb.count) return la.count < lb.count ? 1 : -1;
      ++i;
      ++j;
    } else if (la.d_sq < lb.d_sq) {
      return -1;  // a has competitors at a distance where b has none
    } else {
      return 1;
    }
  }
  if (i < a.lines.size()) return -1;
  if (j < b.lines.size()) return 1;
  return 0;
}

/// Gaussian tail Q(x) = P(N(0,1) > x).
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

/// Union bound over a spectrum: Pe <= sum N(d) * Q((d/sqrt(Es)) * sqrt(snr/2))
/// with snr = Es/N0 in linear units.
inline double union_bound(const DistanceSpectrum& spectrum, double snr_linear) {
  if (!(snr_linear > 0.0)) throw std::invalid_argument("union bound requires snr > 0");
  const double scale = std::sqrt(snr_linear / 2.0);
  double pe = 0.0;
  for (const SpectrumLine& line : spectrum.lines)
    pe += static_cast<double>(line.count) * q_function(std::sqrt(line.d_sq) * scale);
  return pe;
}

/// Spectra for all q^2 references, with the uniformity flag and the
/// reference whose union bound is largest at the 10 dB probe SNR.
struct SpectrumReport {
  std::vector<DistanceSpectrum> spectra;  // indexed by u1*q + u2
  Symbol worst_u1 = 0;
  Symbol worst_u2 = 0;
  bool uniform = false;

  const DistanceSpectrum& at(Symbol u1, Symbol u2, int q) const {
    return spectra[static_cast<std::size_t>(u1) * static_cast<std::size_t>(q) +
                   static_cast<std::size_t>(u2)];
  }
  const DistanceSpectrum& worst(int q) const { return at(worst_u1, worst_u2, q); }
};

inline SpectrumReport report(const SignalSet& set, const Kernel& kernel,
                             ChannelRole role) {
  detail::check_compatible(set, kernel);
  const int q = set.q();
  constexpr double kProbeSnr = 10.0;  // 10 dB
  SpectrumReport rep;
  rep.spectra.reserve(static_cast<std::size_t>(q) * static_cast<std::size_t>(q));
  double worst_bound = -1.0;
  rep.uniform = true;
  for (Symbol u1 = 0; u1 < q; ++u1) {
    for (Symbol u2 = 0; u2 < q; ++u2) {
      DistanceSpectrum s = role == ChannelRole::good ? good_spectrum(set, kernel, u1, u2)
                                                     : bad_spectrum(set, kernel, u1, u2);
      const double bound = union_bound(s, kProbeSnr);
      if (bound > worst_bound) {
        worst_bound = bound;
        rep.worst_u1 = u1;
        rep.worst_u2 = u2;
      }
      if (!rep.spectra.empty() && !spectra_equal(rep.spectra.front(), s))
        rep.uniform = false;
      rep.spectra.push_back(std::move(s));
    }
  }
  return rep;
}

/// Equidistance check scope: every reference, or only references with a
/// fixed u1 (the optimized non-PSK sets are equidistant only for some u1).
struct EquidistancePolicy {
  std::optional<Symbol> fixed;

  static EquidistancePolicy all_references() { return {}; }
  static EquidistancePolicy fixed_u1(Symbol v) { return {v}; }
};

/// True iff every good-channel spectrum under the policy is a single line
/// of multiplicity q-1.
inline bool is_equidistant(const SignalSet& set, const Kernel& kernel,
                           EquidistancePolicy policy = {}) {
  detail::check_compatible(set, kernel);
  const int q = set.q();
  if (policy.fixed && (*policy.fixed < 0 || *policy.fixed >= q))
    throw std::invalid_argument("fixed u1 out of range");
  for (Symbol u1 = 0; u1 < q; ++u1) {
    if (policy.fixed && *policy.fixed != u1) continue;
    for (Symbol u2 = 0; u2 < q; ++u2) {
      const DistanceSpectrum s = good_spectrum(set, kernel, u1, u2);
      if (s.lines.size() != 1 || s.lines.front().count != q - 1) return false;
    }
  }
  return true;
}

/// Sum of squared good-channel distances over all u2' (the conserved
/// quantity): equals 2 * sum_k ||s_k - s_0||^2 for group-matched sets,
/// independent of kernel and reference. Physical units.
inline double conservation_sum(const SignalSet& set, const Kernel& kernel, Symbol u1,
                               Symbol u2) {
  detail::check_compatible(set, kernel);
  const int q = set.q();
  const Symbol x1 = kernel.apply(u1, u2);
  double sum = 0.0;
  for (Symbol alt = 0; alt < q; ++alt)
    sum += set.distance_sq(x1, kernel(u1, alt)) + set.distance_sq(u2, alt);
  return sum;
}

/// The equidistant ceiling on the good-channel minimum distance:
/// sqrt((2/(q-1)) * sum_k ||s_k - s_0||^2), in physical units.
inline double equidistant_bound(const SignalSet& set) {
  const int q = set.q();
  double sum = 0.0;
  for (Symbol k = 1; k < q; ++k) sum += set.distance_sq(k, 0);
  return std::sqrt(2.0 * sum / static_cast<double>(q - 1));
}

}  // namespace polarkit
