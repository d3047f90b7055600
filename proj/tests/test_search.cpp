#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "polarkit/search.hpp"

using namespace polarkit;
using Catch::Approx;

namespace {

// Independent scorer for the optimality oracle: enumerates every one of the
// q! permutation kernels (no canonicalization) and keeps the best
// worst-reference spectrum, re-deriving spectra from raw distances.
DistanceSpectrum brute_force_best(const SignalSet& set) {
  const int q = set.q();
  std::vector<Symbol> image(static_cast<std::size_t>(q));
  for (int v = 0; v < q; ++v) image[static_cast<std::size_t>(v)] = v;
  DistanceSpectrum best;
  bool first = true;
  do {
    const Kernel k = permutation_kernel(q, Permutation(image));
    DistanceSpectrum worst;
    bool worst_set = false;
    for (Symbol u1 = 0; u1 < q; ++u1)
      for (Symbol u2 = 0; u2 < q; ++u2) {
        DistanceSpectrum s = good_spectrum(set, k, u1, u2);
        if (!worst_set || compare_spectra(s, worst) < 0) {
          worst = std::move(s);
          worst_set = true;
        }
      }
    if (first || compare_spectra(worst, best) > 0) {
      best = std::move(worst);
      first = false;
    }
  } while (std::next_permutation(image.begin(), image.end()));
  return best;
}

bool contains_pi(const std::vector<Permutation>& optima, const std::vector<Symbol>& image) {
  return std::any_of(optima.begin(), optima.end(),
                     [&](const Permutation& p) { return p.image() == image; });
}

}  // namespace

TEST_CASE("search reproduces the q=5 equidistant optima") {
  const SearchResult r = search_permutations(psk(5, 1.0));
  CHECK(r.explored == 24);
  CHECK(r.certificate == SearchCertificate::equidistant);
  CHECK(r.best_pi.image() == std::vector<Symbol>{0, 2, 4, 1, 3});
  CHECK(r.spectrum.d_min() == Approx(std::sqrt(5.0)).epsilon(1e-12));
  REQUIRE(r.spectrum.lines.size() == 1);
  CHECK(r.spectrum.lines[0].count == 4);
  REQUIRE(r.optima.size() == 2);
  CHECK(contains_pi(r.optima, {0, 2, 4, 1, 3}));
  CHECK(contains_pi(r.optima, {0, 3, 1, 4, 2}));
}

TEST_CASE("no equidistant transform exists for 4-PSK") {
  const SearchResult r = search_permutations(psk(4, 1.0));
  CHECK(r.explored == 6);
  CHECK(r.certificate != SearchCertificate::equidistant);
  REQUIRE(r.spectrum.lines.size() == 2);
  CHECK(std::sqrt(r.spectrum.lines[0].d_sq) == Approx(2.0).epsilon(1e-12));
  CHECK(r.spectrum.lines[0].count == 1);
  CHECK(std::sqrt(r.spectrum.lines[1].d_sq) == Approx(std::sqrt(6.0)).epsilon(1e-12));
  CHECK(r.spectrum.lines[1].count == 2);
}

TEST_CASE("q=8 search finds the almost-equidistant transform") {
  const SearchResult r = search_permutations(psk(8, 1.0), 2);
  CHECK(r.explored == 5040);
  CHECK(r.certificate == SearchCertificate::almost_equidistant);
  CHECK(r.spectrum.d_min() == Approx(2.0).epsilon(1e-12));
  REQUIRE(r.spectrum.lines.size() == 2);
  CHECK(r.spectrum.lines[0].count == 6);
  CHECK(r.spectrum.lines[1].count == 1);
  CHECK(std::sqrt(r.spectrum.lines[1].d_sq) == Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(contains_pi(r.optima, {0, 3, 6, 1, 4, 7, 2, 5}));
  // No permutation kernel attains the equidistant ceiling of 2.138.
  CHECK(r.spectrum.d_min() < equidistant_bound(psk(8, 1.0)) - 0.1);
}

TEST_CASE("3-PSK: every candidate is equidistant, identity wins ties") {
  const SearchResult r = search_permutations(psk(3, 1.0));
  CHECK(r.explored == 2);
  CHECK(r.certificate == SearchCertificate::equidistant);
  CHECK(r.best_pi.image() == std::vector<Symbol>{0, 1, 2});
  CHECK(r.optima.size() == 2);  // both canonical candidates are optimal
}

TEST_CASE("search refuses oversized alphabets") {
  CHECK_THROWS_AS(search_permutations(psk(11, 1.0)), SearchSizeError);
}

TEST_CASE("search is independent of the thread count") {
  for (int q : {4, 5, 8}) {
    const SearchResult a = search_permutations(psk(q, 1.0), 1);
    const SearchResult b = search_permutations(psk(q, 1.0), 3);
    CHECK(a.best_pi.image() == b.best_pi.image());
    CHECK(a.optima.size() == b.optima.size());
    for (std::size_t i = 0; i < a.optima.size(); ++i)
      CHECK(a.optima[i].image() == b.optima[i].image());
    CHECK(spectra_equal(a.spectrum, b.spectrum));
  }
}

TEST_CASE("optimality oracle: full q! brute force agrees") {
  for (int q : {3, 4, 5}) {
    const SignalSet set = psk(q, 1.0);
    const DistanceSpectrum oracle = brute_force_best(set);
    const SearchResult r = search_permutations(set);
    CHECK(compare_spectra(r.spectrum, oracle) == 0);
  }
}

TEST_CASE("canonicalization is sound: shifting pi leaves spectra unchanged") {
  const SignalSet set = psk(5, 1.0);
  std::vector<Symbol> tail{1, 2, 3, 4};
  do {
    std::vector<Symbol> image{0};
    image.insert(image.end(), tail.begin(), tail.end());
    const Kernel base = permutation_kernel(5, Permutation(image));
    const DistanceSpectrum ref = detail::worst_good_spectrum(set, base);
    for (int shift = 1; shift < 5; ++shift) {
      std::vector<Symbol> shifted(image.size());
      for (std::size_t i = 0; i < image.size(); ++i)
        shifted[i] = (image[i] + shift) % 5;
      const Kernel k = permutation_kernel(5, Permutation(shifted));
      CHECK(compare_spectra(detail::worst_good_spectrum(set, k), ref) == 0);
    }
  } while (std::next_permutation(tail.begin(), tail.end()));
}

TEST_CASE("quad rotation optimization") {
  const QuadRotationResult r = optimize_quad_rotation();
  CHECK(r.x == Approx(2.0 / std::sqrt(3.0)).margin(1e-12));
  CHECK(std::abs((r.x * r.x + 4.0) - 2.0 * (4.0 - r.x * r.x)) < 1e-10);
  // The solved set matches the closed-form construction.
  const SignalSet closed = equidistant_quad(1.0);
  for (int k = 0; k < 4; ++k) {
    CHECK(r.set.point(k).x == Approx(closed.point(k).x).margin(1e-12));
    CHECK(r.set.point(k).y == Approx(closed.point(k).y).margin(1e-12));
  }
  const Kernel kq = permutation_kernel(4, Permutation({0, 2, 1, 3}));
  for (Symbol u1 : {0, 2}) {
    const DistanceSpectrum s = good_spectrum(r.set, kq, u1, 0);
    REQUIRE(s.lines.size() == 1);
    CHECK(s.lines[0].count == 3);
    CHECK(s.d_min() == Approx(2.30940).margin(1e-5));
  }
  CHECK(is_equidistant(r.set, kq, EquidistancePolicy::fixed_u1(2)));
}

TEST_CASE("pam3 shift optimization") {
  const Pam3ShiftResult r = optimize_pam3_shift();
  CHECK(r.beta_over_alpha == Approx(1.0 + std::sqrt(3.0)).margin(1e-12));
  const double a = 1.0, b = r.beta_over_alpha;
  CHECK(std::abs((a * a + (a + b) * (a + b)) - 2.0 * b * b) < 1e-10);
  const SignalSet closed = equidistant_pam3();
  for (int k = 0; k < 3; ++k)
    CHECK(r.set.point(k).x == Approx(closed.point(k).x).margin(1e-12));
  CHECK(r.set.es() == Approx(2.5713).margin(1e-3));
  const Kernel kp = permutation_kernel(3, Permutation({0, 2, 1}));
  const DistanceSpectrum s = good_spectrum(r.set, kp, 0, 0);
  REQUIRE(s.lines.size() == 1);
  CHECK(s.lines[0].count == 2);
  CHECK(std::abs(s.d_min() - 2.415) < 0.01);
  CHECK(is_equidistant(r.set, kp, EquidistancePolicy::fixed_u1(0)));
}
