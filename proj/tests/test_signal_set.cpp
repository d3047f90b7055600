#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "polarkit/signal_set.hpp"

using namespace polarkit;
using Catch::Approx;

TEST_CASE("psk geometry") {
  SECTION("q=2 is antipodal") {
    const SignalSet s = psk(2, 1.0);
    CHECK(s.point(0).x == Approx(1.0));
    CHECK(s.point(0).y == Approx(0.0).margin(1e-15));
    CHECK(s.point(1).x == Approx(-1.0));
    CHECK(s.point(1).y == Approx(0.0).margin(1e-12));
  }
  SECTION("5-PSK nearest-neighbor distance") {
    const SignalSet s = psk(5, 1.0);
    const double exact = std::sqrt(2.0 - 2.0 * std::cos(2.0 * M_PI / 5.0));
    CHECK(s.distance(0, 1) == Approx(exact).epsilon(1e-14));
    CHECK(std::abs(s.distance(0, 1) - 1.176) < 5e-3);  // printed 3-digit value
  }
  SECTION("8-PSK chord identity") {
    const SignalSet s = psk(8, 1.0);
    CHECK(s.distance_sq(0, 1) + s.distance_sq(0, 3) ==
          Approx(2.0 * s.distance_sq(0, 2)).epsilon(1e-13));
    CHECK(s.distance_sq(0, 4) == Approx(4.0).epsilon(1e-13));
    CHECK(s.distance_sq(0, 1) + s.distance_sq(0, 3) == Approx(4.0).epsilon(1e-13));
  }
  SECTION("es is stored exactly and equals the mean energy") {
    const SignalSet s = psk(7, 2.5);
    CHECK(s.es() == 2.5);
    CHECK(SignalSet::mean_energy(s.points()) == Approx(2.5).epsilon(1e-14));
  }
  SECTION("rejects bad arguments") {
    CHECK_THROWS_AS(psk(1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(psk(5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(psk(5, -1.0), std::invalid_argument);
  }
}

TEST_CASE("equidistant quad set") {
  const SignalSet s = equidistant_quad(1.0);
  CHECK(s.q() == 4);
  CHECK(s.point(1).x == Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(s.point(1).y == Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-14));
  CHECK(s.distance(0, 1) == Approx(2.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(s.point(1).x * s.point(1).x + s.point(1).y * s.point(1).y ==
        Approx(1.0).epsilon(1e-14));
  SECTION("scales with es") {
    const SignalSet t = equidistant_quad(4.0);
    CHECK(t.es() == 4.0);
    CHECK(t.distance(0, 1) == Approx(2.0 * 2.0 / std::sqrt(3.0)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(equidistant_quad(0.0), std::invalid_argument);
}

TEST_CASE("equidistant pam3 set") {
  const SignalSet s = equidistant_pam3();
  CHECK(s.q() == 3);
  CHECK(s.dimension() == 1);
  // Energy follows from the coordinates, not a hardcoded value.
  const double h = std::sqrt(3.0) / 2.0;
  const double es_expected = (2.0 * (1.0 + h) * (1.0 + h) + h * h) / 3.0;
  CHECK(s.es() == Approx(es_expected).epsilon(1e-14));
  CHECK(s.es() == Approx(2.57135).margin(1e-4));
  CHECK(s.distance(0, 1) == Approx(1.0).epsilon(1e-14));
  CHECK(s.distance(1, 2) == Approx(1.0 + std::sqrt(3.0)).epsilon(1e-14));
  CHECK(s.distance(0, 2) == Approx(2.0 + std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("distance_sq") {
  const SignalSet s = psk(5, 1.0);
  CHECK(s.distance_sq(0, 2) == Approx(2.0 - 2.0 * std::cos(4.0 * M_PI / 5.0)).epsilon(1e-14));
  CHECK(s.distance_sq(0, 2) == Approx(3.61803).margin(1e-5));
  for (int k = 0; k < 5; ++k) CHECK(s.distance_sq(k, k) == 0.0);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(s.distance_sq(i, j) == s.distance_sq(j, i));
  CHECK(psk(4, 1.0).distance_sq(0, 2) == Approx(4.0).epsilon(1e-13));
  CHECK_THROWS_AS(s.distance_sq(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(s.distance_sq(-1, 0), std::invalid_argument);
}

TEST_CASE("rotated quad family") {
  SECTION("x = sqrt(2) recovers 4-PSK") {
    const SignalSet r = rotated_quad(std::sqrt(2.0));
    const SignalSet p = psk(4, 1.0);
    for (int k = 0; k < 4; ++k) {
      CHECK(r.point(k).x == Approx(p.point(k).x).margin(1e-12));
      CHECK(r.point(k).y == Approx(p.point(k).y).margin(1e-12));
    }
  }
  SECTION("x = 2/sqrt(3) is the equidistant set") {
    const SignalSet r = rotated_quad(2.0 / std::sqrt(3.0));
    const SignalSet e = equidistant_quad(1.0);
    for (int k = 0; k < 4; ++k) {
      CHECK(r.point(k).x == Approx(e.point(k).x).margin(1e-12));
      CHECK(r.point(k).y == Approx(e.point(k).y).margin(1e-12));
    }
    CHECK(r.distance_sq(0, 3) == Approx(4.0 - 4.0 / 3.0).epsilon(1e-13));
  }
  SECTION("family constraint ||s0-s3||^2 = 4 - x^2") {
    for (double x : {0.3, 0.7, 1.1, std::sqrt(2.0), 1.7, 1.95}) {
      const SignalSet r = rotated_quad(x);
      CHECK(r.distance(0, 1) == Approx(x).epsilon(1e-12));
      CHECK(r.distance_sq(0, 3) == Approx(4.0 - x * x).epsilon(1e-12));
      CHECK(r.es() == Approx(1.0).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(rotated_quad(0.0), std::invalid_argument);
  CHECK_THROWS_AS(rotated_quad(2.0), std::invalid_argument);
  CHECK_THROWS_AS(rotated_quad(-0.5), std::invalid_argument);
}

TEST_CASE("psk rotation invariance and group matching") {
  for (int q : {3, 5, 8, 16, 64}) {
    const SignalSet s = psk(q, 1.0);
    for (int k = 1; k < q; ++k) {
      const double ref = s.distance_sq(k, 0);
      for (int l = 0; l < q; ++l)
        REQUIRE(s.distance_sq((l + k) % q, l) == Approx(ref).margin(1e-12));
    }
    CHECK(is_group_matched(s));
  }
  CHECK_FALSE(is_group_matched(equidistant_quad(1.0)));
  CHECK_FALSE(is_group_matched(equidistant_pam3()));
}

TEST_CASE("distance sums from the reference point") {
  const SignalSet s5 = psk(5, 1.0);
  double sum5 = 0.0;
  for (int k = 1; k < 5; ++k) sum5 += s5.distance_sq(k, 0);
  CHECK(sum5 == Approx(10.0).epsilon(1e-13));
  const SignalSet s8 = psk(8, 1.0);
  double sum8 = 0.0;
  for (int k = 1; k < 8; ++k) sum8 += s8.distance_sq(k, 0);
  CHECK(sum8 == Approx(16.0).epsilon(1e-13));
}

TEST_CASE("defining equalities of the optimized sets") {
  const SignalSet quad = equidistant_quad(1.0);
  CHECK(quad.distance_sq(0, 1) + quad.distance_sq(0, 2) ==
        Approx(2.0 * quad.distance_sq(0, 3)).epsilon(1e-12));
  const SignalSet pam = equidistant_pam3();
  CHECK(pam.distance_sq(0, 1) + pam.distance_sq(0, 2) ==
        Approx(2.0 * pam.distance_sq(1, 2)).epsilon(1e-12));
}

TEST_CASE("normalize rescales to a target energy") {
  const SignalSet pam = equidistant_pam3();
  const SignalSet unit = normalize(pam, 1.0);
  CHECK(unit.es() == 1.0);
  CHECK(SignalSet::mean_energy(unit.points()) == Approx(1.0).epsilon(1e-13));
  // Distance ratios are preserved.
  CHECK(unit.distance(1, 2) / unit.distance(0, 1) ==
        Approx(pam.distance(1, 2) / pam.distance(0, 1)).epsilon(1e-13));
  CHECK_THROWS_AS(normalize(pam, -2.0), std::invalid_argument);
}

TEST_CASE("signal set invariants are enforced") {
  CHECK_THROWS_AS(SignalSet(2, {{1, 0}, {1, 0}}), std::invalid_argument);  // duplicate
  CHECK_THROWS_AS(SignalSet(3, {{1, 0}, {0, 1}}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SignalSet(1, {{1, 0.5}, {-1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(SignalSet(2, {{1, 0}, {-1, 0}}, 2.0), std::invalid_argument);  // wrong es
}
