// Signal set geometry: q-PSK constellations and the equidistance-optimized
// planar/line sets, with exact per-symbol energy accounting.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polarkit {

using Symbol = int;

// A labeled point in at most two real dimensions; the second coordinate is
// zero for 1-D sets. Coordinates are in sqrt(joule) units.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance_sq(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// q labeled points with mean symbol energy `es` (joule per signaling
/// interval: per 2 dimensions for planar sets, per 1 dimension for line
/// sets). Immutable after construction; labels are 0..q-1 in point order.
class SignalSet {
 public:
  // `es` must match the mean of squared norms to 1e-12 relative.
  SignalSet(int dimension, std::vector<Point> points, double es)
      : dimension_(dimension), points_(std::move(points)), es_(es) {
    check_invariants();
  }

  // Convenience: es computed from the points.
  SignalSet(int dimension, std::vector<Point> points)
      : dimension_(dimension), points_(std::move(points)) {
    es_ = mean_energy(points_);
    check_invariants();
  }

  int q() const { return static_cast<int>(points_.size()); }
  int dimension() const { return dimension_; }
  double es() const { return es_; }
  const std::vector<Point>& points() const { return points_; }

  const Point& point(Symbol k) const {
    check_label(k);
    return points_[static_cast<std::size_t>(k)];
  }

  /// Squared Euclidean distance between points i and j.
  double distance_sq(Symbol i, Symbol j) const {
    check_label(i);
    check_label(j);
    return polarkit::distance_sq(points_[static_cast<std::size_t>(i)],
                                 points_[static_cast<std::size_t>(j)]);
  }

  double distance(Symbol i, Symbol j) const { return std::sqrt(distance_sq(i, j)); }

  static double mean_energy(const std::vector<Point>& pts) {
    double sum = 0.0;
    for (const Point& p : pts) sum += p.x * p.x + p.y * p.y;
    return pts.empty() ? 0.0 : sum / static_cast<double>(pts.size());
  }

 private:
  void check_label(Symbol k) const {
    if (k < 0 || k >= q())
      throw std::invalid_argument("signal label " + std::to_string(k) +
                                  " out of range 0.." + std::to_string(q() - 1));
  }

  void check_invariants() const {
    if (dimension_ != 1 && dimension_ != 2)
      throw std::invalid_argument("signal set dimension must be 1 or 2");
    if (points_.size() < 2)
      throw std::invalid_argument("signal set needs at least 2 points");
    if (dimension_ == 1) {
      for (const Point& p : points_)
        if (p.y != 0.0)
          throw std::invalid_argument("1-D signal set has a nonzero second coordinate");
    }
    for (const Point& p : points_)
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw std::invalid_argument("signal point is not finite");
    for (std::size_t i = 0; i < points_.size(); ++i)
      for (std::size_t j = i + 1; j < points_.size(); ++j)
        if (polarkit::distance_sq(points_[i], points_[j]) <= 0.0)
          throw std::invalid_argument("signal points must be pairwise distinct");
    const double mean = mean_energy(points_);
    if (!(es_ > 0.0) || std::abs(mean - es_) > 1e-12 * es_)
      throw std::invalid_argument("es does not match the mean squared norm of the points");
  }

  int dimension_;
  std::vector<Point> points_;
  double es_ = 0.0;
};

/// q-PSK: q points equally spaced on the circle of radius sqrt(es),
/// point k at angle 2*pi*k/q.
inline SignalSet psk(int q, double es) {
  if (q < 2) throw std::invalid_argument("psk requires q >= 2");
  if (!(es > 0.0)) throw std::invalid_argument("psk requires es > 0");
  const double r = std::sqrt(es);
  std::vector<Point> pts(static_cast<std::size_t>(q));
  for (int k = 0; k < q; ++k) {
    const double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(q);
    pts[static_cast<std::size_t>(k)] = {r * std::cos(phi), r * std::sin(phi)};
  }
  return SignalSet(2, std::move(pts), es);
}

/// The rotated 4-point family on the unit circle (Es = 1): s0 = (1,0),
/// s2 = (-1,0), and s1 = -s3 placed so that ||s0-s1|| = x. The complementary
/// diagonal satisfies ||s0-s3||^2 = 4 - x^2.
inline SignalSet rotated_quad(double x) {
  if (!(x > 0.0) || !(x < 2.0))
    throw std::invalid_argument("rotated_quad requires 0 < x < 2");
  const double c = 1.0 - x * x / 2.0;
  const double s = std::sqrt(1.0 - c * c);
  std::vector<Point> pts = {{1.0, 0.0}, {c, s}, {-1.0, 0.0}, {-c, -s}};
  return SignalSet(2, std::move(pts), 1.0);
}

/// The 4-point set whose pairwise distances make the permutation transform
/// equidistant: sqrt(es) * {(1,0), (1/3, 2*sqrt(2)/3), (-1,0), (-1/3, -2*sqrt(2)/3)}.
inline SignalSet equidistant_quad(double es) {
  if (!(es > 0.0)) throw std::invalid_argument("equidistant_quad requires es > 0");
  const double r = std::sqrt(es);
  const double a = 1.0 / 3.0;
  const double b = 2.0 * std::sqrt(2.0) / 3.0;
  std::vector<Point> pts = {{r, 0.0}, {r * a, r * b}, {-r, 0.0}, {-r * a, -r * b}};
  return SignalSet(2, std::move(pts), es);
}

/// The 3-point line set with gaps 1 and 1+sqrt(3), endpoints symmetric about
/// the origin: {-1-sqrt(3)/2, -sqrt(3)/2, 1+sqrt(3)/2}. Energy is whatever
/// the geometry gives (~2.5714); rescale with normalize() if needed.
inline SignalSet equidistant_pam3() {
  const double h = std::sqrt(3.0) / 2.0;
  std::vector<Point> pts = {{-1.0 - h, 0.0}, {-h, 0.0}, {1.0 + h, 0.0}};
  return SignalSet(1, std::move(pts));
}

/// Rescale a set to a target mean energy.
inline SignalSet normalize(const SignalSet& set, double es) {
  if (!(es > 0.0)) throw std::invalid_argument("normalize requires es > 0");
  const double scale = std::sqrt(es / set.es());
  std::vector<Point> pts = set.points();
  for (Point& p : pts) {
    p.x *= scale;
    p.y *= scale;
  }
  return SignalSet(set.dimension(), std::move(pts), es);
}

/// True when the set is matched to the cyclic group of its labels:
/// ||s_{(l+k) mod q} - s_l|| = ||s_k - s_0|| for all l, k. PSK sets qualify;
/// the equidistance-optimized sets do not.
inline bool is_group_matched(const SignalSet& set, double rel_tol = 1e-9) {
  const int q = set.q();
  for (int k = 1; k < q; ++k) {
    const double ref = set.distance_sq(k, 0);
    for (int l = 0; l < q; ++l) {
      const double d = set.distance_sq((l + k) % q, l);
      if (std::abs(d - ref) > rel_tol * std::max(1.0, ref)) return false;
    }
  }
  return true;
}

}  // namespace polarkit
