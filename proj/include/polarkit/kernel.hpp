// Polarizing kernels f : X x X -> X over X = {0..q-1}, invertible in each
// argument (every row and every column of the table is a permutation).

#pragma once

#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polarkit/signal_set.hpp"

namespace polarkit {

/// A bijection on 0..q-1.
class Permutation {
 public:
  explicit Permutation(std::vector<Symbol> image) : image_(std::move(image)) {
    const int q = static_cast<int>(image_.size());
    if (q < 1) throw std::invalid_argument("permutation must not be empty");
    std::vector<bool> seen(static_cast<std::size_t>(q), false);
    for (Symbol v : image_) {
      if (v < 0 || v >= q || seen[static_cast<std::size_t>(v)])
        throw std::invalid_argument("permutation image is not a bijection on 0.." +
                                    std::to_string(q - 1));
      seen[static_cast<std::size_t>(v)] = true;
    }
  }

  static Permutation identity(int q) {
    std::vector<Symbol> img(static_cast<std::size_t>(q));
    for (int v = 0; v < q; ++v) img[static_cast<std::size_t>(v)] = v;
    return Permutation(std::move(img));
  }

  int q() const { return static_cast<int>(image_.size()); }

  Symbol operator()(Symbol v) const {
    assert(v >= 0 && v < q());
    return image_[static_cast<std::size_t>(v)];
  }

  const std::vector<Symbol>& image() const { return image_; }

  bool operator==(const Permutation& other) const { return image_ == other.image_; }

 private:
  std::vector<Symbol> image_;
};

/// A kernel stored as an explicit q x q table, so searched or imported
/// kernels outside the u1 + pi(u2) family are representable. Construction
/// checks only size and symbol range; validate() checks the two
/// invertibility properties.
class Kernel {
 public:
  Kernel(int q, std::vector<Symbol> table) : q_(q), table_(std::move(table)) {
    if (q_ < 2) throw std::invalid_argument("kernel requires q >= 2");
    if (table_.size() != static_cast<std::size_t>(q_) * static_cast<std::size_t>(q_))
      throw std::invalid_argument("kernel table must have q*q entries");
    for (Symbol v : table_)
      if (v < 0 || v >= q_)
        throw std::invalid_argument("kernel table entry out of range 0.." +
                                    std::to_string(q_ - 1));
  }

  int q() const { return q_; }
  const std::vector<Symbol>& table() const { return table_; }

  /// Unchecked lookup f(u1, u2); arguments must be in range.
  Symbol operator()(Symbol u1, Symbol u2) const {
    assert(u1 >= 0 && u1 < q_ && u2 >= 0 && u2 < q_);
    return table_[static_cast<std::size_t>(u1) * static_cast<std::size_t>(q_) +
                  static_cast<std::size_t>(u2)];
  }

  /// Range-checked f(u1, u2).
  Symbol apply(Symbol u1, Symbol u2) const {
    check_arg(u1, "u1");
    check_arg(u2, "u2");
    return (*this)(u1, u2);
  }

  /// The unique u2 with f(u1, u2) = x1; first match if the row is not a
  /// permutation (valid kernels have exactly one).
  Symbol invert_u2(Symbol u1, Symbol x1) const {
    check_arg(u1, "u1");
    check_arg(x1, "x1");
    for (Symbol u2 = 0; u2 < q_; ++u2)
      if ((*this)(u1, u2) == x1) return u2;
    throw std::invalid_argument("kernel row " + std::to_string(u1) +
                                " does not reach x1=" + std::to_string(x1));
  }

  /// True iff every row and every column of the table is a permutation.
  bool validate() const {
    std::vector<bool> seen(static_cast<std::size_t>(q_));
    for (Symbol u1 = 0; u1 < q_; ++u1) {
      seen.assign(seen.size(), false);
      for (Symbol u2 = 0; u2 < q_; ++u2) {
        const auto v = static_cast<std::size_t>((*this)(u1, u2));
        if (seen[v]) return false;
        seen[v] = true;
      }
    }
    for (Symbol u2 = 0; u2 < q_; ++u2) {
      seen.assign(seen.size(), false);
      for (Symbol u1 = 0; u1 < q_; ++u1) {
        const auto v = static_cast<std::size_t>((*this)(u1, u2));
        if (seen[v]) return false;
        seen[v] = true;
      }
    }
    return true;
  }

  bool operator==(const Kernel& other) const {
    return q_ == other.q_ && table_ == other.table_;
  }

 private:
  void check_arg(Symbol v, const char* name) const {
    if (v < 0 || v >= q_)
      throw std::invalid_argument(std::string(name) + "=" + std::to_string(v) +
                                  " out of range 0.." + std::to_string(q_ - 1));
  }

  int q_;
  std::vector<Symbol> table_;
};

/// f(u1, u2) = (u1 + u2) mod q.
inline Kernel standard_kernel(int q) {
  if (q < 2) throw std::invalid_argument("standard_kernel requires q >= 2");
  std::vector<Symbol> table(static_cast<std::size_t>(q) * static_cast<std::size_t>(q));
  for (Symbol u1 = 0; u1 < q; ++u1)
    for (Symbol u2 = 0; u2 < q; ++u2)
      table[static_cast<std::size_t>(u1 * q + u2)] = (u1 + u2) % q;
  return Kernel(q, std::move(table));
}

/// f(u1, u2) = (u1 + pi(u2)) mod q. Valid by construction for any bijection.
inline Kernel permutation_kernel(int q, const Permutation& pi) {
  if (pi.q() != q) throw std::invalid_argument("permutation size does not match q");
  std::vector<Symbol> table(static_cast<std::size_t>(q) * static_cast<std::size_t>(q));
  for (Symbol u1 = 0; u1 < q; ++u1)
    for (Symbol u2 = 0; u2 < q; ++u2)
      table[static_cast<std::size_t>(u1 * q + u2)] = (u1 + pi(u2)) % q;
  return Kernel(q, std::move(table));
}

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Reed-Solomon type kernel f(u1, u2) = (u1 + gamma*u2) mod q for prime q.
/// Any nonzero gamma is invertible mod a prime, so the table is valid.
inline Kernel reed_solomon_kernel(int q, int gamma) {
  if (!is_prime(q)) throw std::invalid_argument("reed_solomon_kernel requires prime q");
  if (gamma < 1 || gamma > q - 1)
    throw std::invalid_argument("reed_solomon_kernel requires 1 <= gamma <= q-1");
  std::vector<Symbol> image(static_cast<std::size_t>(q));
  for (Symbol u2 = 0; u2 < q; ++u2)
    image[static_cast<std::size_t>(u2)] = (gamma * u2) % q;
  return permutation_kernel(q, Permutation(std::move(image)));
}

}  // namespace polarkit
