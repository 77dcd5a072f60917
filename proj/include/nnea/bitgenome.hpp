#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

#include "nnea/rng.hpp"

namespace nnea {

// fixed-length bit string; position i lives in word i/64 at bit i%64, and
// unused high bits of the last word are kept zero
class Genome {
 public:
  Genome() = default;

  explicit Genome(int n) : n_(n), w_((static_cast<size_t>(n) + 63) / 64, 0) {
    assert(n >= 1);
  }

  // "110...", position 0 first
  static Genome from_string(const std::string& bits);
  std::string to_string() const;

  int size() const { return n_; }

  bool bit(int i) const {
    assert(i >= 0 && i < n_);
    return (w_[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1;
  }

  void set(int i, bool v) {
    assert(i >= 0 && i < n_);
    const std::uint64_t m = 1ULL << (i & 63);
    if (v)
      w_[static_cast<size_t>(i) >> 6] |= m;
    else
      w_[static_cast<size_t>(i) >> 6] &= ~m;
  }

  void flip(int i) {
    assert(i >= 0 && i < n_);
    w_[static_cast<size_t>(i) >> 6] ^= 1ULL << (i & 63);
  }

  void set_all(bool v) {
    for (auto& w : w_) w = v ? ~0ULL : 0ULL;
    if (v) mask_tail();
  }

  void fill_random(Rng& rng) {
    for (auto& w : w_) w = rng.next();
    mask_tail();
  }

  int popcount() const {
    int c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }

  // run length of ones starting at position 0
  int leading_ones() const {
    int c = 0;
    for (auto w : w_) {
      const int k = std::countr_one(w);
      c += k;
      if (k < 64) break;
    }
    return c < n_ ? c : n_;
  }

  int leading_zeros() const {
    int c = 0;
    for (auto w : w_) {
      const int k = std::countr_zero(w);
      c += k;
      if (k < 64) break;
    }
    return c < n_ ? c : n_;
  }

  // state index for exact-model work; only defined for n <= 64
  std::uint64_t as_uint() const {
    assert(n_ >= 1 && n_ <= 64);
    return w_[0];
  }

  static Genome from_uint(int n, std::uint64_t x) {
    assert(n >= 1 && n <= 64);
    Genome g(n);
    g.w_[0] = x;
    g.mask_tail();
    assert(n == 64 || (x >> n) == 0);
    return g;
  }

  bool operator==(const Genome&) const = default;

 private:
  void mask_tail() {
    const int r = n_ & 63;
    if (r != 0) w_.back() &= (1ULL << r) - 1;
  }

  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace nnea
