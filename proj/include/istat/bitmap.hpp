#pragma once

#include <cstdint>
#include <vector>

namespace istat {

/// Membership bits for the integers 1..size(), with O(1) rank queries once
/// finalized. Bit j-1 of the word array stores membership of j.
class PrefixBitmap {
 public:
  PrefixBitmap() = default;
  explicit PrefixBitmap(std::uint64_t size);

  std::uint64_t size() const { return size_; }

  void set(std::uint64_t j) { words_[(j - 1) >> 6] |= (std::uint64_t{1} << ((j - 1) & 63)); }
  bool test(std::uint64_t j) const { return (words_[(j - 1) >> 6] >> ((j - 1) & 63)) & 1u; }

  /// Marks every integer in [lo, hi] (clipped to the bitmap).
  void set_range(std::uint64_t lo, std::uint64_t hi);

  std::vector<std::uint64_t>& words() { return words_; }
  const std::vector<std::uint64_t>& words() const { return words_; }

  /// Clears bits beyond size() and builds the rank table. Must be called
  /// after the last mutation and before rank().
  void finalize();

  /// Number of set bits among 1..n (n is clipped to size()).
  std::uint64_t rank(std::uint64_t n) const;

  /// Calls fn(j) for every member j <= n in increasing order.
  template <class Fn>
  void for_each(std::uint64_t n, Fn&& fn) const {
    if (n > size_) n = size_;
    const std::uint64_t last_word = n == 0 ? 0 : ((n - 1) >> 6) + 1;
    for (std::uint64_t w = 0; w < last_word; ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = __builtin_ctzll(bits);
        const std::uint64_t j = (w << 6) + static_cast<std::uint64_t>(b) + 1;
        if (j > n) return;
        fn(j);
        bits &= bits - 1;
      }
    }
  }

 private:
  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> words_;
  std::vector<std::uint64_t> cumulative_;  // set bits in words [0, i)
};

}  // namespace istat
