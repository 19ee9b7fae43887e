#include "istat/bitmap.hpp"

#include <algorithm>

namespace istat {

PrefixBitmap::PrefixBitmap(std::uint64_t size) : size_(size), words_((size + 63) / 64, 0) {}

void PrefixBitmap::set_range(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 1) lo = 1;
  hi = std::min(hi, size_);
  if (lo > hi) return;
  std::uint64_t first = lo - 1;
  const std::uint64_t last = hi - 1;
  while (first <= last && (first & 63) != 0) {
    words_[first >> 6] |= std::uint64_t{1} << (first & 63);
    ++first;
  }
  while (first + 63 <= last) {
    words_[first >> 6] = ~std::uint64_t{0};
    first += 64;
  }
  while (first <= last) {
    words_[first >> 6] |= std::uint64_t{1} << (first & 63);
    ++first;
  }
}

void PrefixBitmap::finalize() {
  if (size_ % 64 != 0 && !words_.empty()) {
    words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }
  cumulative_.assign(words_.size() + 1, 0);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    cumulative_[i + 1] = cumulative_[i] + static_cast<std::uint64_t>(__builtin_popcountll(words_[i]));
  }
}

std::uint64_t PrefixBitmap::rank(std::uint64_t n) const {
  if (n > size_) n = size_;
  const std::uint64_t full = n >> 6;
  std::uint64_t r = cumulative_[full];
  const std::uint64_t rem = n & 63;
  if (rem) r += static_cast<std::uint64_t>(__builtin_popcountll(words_[full] & ((std::uint64_t{1} << rem) - 1)));
  return r;
}

}  // namespace istat
