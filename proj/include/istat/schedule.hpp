#pragma once

#include <cstdint>
#include <vector>

namespace istat {

inline constexpr std::uint64_t kDefaultPrefixCeiling = std::uint64_t{1} << 24;

/// Geometric checkpoints n_t = ceil(start * ratio^t), t = 0, 1, ..., kept while
/// n_t <= ceiling. Every prefix estimator in the library samples at these.
struct CheckpointSchedule {
  std::uint64_t start = 1024;
  double ratio = 2.0;
  std::uint64_t ceiling = kDefaultPrefixCeiling;

  /// Strictly increasing checkpoints. Throws std::invalid_argument when the
  /// parameters are malformed or yield fewer than 8 checkpoints.
  std::vector<std::uint64_t> points() const;

  void validate() const { (void)points(); }

  /// Index of the first checkpoint in the tail window (the last ceil(T/2)).
  static std::size_t tail_begin(std::size_t count) { return count - (count + 1) / 2; }

  /// A schedule for quick membership probes below `ceiling`: keeps ratio 2 and
  /// lowers `start` until at least 8 checkpoints fit.
  static CheckpointSchedule for_budget(std::uint64_t ceiling);
};

inline constexpr std::size_t kMinCheckpoints = 8;

}  // namespace istat
