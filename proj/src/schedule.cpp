#include "istat/schedule.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace istat {

std::vector<std::uint64_t> CheckpointSchedule::points() const {
  if (start < 1) throw std::invalid_argument("schedule start must be >= 1");
  if (!(ratio > 1.0) || !std::isfinite(ratio)) throw std::invalid_argument("schedule ratio must be > 1");
  std::vector<std::uint64_t> out;
  long double n = static_cast<long double>(start);
  while (true) {
    const long double c = std::ceil(n);
    if (c > static_cast<long double>(ceiling)) break;
    const auto v = static_cast<std::uint64_t>(c);
    if (out.empty() || v > out.back()) out.push_back(v);
    n *= static_cast<long double>(ratio);
  }
  if (out.size() < kMinCheckpoints) {
    throw std::invalid_argument("schedule yields " + std::to_string(out.size()) +
                                " checkpoints below ceiling " + std::to_string(ceiling) + "; need at least 8");
  }
  return out;
}

CheckpointSchedule CheckpointSchedule::for_budget(std::uint64_t ceiling) {
  CheckpointSchedule s;
  s.ceiling = ceiling;
  s.ratio = 2.0;
  s.start = 1024;
  while (s.start > 1 && (s.start << (kMinCheckpoints - 1)) > ceiling) s.start >>= 1;
  return s;
}

}  // namespace istat
