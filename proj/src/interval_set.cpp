#include "istat/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace istat {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool Interval::contains(double v) const {
  if (v < lo || v > hi) return false;
  if (v == lo && !lo_closed) return false;
  if (v == hi && !hi_closed) return false;
  return true;
}

bool Interval::empty() const {
  if (lo > hi) return true;
  if (lo == hi) return !(lo_closed && hi_closed) || std::isinf(lo);
  return false;
}

std::string Interval::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << (lo_closed ? '[' : '(') << lo << ',' << hi << (hi_closed ? ']' : ')');
  return os.str();
}

IntervalSet::IntervalSet(std::initializer_list<Interval> parts) : parts_(parts) { normalize(); }

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) { normalize(); }

IntervalSet IntervalSet::everything() { return IntervalSet{Interval{-kInf, kInf, false, false}}; }

IntervalSet IntervalSet::ball(double centre, double radius) {
  return IntervalSet{Interval::open(centre - radius, centre + radius)};
}

IntervalSet IntervalSet::outside_ball(double centre, double radius) { return ball(centre, radius).complement(); }

bool IntervalSet::contains(double v) const {
  // parts are sorted; the first part whose upper end reaches v decides
  auto it = std::lower_bound(parts_.begin(), parts_.end(), v,
                             [](const Interval& p, double x) { return p.hi < x; });
  for (; it != parts_.end() && it->lo <= v; ++it) {
    if (it->contains(v)) return true;
  }
  return false;
}

void IntervalSet::normalize() {
  parts_.erase(std::remove_if(parts_.begin(), parts_.end(), [](const Interval& p) { return p.empty(); }),
               parts_.end());
  std::sort(parts_.begin(), parts_.end(), [](const Interval& a, const Interval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });
  std::vector<Interval> out;
  for (const auto& p : parts_) {
    if (!out.empty()) {
      auto& q = out.back();
      const bool touch = q.hi > p.lo || (q.hi == p.lo && (q.hi_closed || p.lo_closed));
      if (touch) {
        if (p.hi > q.hi) {
          q.hi = p.hi;
          q.hi_closed = p.hi_closed;
        } else if (p.hi == q.hi) {
          q.hi_closed = q.hi_closed || p.hi_closed;
        }
        continue;
      }
    }
    out.push_back(p);
  }
  parts_ = std::move(out);
}

IntervalSet IntervalSet::complement() const {
  std::vector<Interval> out;
  double lo = -kInf;
  bool lo_closed = false;
  for (const auto& p : parts_) {
    out.push_back(Interval{lo, p.lo, lo_closed, !p.lo_closed});
    lo = p.hi;
    lo_closed = !p.hi_closed;
  }
  out.push_back(Interval{lo, kInf, lo_closed, false});
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  auto parts = parts_;
  parts.insert(parts.end(), other.parts_.begin(), other.parts_.end());
  return IntervalSet(std::move(parts));
}

std::string IntervalSet::to_string() const {
  if (parts_.empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += " u ";
    out += parts_[i].to_string();
  }
  return out;
}

}  // namespace istat
