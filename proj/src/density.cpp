#include "istat/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace istat {

std::string to_string(DensityVerdict v) {
  switch (v) {
    case DensityVerdict::Exists: return "Exists";
    case DensityVerdict::DoesNotExist: return "DoesNotExist";
    case DensityVerdict::Zero: return "Zero";
    case DensityVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(Thinness t) {
  switch (t) {
    case Thinness::Thin: return "Thin";
    case Thinness::NonThin: return "NonThin";
    case Thinness::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

// Composite sets count through their bitmap; build it once at full size.
void warm(const IndexSet& k, std::uint64_t n, std::uint64_t ceiling) {
  IndexSet s = k;
  while (s.kind() == IndexSet::Kind::Complement) s = s.lhs();
  switch (s.kind()) {
    case IndexSet::Kind::Union:
    case IndexSet::Kind::Intersection:
    case IndexSet::Kind::SymmetricDifference:
    case IndexSet::Kind::Custom: (void)s.bitmap(n, ceiling); break;
    default: break;
  }
}

std::pair<double, double> min_max(const std::vector<double>& v, std::size_t from, std::size_t to) {
  const auto [lo, hi] = std::minmax_element(v.begin() + static_cast<std::ptrdiff_t>(from),
                                            v.begin() + static_cast<std::ptrdiff_t>(to));
  return {*lo, *hi};
}

}  // namespace

DensityEstimate natural_density(const IndexSet& k, const CheckpointSchedule& sched, double tol, DensityOptions opts) {
  if (!(tol > 0.0)) throw std::invalid_argument("density tolerance must be positive");
  DensityEstimate est;
  est.set = k.to_string();
  est.tol = tol;
  est.checkpoints = sched.points();
  const std::uint64_t last = est.checkpoints.back();
  warm(k, last, sched.ceiling);
  for (const auto n : est.checkpoints) {
    est.ratios.push_back(static_cast<double>(k.count(n, sched.ceiling)) / static_cast<double>(n));
  }

  const std::size_t count = est.ratios.size();
  const std::size_t tb = CheckpointSchedule::tail_begin(count);
  std::tie(est.liminf, est.limsup) = min_max(est.ratios, tb, count);
  const double gap = est.limsup - est.liminf;

  if (opts.use_exact) {
    if (const auto ex = k.exact_density()) {
      est.exact = ex;
      if (!ex->positive) {
        if (est.limsup <= tol) {
          est.verdict = DensityVerdict::Zero;
          est.value = 0.0;
          est.note = "density 0 from structure";
        } else {
          est.note = "density 0 from structure, not yet reached in the prefix";
        }
      } else if (gap <= tol) {
        est.verdict = DensityVerdict::Exists;
        est.value = ex->value;
        est.note = "density from structure";
      } else {
        est.note = "density from structure, prefix ratios still unsettled";
      }
      return est;
    }
  }

  if (est.limsup <= tol) {
    est.verdict = DensityVerdict::Zero;
    est.value = 0.0;
  } else if (gap <= tol) {
    est.verdict = DensityVerdict::Exists;
    est.value = 0.5 * (est.liminf + est.limsup);
  } else {
    // the gap has to show up in both halves of the tail
    const std::size_t mid = tb + (count - tb) / 2;
    const auto [a_lo, a_hi] = min_max(est.ratios, tb, mid);
    const auto [b_lo, b_hi] = min_max(est.ratios, mid, count);
    if (a_hi - a_lo > tol && b_hi - b_lo > tol) {
      est.verdict = DensityVerdict::DoesNotExist;
    } else {
      est.note = "tail gap does not persist";
    }
  }
  return est;
}

DensityEstimate i_density(const IndexSet& k, const Ideal& ideal, const CheckpointSchedule& sched, double tol,
                          DensityOptions opts) {
  DensityEstimate est = natural_density(k, sched, tol, opts);
  est.ideal = ideal.name();
  if (opts.shortcut && (est.verdict == DensityVerdict::Exists || est.verdict == DensityVerdict::Zero)) {
    if (!est.note.empty()) est.note += "; ";
    est.note += "natural density exists, so the I-density equals it";
    return est;
  }

  const std::uint64_t last = est.checkpoints.back();
  const auto bm = k.bitmap(last, sched.ceiling);
  const PrefixFunction ratio = [bm](std::uint64_t n) {
    return static_cast<double>(bm->rank(n)) / static_cast<double>(n);
  };
  const IdealLimit lim = ideal_limit(ratio, ideal, sched, tol);
  const DensityVerdict natural = est.verdict;
  est.verdict = DensityVerdict::Inconclusive;
  est.value = 0.0;
  est.note = lim.diagnosis;
  if (lim.status == Membership::InIdeal) {
    est.liminf = lim.tail_min;
    est.limsup = lim.tail_max;
    if (est.limsup <= tol) {
      est.verdict = DensityVerdict::Zero;
    } else if (est.limsup - est.liminf <= tol) {
      est.verdict = DensityVerdict::Exists;
      est.value = *lim.value;
    }
  } else if (lim.status == Membership::NotInIdeal && !lim.ladder.empty() &&
             lim.ladder.front().deviation.value == Membership::NotInIdeal) {
    est.verdict = DensityVerdict::DoesNotExist;
  } else if (natural == DensityVerdict::Exists && opts.use_exact && est.exact && est.exact->positive) {
    est.verdict = DensityVerdict::Exists;
    est.value = est.exact->value;
  }
  return est;
}

ThinAssessment assess_thin(const IndexSet& k, const Ideal& ideal, const CheckpointSchedule& sched, double tol,
                           DensityOptions opts) {
  ThinAssessment out;
  out.estimate = i_density(k, ideal, sched, tol, opts);
  const auto& e = out.estimate;
  if (e.exact) {
    out.value = e.exact->positive ? Thinness::NonThin : Thinness::Thin;
    return out;
  }
  switch (e.verdict) {
    case DensityVerdict::Zero: out.value = Thinness::Thin; break;
    case DensityVerdict::DoesNotExist: out.value = Thinness::NonThin; break;
    case DensityVerdict::Exists:
      if (e.value > tol) out.value = Thinness::NonThin;
      break;
    case DensityVerdict::Inconclusive: break;
  }
  return out;
}

Thinness classify_thin(const IndexSet& k, const Ideal& ideal, const CheckpointSchedule& sched, double tol,
                       DensityOptions opts) {
  return assess_thin(k, ideal, sched, tol, opts).value;
}

}  // namespace istat
