#include "istat/ideal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

#include "istat/density.hpp"
#include "istat/errors.hpp"

namespace istat {

std::string to_string(Membership m) {
  switch (m) {
    case Membership::InIdeal: return "InIdeal";
    case Membership::NotInIdeal: return "NotInIdeal";
    case Membership::Inconclusive: return "Inconclusive";
  }
  return "?";
}

Ideal::Ideal(IdealKind kind, std::string name, IdealConfig cfg, IndexSet g)
    : kind_(kind), name_(std::move(name)), cfg_(cfg), g_(std::move(g)) {}

Ideal Ideal::fin() { return Ideal(IdealKind::Fin, "fin", {}, IndexSet::all()); }

Ideal Ideal::density_zero(IdealConfig cfg) { return Ideal(IdealKind::DensityZero, "density0", cfg, IndexSet::all()); }

Ideal Ideal::summable(IdealConfig cfg) { return Ideal(IdealKind::Summable, "summable", cfg, IndexSet::all()); }

Ideal Ideal::trace(IndexSet g, IdealConfig cfg) {
  if (g.finite() == Tri::True) {
    throw ConstructionFailed("trace ideal needs an infinite set, got " + g.to_string());
  }
  const std::string name = "trace(" + g.to_string() + ")";
  return Ideal(IdealKind::Trace, name, cfg, std::move(g));
}

namespace {

MembershipVerdict verdict(Membership m, std::string rule) {
  MembershipVerdict v;
  v.value = m;
  v.rule = std::move(rule);
  return v;
}

std::optional<MembershipVerdict> finiteness_rule(const IndexSet& k) {
  const Tri fin = k.finite();
  if (fin == Tri::True) return verdict(Membership::InIdeal, "finite by structure");
  if (fin == Tri::False) return verdict(Membership::NotInIdeal, "infinite by structure");
  return std::nullopt;
}

std::optional<bool> positive_density(const IndexSet& k) {
  if (const auto d = k.exact_density()) return d->positive;
  return std::nullopt;
}

// Heuristic membership only looks at 1..N with N the last checkpoint.
std::shared_ptr<const PrefixBitmap> prefix_bits(const IndexSet& k, std::uint64_t n) { return k.bitmap(n, n); }

MembershipVerdict fin_by_prefix(const IndexSet& k, const CheckpointSchedule& sched, const IdealConfig& cfg) {
  const auto pts = sched.points();
  const auto bm = prefix_bits(k, pts.back());
  MembershipVerdict v;
  std::vector<std::uint64_t> counts;
  for (const auto n : pts) {
    counts.push_back(bm->rank(n));
    v.evidence.emplace_back(n, static_cast<double>(counts.back()));
  }
  const std::size_t tb = CheckpointSchedule::tail_begin(pts.size());
  std::size_t windows = 0, growth = 0;
  bool late = false;
  for (std::size_t t = tb; t + 1 < pts.size(); ++t) {
    ++windows;
    if (counts[t + 1] > counts[t]) {
      ++growth;
      if (t + 3 >= pts.size()) late = true;
    }
  }
  if (growth == 0) {
    v.value = Membership::InIdeal;
    v.rule = "no growth over the tail checkpoints";
  } else if (static_cast<double>(growth) >= cfg.fin_growth_share * static_cast<double>(windows) && late) {
    v.value = Membership::NotInIdeal;
    v.rule = "persistent growth over the tail checkpoints";
  } else {
    v.rule = "sporadic growth over the tail checkpoints";
  }
  return v;
}

MembershipVerdict fin_member(const IndexSet& k, const CheckpointSchedule& sched, const IdealConfig& cfg) {
  if (auto v = finiteness_rule(k)) return *v;
  if (positive_density(k) == true) return verdict(Membership::NotInIdeal, "positive density by structure");
  return fin_by_prefix(k, sched, cfg);
}

MembershipVerdict density_zero_member(const IndexSet& k, const CheckpointSchedule& sched, const IdealConfig& cfg) {
  if (k.finite() == Tri::True) return verdict(Membership::InIdeal, "finite by structure");
  if (const auto pos = positive_density(k)) {
    return *pos ? verdict(Membership::NotInIdeal, "positive density by structure")
                : verdict(Membership::InIdeal, "density 0 by structure");
  }
  // Fin is contained in density0
  if (auto f = fin_by_prefix(k, sched, cfg); f.value == Membership::InIdeal) {
    f.rule = "finite: " + f.rule;
    return f;
  }
  const auto est = natural_density(k, sched, cfg.density_tol, DensityOptions{false, false});
  MembershipVerdict v;
  for (std::size_t i = 0; i < est.checkpoints.size(); ++i) v.evidence.emplace_back(est.checkpoints[i], est.ratios[i]);
  switch (est.verdict) {
    case DensityVerdict::Zero:
      v.value = Membership::InIdeal;
      v.rule = "density estimate Zero";
      break;
    case DensityVerdict::DoesNotExist:
      v.value = Membership::NotInIdeal;
      v.rule = "density estimate DoesNotExist";
      break;
    case DensityVerdict::Exists:
      if (est.value > cfg.density_tol) {
        v.value = Membership::NotInIdeal;
        v.rule = "density estimate positive";
      } else {
        v.rule = "density estimate near the tolerance";
      }
      break;
    case DensityVerdict::Inconclusive: v.rule = "density estimate inconclusive"; break;
  }
  return v;
}

std::optional<Membership> summable_structure(const IndexSet& k) {
  if (k.finite() == Tri::True) return Membership::InIdeal;
  if (positive_density(k) == true) return Membership::NotInIdeal;
  switch (k.kind()) {
    case IndexSet::Kind::Squares:
    case IndexSet::Kind::Powers: return Membership::InIdeal;
    case IndexSet::Kind::Intersection: {
      const auto a = summable_structure(k.lhs());
      const auto b = summable_structure(k.rhs());
      if (a == Membership::InIdeal || b == Membership::InIdeal) return Membership::InIdeal;
      return std::nullopt;
    }
    case IndexSet::Kind::Union: {
      const auto a = summable_structure(k.lhs());
      const auto b = summable_structure(k.rhs());
      if (a == Membership::NotInIdeal || b == Membership::NotInIdeal) return Membership::NotInIdeal;
      if (a == Membership::InIdeal && b == Membership::InIdeal) return Membership::InIdeal;
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

MembershipVerdict summable_member(const IndexSet& k, const CheckpointSchedule& sched, const IdealConfig& cfg) {
  if (const auto s = summable_structure(k)) return verdict(*s, "summability by structure");
  const auto pts = sched.points();
  const auto bm = prefix_bits(k, pts.back());
  std::vector<double> sums;
  double acc = 0.0;
  std::size_t t = 0;
  bm->for_each(pts.back(), [&](std::uint64_t j) {
    while (t < pts.size() && j > pts[t]) {
      sums.push_back(acc);
      ++t;
    }
    acc += 1.0 / static_cast<double>(j);
  });
  while (sums.size() < pts.size()) sums.push_back(acc);

  MembershipVerdict v;
  for (std::size_t i = 0; i < pts.size(); ++i) v.evidence.emplace_back(pts[i], sums[i]);
  const std::size_t count = pts.size();
  const std::size_t tb = CheckpointSchedule::tail_begin(count);
  const std::size_t mid = tb + (count - tb) / 2;
  const double g1 = sums[mid] - sums[tb];
  const double g2 = sums[count - 1] - sums[mid];
  const double slope =
      g2 / std::log(static_cast<double>(pts[count - 1]) / static_cast<double>(pts[mid]));
  if (g2 <= cfg.summable_flat) {
    v.value = Membership::InIdeal;
    v.rule = "no partial-sum growth over the tail";
  } else if (g2 <= cfg.summable_decay * g1) {
    v.value = Membership::InIdeal;
    v.rule = "partial-sum growth decays over the tail";
  } else if (g2 >= cfg.summable_persist * g1 && slope >= cfg.summable_min_slope) {
    v.value = Membership::NotInIdeal;
    v.rule = "partial sums grow like log n";
  } else {
    v.rule = "partial-sum growth unresolved";
  }
  return v;
}

}  // namespace

MembershipVerdict Ideal::is_member(const IndexSet& k_in, const CheckpointSchedule& budget) const {
  const IndexSet k = simplify(k_in);
  switch (kind_) {
    case IdealKind::Fin: return fin_member(k, budget, cfg_);
    case IdealKind::DensityZero: return density_zero_member(k, budget, cfg_);
    case IdealKind::Summable: return summable_member(k, budget, cfg_);
    case IdealKind::Trace: {
      auto v = fin_member(simplify(intersect(k, g_)), budget, cfg_);
      v.rule = "trace: " + v.rule;
      return v;
    }
  }
  return {};
}

MembershipVerdict Ideal::in_filter(const IndexSet& a, const CheckpointSchedule& budget) const {
  return is_member(simplify(complement(a)), budget);
}

// ---------------------------------------------------------------- limits

namespace {

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

IdealLimit ideal_limit(const PrefixFunction& f, const Ideal& ideal, const CheckpointSchedule& sched, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const auto pts = sched.points();
  const std::uint64_t last = pts.back();
  const std::size_t tb = CheckpointSchedule::tail_begin(pts.size());
  const std::uint64_t tail_start = pts[tb];
  IdealLimit out;

  constexpr std::size_t kSamples = 4096;
  std::vector<double> sample;
  std::shared_ptr<const PrefixBitmap> along;
  if (ideal.kind() == IdealKind::Trace) {
    along = ideal.trace_set().bitmap(last, std::max(last, sched.ceiling));
    const std::uint64_t members = along->rank(last) - along->rank(tail_start - 1);
    if (members == 0) {
      out.diagnosis = "no element of " + ideal.trace_set().to_string() + " in the tail window";
      return out;
    }
    const std::uint64_t stride = std::max<std::uint64_t>(1, members / kSamples);
    std::uint64_t seen = 0;
    along->for_each(last, [&](std::uint64_t n) {
      if (n < tail_start) return;
      if (seen++ % stride == 0) sample.push_back(f(n));
    });
  } else {
    const std::uint64_t from = pts[pts.size() - 2] + 1;
    const std::uint64_t len = last - from + 1;
    const std::uint64_t stride = std::max<std::uint64_t>(1, len / kSamples);
    for (std::uint64_t n = from; n <= last; n += stride) sample.push_back(f(n));
  }
  const double cand = median(std::move(sample));
  out.candidate = cand;

  const double eps[3] = {2.0 * tol, tol, 0.5 * tol};
  std::shared_ptr<PrefixBitmap> dev[3];
  for (auto& d : dev) d = std::make_shared<PrefixBitmap>(last);
  double lo = INFINITY, hi = -INFINITY;
  for (std::uint64_t n = 1; n <= last; ++n) {
    const double v = f(n);
    const double gap = std::isfinite(v) ? std::fabs(v - cand) : INFINITY;
    for (int i = 0; i < 3; ++i) {
      if (gap >= eps[i]) dev[i]->set(n);
    }
    if (n >= tail_start && gap < eps[2] && (!along || along->test(n))) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  out.tail_min = std::isfinite(lo) ? lo : cand;
  out.tail_max = std::isfinite(hi) ? hi : cand;

  bool all_in = true;
  for (int i = 0; i < 3; ++i) {
    dev[i]->finalize();
    const IndexSet d = known_prefix(dev[i], "deviation>=" + number(eps[i]));
    LadderStep step{eps[i], ideal.is_member(d, sched)};
    const Membership m = step.deviation.value;
    out.ladder.push_back(std::move(step));
    if (m == Membership::NotInIdeal) {
      out.status = Membership::NotInIdeal;
      out.diagnosis = "deviation set at eps=" + number(eps[i]) + " is not in " + ideal.name();
      return out;
    }
    if (m != Membership::InIdeal) all_in = false;
  }
  if (all_in) {
    out.status = Membership::InIdeal;
    out.value = cand;
    out.diagnosis = "every deviation set is in " + ideal.name();
  } else {
    out.diagnosis = "some deviation set could not be classified under " + ideal.name();
  }
  return out;
}

// ---------------------------------------------------------------- axioms

AxiomReport check_axioms(const Ideal& ideal, const std::vector<IndexSet>& universe, const CheckpointSchedule& budget) {
  AxiomReport rep;
  auto fail = [&](std::string what) {
    rep.pass = false;
    rep.violations.push_back(std::move(what));
  };
  auto member = [&](const IndexSet& s) { return ideal.is_member(s, budget).value; };

  if (member(IndexSet::empty()) != Membership::InIdeal) fail("empty set is not in the ideal");
  if (member(IndexSet::all()) != Membership::NotInIdeal) fail("N is not excluded from the ideal");
  if (member(IndexSet::finite({1})) != Membership::InIdeal) fail("singleton {1} is not in the ideal");
  if (ideal.in_filter(IndexSet::all(), budget).value != Membership::InIdeal) fail("N is not in the filter");
  if (ideal.in_filter(IndexSet::empty(), budget).value != Membership::NotInIdeal) fail("empty set is in the filter");

  std::vector<Membership> v;
  for (const auto& a : universe) {
    v.push_back(member(a));
    rep.verdicts.emplace_back(a.to_string(), v.back());
    // A in I iff N \ A in F(I), computed through the un-simplified double complement
    const auto dual = ideal.in_filter(complement(a), budget).value;
    if (v.back() != Membership::Inconclusive && dual != Membership::Inconclusive && dual != v.back()) {
      fail("duality: " + a.to_string() + " is " + to_string(v.back()) + " but its complement's filter verdict is " +
           to_string(dual));
    }
  }
  for (std::size_t i = 0; i < universe.size(); ++i) {
    for (std::size_t j = 0; j < universe.size(); ++j) {
      const auto& a = universe[i];
      const auto& b = universe[j];
      const std::string pair = "(" + a.to_string() + ", " + b.to_string() + ")";
      if (j > i && v[i] == Membership::InIdeal && v[j] == Membership::InIdeal &&
          member(unite(a, b)) == Membership::NotInIdeal) {
        fail("union closure " + pair);
      }
      if (v[i] == Membership::InIdeal && member(intersect(a, b)) == Membership::NotInIdeal) {
        fail("subset closure " + pair);
      }
      if (j > i && v[i] != Membership::Inconclusive && v[j] != Membership::Inconclusive) {
        // filter closure under intersection: complements of members are filter sets
        const auto ca = complement(a);
        const auto cb = complement(b);
        if (v[i] == Membership::InIdeal && v[j] == Membership::InIdeal &&
            ideal.in_filter(intersect(ca, cb), budget).value == Membership::NotInIdeal) {
          fail("filter intersection " + pair);
        }
      }
    }
  }
  return rep;
}

}  // namespace istat
