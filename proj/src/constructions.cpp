#include "istat/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "istat/errors.hpp"

namespace istat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::uint64_t last_point(const AnalysisConfig& cfg) { return cfg.sched.points().back(); }

// Where the splice ratios are sampled: along G for trace ideals, since only
// there does the I-density see the counting ratios.
std::vector<std::uint64_t> probe_points(const Ideal& ideal, const AnalysisConfig& cfg) {
  const auto pts = cfg.sched.points();
  if (ideal.kind() != IdealKind::Trace) return pts;
  std::vector<std::uint64_t> along;
  const auto bm = ideal.trace_set().bitmap(pts.back(), cfg.sched.ceiling);
  bm->for_each(pts.back(), [&](std::uint64_t g) {
    if (g >= pts.front()) along.push_back(g);
  });
  return along.size() >= 2 ? along : pts;
}

bool is_empty(const IndexSet& k) { return simplify(k).kind() == IndexSet::Kind::Empty; }

IntervalSet dilate(const IntervalSet& s, double r) {
  std::vector<Interval> parts;
  for (const auto& p : s.parts()) parts.push_back(Interval::open(p.lo - r, p.hi + r));
  return IntervalSet(std::move(parts));
}

}  // namespace

// ------------------------------------------------------------------ APIO

ApioWitness apio_witness(const std::vector<IndexSet>& family, const Ideal& ideal, const AnalysisConfig& cfg) {
  ApioWitness w;
  w.inputs = family;
  for (std::size_t j = 0; j < family.size(); ++j) {
    w.input_verdicts.push_back(assess_thin(family[j], ideal, cfg.sched, cfg.tol, cfg.density));
    if (w.input_verdicts.back().value != Thinness::Thin) {
      throw PreconditionFailed("A_" + std::to_string(j + 1) + " = " + family[j].to_string() + " is " +
                               to_string(w.input_verdicts.back().value) + ", not Thin");
    }
  }

  const auto probes = probe_points(ideal, cfg);
  IndexSet running = IndexSet::empty();
  std::size_t prev = 0;
  IndexSet b = IndexSet::empty();
  for (std::size_t j = 0; j < family.size(); ++j) {
    running = simplify(unite(running, family[j]));
    const double cap = 1.0 / static_cast<double>(j + 1);
    std::vector<bool> below(probes.size());
    for (std::size_t t = 0; t < probes.size(); ++t) {
      below[t] = static_cast<double>(running.count(probes[t], cfg.sched.ceiling)) / static_cast<double>(probes[t]) <
                 cap;
    }
    // first probe from which the ratio stays under 1/j; strictly after the
    // previous splice point when one is left
    std::size_t from = probes.size();
    for (std::size_t t = probes.size(); t-- > 0 && below[t];) from = t;
    if (from == probes.size()) {
      throw ConstructionFailed("no splice point for j = " + std::to_string(j + 1) + ": ratio of the first " +
                               std::to_string(j + 1) + " sets is not below " + num(cap) + " at " +
                               std::to_string(probes.back()));
    }
    std::size_t t = std::max(from, j == 0 ? from : prev + 1);
    if (t >= probes.size()) t = std::max(from, prev);
    prev = t;
    const std::uint64_t n = probes[t];
    w.splice_points.push_back(n);
    const IndexSet bj = simplify(intersect(family[j], IndexSet::progression(n + 1, 1)));
    w.outputs.push_back(bj);
    w.head_bounds.push_back(family[j].count(n, cfg.sched.ceiling));
    b = simplify(unite(b, bj));
  }
  w.union_set = b;

  w.finite_differences = true;
  for (std::size_t j = 0; j < family.size(); ++j) {
    const IndexSet diff = symmetric_difference(family[j], w.outputs[j]);
    const std::uint64_t n = w.splice_points[j];
    // the difference lives in [1, n_j]: nothing above n_j, and exactly the head below
    const std::uint64_t upto = std::min(last_point(cfg), std::max<std::uint64_t>(2 * n, n + 1));
    const bool ok = diff.finite() != Tri::False && diff.count(upto, cfg.sched.ceiling) == w.head_bounds[j] &&
                    diff.count(n, cfg.sched.ceiling) == w.head_bounds[j];
    w.finite_differences = w.finite_differences && ok;
  }
  w.verdict = assess_thin(b, ideal, cfg.sched, cfg.tol, cfg.density);
  w.thin_union = w.verdict.value == Thinness::Thin;
  if (!w.thin_union) {
    throw ConstructionFailed("spliced union " + b.to_string() + " is " + to_string(w.verdict.value));
  }
  return w;
}

// ----------------------------------------------------------- decomposition

double max_deviation_along(const SequenceSpec& x, const IndexSet& b, double l, std::uint64_t from, std::uint64_t n,
                           std::uint64_t ceiling) {
  if (from > n) return 0.0;
  const auto vals = x.values(n, ceiling);
  const auto bm = b.bitmap(n, ceiling);
  double worst = 0.0;
  bm->for_each(n, [&](std::uint64_t k) {
    if (k >= from) worst = std::max(worst, std::fabs((*vals)[k - 1] - l));
  });
  return worst;
}

DecompositionWitness decompose(const SequenceSpec& x, const Ideal& ideal, double l, const AnalysisConfig& cfg,
                               std::size_t depth) {
  if (depth == 0) throw std::invalid_argument("ladder depth must be positive");
  if (x.prefix_length()) throw PreconditionFailed("imported data prefix has no asymptotic decomposition");
  DecompositionWitness d;
  d.limit = l;
  d.convergence = test_i_statistical_convergence(x, ideal, l, cfg);
  if (d.convergence.status == Membership::NotInIdeal) {
    throw PreconditionFailed("x is not I-statistically convergent to " + num(l) + " (" + d.convergence.witness + ")");
  }
  if (d.convergence.status == Membership::Inconclusive) d.note = "convergence test inconclusive; built anyway";

  std::vector<IndexSet> family;
  for (std::size_t j = 1; j <= depth; ++j) {
    family.push_back(simplify(x.preimage(IntervalSet::outside_ball(l, 1.0 / static_cast<double>(j)))));
  }
  d.apio = apio_witness(family, ideal, cfg);
  d.set = simplify(complement(d.apio.union_set));
  d.complement = assess_thin(complement(d.set), ideal, cfg.sched, cfg.tol, cfg.density);
  d.along = limit_along(x, d.set, cfg.tol, cfg);

  const std::uint64_t n = last_point(cfg);
  d.deviation_from = d.apio.splice_points.back() + 1;
  d.max_deviation = max_deviation_along(x, d.set, l, d.deviation_from, n, cfg.sched.ceiling);

  const bool premise = d.complement.value == Thinness::Thin && d.along.value &&
                       std::fabs(*d.along.value - l) <= cfg.tol;
  d.round_trip = premise && d.convergence.status == Membership::InIdeal;
  if (premise && d.convergence.status == Membership::NotInIdeal) {
    d.note = "thin complement and convergence along B disagree with the direct test";
  }
  return d;
}

// ------------------------------------------------------------- companion

Companion companion_sequence(const SequenceSpec& x, const Ideal& ideal, const PointSetEstimate& gamma,
                             const AnalysisConfig& cfg) {
  const auto in = gamma.in_cells();
  if (in.empty()) throw PreconditionFailed("Gamma estimate has no In cell");
  const double w = gamma.grid.width;
  const IndexSet far = simplify(x.preimage(dilate(gamma.in_region(), w).complement()));

  Companion c;
  c.disagreement = far;
  c.disagreement_verdict = assess_thin(far, ideal, cfg.sched, cfg.tol, cfg.density);
  if (c.disagreement_verdict.value != Thinness::Thin) {
    throw ConstructionFailed("far-value set " + far.to_string() + " is " + to_string(c.disagreement_verdict.value) +
                             "; the Gamma estimate does not capture the bulk of the values");
  }

  SequenceSpec y = x;
  if (!is_empty(far)) {
    // nearest In centre: split the line at midpoints between consecutive centres
    for (std::size_t i = 0; i < in.size(); ++i) {
      const double centre = gamma.cells[in[i]].centre;
      const double lo = i == 0 ? -kInf : 0.5 * (gamma.cells[in[i - 1]].centre + centre);
      const double hi = i + 1 == in.size() ? kInf : 0.5 * (centre + gamma.cells[in[i + 1]].centre);
      const IndexSet part = simplify(intersect(far, x.preimage(IntervalSet{Interval{lo, hi, false, true}})));
      if (part.kind() == IndexSet::Kind::Empty) continue;
      y = perturb(y, part, Formula::constant(centre)).sequence;
    }
  }
  c.sequence = y.renamed(x.name().empty() ? std::string() : x.name() + "-companion");
  c.limit_points = estimate_ordinary_limit_points(c.sequence, gamma.grid, cfg);

  const auto near = [](const std::vector<std::size_t>& cells, std::size_t i) {
    return std::any_of(cells.begin(), cells.end(), [i](std::size_t j) { return (i > j ? i - j : j - i) <= 1; });
  };
  const auto ly = c.limit_points.in_cells();
  for (const auto i : ly) {
    if (!near(in, i)) c.mismatches.push_back("L_y In at cell " + std::to_string(i) + " away from Gamma");
  }
  for (const auto i : in) {
    if (!near(ly, i)) c.mismatches.push_back("Gamma In at cell " + std::to_string(i) + " missing from L_y");
  }
  c.matches = c.mismatches.empty();
  return c;
}

// -------------------------------------------------------------- monotone

IndexSet monotone_set(const SequenceSpec& x) {
  CustomPredicate p;
  p.name = "nondecreasing-step(" + (x.name().empty() ? x.to_string() : x.name()) + ")";
  p.member = [x](std::uint64_t k) { return x.eval(k) <= x.eval(k + 1); };
  p.fill = [x](PrefixBitmap& bits) {
    const std::uint64_t n = bits.size();
    const auto vals = x.values(n + 1, n + 1);
    for (std::uint64_t k = 1; k <= n; ++k) {
      if ((*vals)[k - 1] <= (*vals)[k]) bits.set(k);
    }
  };
  return IndexSet::custom(std::move(p));
}

SequenceSpec negate(const SequenceSpec& x) {
  const std::string name = x.name().empty() ? std::string() : "-" + x.name();
  if (const auto len = x.prefix_length()) {
    const auto vals = x.values(*len, *len);
    std::vector<double> neg(vals->begin(), vals->end());
    for (auto& v : neg) v = -v;
    return SequenceSpec::from_prefix(std::move(neg), name);
  }
  std::vector<Piece> pieces;
  for (const auto& p : x.pieces()) pieces.push_back({p.guard, p.formula.negated()});
  return SequenceSpec(std::move(pieces), x.fallback().negated(), name);
}

namespace {

MonotoneResult increasing_limit(const SequenceSpec& x, const Ideal& ideal, const AnalysisConfig& cfg,
                                const MonotoneOptions& opts) {
  if (x.prefix_length()) throw PreconditionFailed("imported data prefix has no asymptotic limit");
  MonotoneResult r;
  r.boundedness = test_i_statistical_boundedness(x, ideal, cfg);
  using K = Boundedness::Kind;
  if (r.boundedness.kind == K::Unbounded || r.boundedness.kind == K::BoundedBelow) {
    throw PreconditionFailed("x is not I-statistically bounded above (" + to_string(r.boundedness.kind) +
                             "), so no supremum can stabilize");
  }

  r.m = opts.m ? *opts.m : monotone_set(x);
  r.m_density = i_density(r.m, ideal, cfg.sched, cfg.tol, cfg.density);
  if (r.m_density.verdict != DensityVerdict::Exists || std::fabs(r.m_density.value - 1.0) > cfg.tol) {
    throw PreconditionFailed("d_I(M) is not 1: " + to_string(r.m_density.verdict) +
                             (r.m_density.verdict == DensityVerdict::Exists ? "(" + num(r.m_density.value) + ")"
                                                                            : std::string()) +
                             " on " + r.m.to_string());
  }

  IndexSet m = r.m;
  if (opts.shrink) {
    if (r.boundedness.kind != K::Bounded && r.boundedness.kind != K::BoundedAbove) {
      throw PreconditionFailed("no upper bound l0 from the boundedness ladder (" + to_string(r.boundedness.kind) + ")");
    }
    const double l0 = r.boundedness.bound;
    r.shrink_bound = l0;
    const IndexSet above = x.preimage(IntervalSet{Interval{l0, kInf, false, false}});
    r.shrink_verdict = assess_thin(intersect(m, above), ideal, cfg.sched, cfg.tol, cfg.density);
    if (r.shrink_verdict->value != Thinness::Thin) {
      throw PreconditionFailed("x is not I-statistically bounded above by " + num(l0) + " on M");
    }
    m = intersect(m, complement(above));
  }

  const auto pts = cfg.sched.points();
  const std::uint64_t n = pts.back();
  const auto vals = x.values(n, cfg.sched.ceiling);
  const auto bm = m.bitmap(n, cfg.sched.ceiling);
  std::vector<double> sups(pts.size(), -kInf);
  {
    std::size_t t = 0;
    bm->for_each(n, [&](std::uint64_t k) {
      while (k > pts[t]) ++t;
      sups[t] = std::max(sups[t], (*vals)[k - 1]);
    });
  }
  double l = -kInf;
  for (std::size_t t = 0; t < pts.size(); ++t) {
    r.window_sups.emplace_back(pts[t], sups[t]);
    l = std::max(l, sups[t]);
  }
  const auto [lo, hi] = std::minmax_element(sups.end() - 3, sups.end());
  r.stabilized = std::isfinite(*lo) && *hi - *lo < cfg.tol;
  if (!r.stabilized) {
    r.note = "supremum over M does not stabilize across the last three windows";
    return r;
  }

  r.convergence = test_i_statistical_convergence(x, ideal, l, cfg);
  r.status = r.convergence.status;
  if (r.status == Membership::InIdeal) r.limit = l;

  // M n (k0, inf) inside (l - eps, l + eps), literally
  auto& inc = r.inclusion;
  inc.eps = cfg.tol;
  bm->for_each(n, [&](std::uint64_t k) {
    if (inc.k0 == 0 && (*vals)[k - 1] > l - inc.eps) inc.k0 = k;
  });
  auto bad = std::make_shared<PrefixBitmap>(n);
  bm->for_each(n, [&](std::uint64_t k) {
    if (inc.k0 == 0 || k <= inc.k0) return;
    ++inc.checked;
    if (std::fabs((*vals)[k - 1] - l) >= inc.eps) {
      if (inc.violations++ == 0) inc.first_violation = k;
      bad->set(k);
    }
  });
  bad->finalize();
  inc.literal = inc.violations == 0;
  inc.violation_verdict =
      classify_thin(known_prefix(bad, "inclusion-violations"), ideal, cfg.sched, cfg.tol, cfg.density);
  return r;
}

}  // namespace

MonotoneResult monotone_i_stat_limit(const SequenceSpec& x, const Ideal& ideal, const AnalysisConfig& cfg,
                                     const MonotoneOptions& opts) {
  if (opts.direction == Monotone::Increasing) return increasing_limit(x, ideal, cfg, opts);
  // bounded below on {x_k >= x_{k+1}} is bounded above on the mirror's M
  MonotoneOptions up = opts;
  up.direction = Monotone::Increasing;
  const SequenceSpec y = negate(x);
  MonotoneResult r = increasing_limit(y, ideal, cfg, up);
  if (r.limit) r.limit = -*r.limit;
  for (auto& [end, s] : r.window_sups) s = -s;
  if (r.shrink_bound) r.shrink_bound = -*r.shrink_bound;
  r.convergence.xi = -r.convergence.xi;
  if (!r.note.empty()) r.note += "; ";
  r.note += "decreasing case via the mirror -x; window values are infima";
  return r;
}

// ---------------------------------------------------------- Heine-Borel

Extraction heine_borel_extract(const SequenceSpec& x, const Ideal& ideal, const PointSetEstimate& gamma,
                               const AnalysisConfig& cfg) {
  Extraction e;
  e.boundedness = test_i_statistical_boundedness(x, ideal, cfg);
  if (e.boundedness.kind != Boundedness::Kind::Bounded) {
    throw PreconditionFailed("x is not I-statistically bounded (" + to_string(e.boundedness.kind) + ")");
  }
  const auto in = gamma.in_cells();
  if (in.empty()) throw PreconditionFailed("Gamma estimate has no In cell");
  const ValueGrid& grid = gamma.grid;
  const IntervalSet keep = dilate(gamma.in_region(), grid.width);
  e.set = simplify(x.preimage(keep.complement()));
  e.verdict = assess_thin(e.set, ideal, cfg.sched, cfg.tol, cfg.density);

  const std::uint64_t n = last_point(cfg);
  const auto vals = x.values(n, cfg.sched.ceiling);
  if (e.verdict.value != Thinness::Thin) {
    // name the cell holding most of the far values
    std::map<std::string, std::uint64_t> where;
    e.set.bitmap(n, cfg.sched.ceiling)->for_each(n, [&](std::uint64_t k) {
      const double v = (*vals)[k - 1];
      const auto at = grid.locate(v);
      ++where[at ? "cell " + std::to_string(*at) + " " + grid.cell(*at).to_string() : "outside grid near " + num(v)];
    });
    std::string worst = "none in prefix";
    std::uint64_t most = 0;
    for (const auto& [k, cnt] : where) {
      if (cnt > most) {
        most = cnt;
        worst = k;
      }
    }
    throw ConstructionFailed("extracted set " + e.set.to_string() + " is " + to_string(e.verdict.value) +
                             "; far values concentrate at " + worst);
  }

  std::vector<bool> hit(grid.cells, false);
  const auto off = complement(e.set).bitmap(n, cfg.sched.ceiling);
  std::string bad;
  off->for_each(n, [&](std::uint64_t k) {
    const double v = (*vals)[k - 1];
    const auto at = grid.locate(v);
    if (!at) {
      if (bad.empty()) bad = "value " + num(v) + " at k = " + std::to_string(k) + " falls outside the grid";
      return;
    }
    hit[*at] = true;
  });
  for (std::size_t i = 0; i < grid.cells; ++i) {
    if (!hit[i]) continue;
    e.hit_cells.push_back(i);
    const bool next_to_in = std::any_of(in.begin(), in.end(), [i](std::size_t j) { return (i > j ? i - j : j - i) <= 1; });
    if (!next_to_in && bad.empty()) bad = "cell " + std::to_string(i) + " " + grid.cell(i).to_string() + " is isolated";
  }
  const auto closed = check_closedness(gamma);
  if (bad.empty() && closed.status == Membership::NotInIdeal) {
    bad = closed.details.empty() ? "Gamma In-region has a gap" : closed.details.front();
  }
  if (!bad.empty()) throw ConstructionFailed("off-B values with Gamma are not compact at grid resolution: " + bad);
  e.compact = true;
  e.note = "compactness checked at grid resolution: off-B values lie within one cell of the closed In-region";
  return e;
}

}  // namespace istat
