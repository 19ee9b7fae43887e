#include "istat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "istat/errors.hpp"

namespace istat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::uint64_t last_checkpoint(const AnalysisConfig& cfg) { return cfg.sched.points().back(); }

// Cell centres carry rounding; keep radius-w balls from touching the next centre over.
IntervalSet cell_ball(double centre, double r) { return IntervalSet::ball(centre, r * (1.0 - 1e-9)); }

using ThinOracle = std::function<ThinAssessment(const IndexSet&)>;

ThinOracle ideal_oracle(const Ideal& ideal, const AnalysisConfig& cfg) {
  return [&ideal, &cfg](const IndexSet& k) { return assess_thin(k, ideal, cfg.sched, cfg.tol, cfg.density); };
}

// thinness through the natural density alone
ThinOracle natural_oracle(const AnalysisConfig& cfg) {
  return [&cfg](const IndexSet& k) {
    ThinAssessment a;
    a.estimate = natural_density(k, cfg.sched, cfg.tol, cfg.density);
    const auto& e = a.estimate;
    if (e.verdict == DensityVerdict::Zero) {
      a.value = Thinness::Thin;
    } else if (e.verdict == DensityVerdict::DoesNotExist ||
               (e.verdict == DensityVerdict::Exists && (e.value > cfg.tol || (e.exact && e.exact->positive)))) {
      a.value = Thinness::NonThin;
    }
    return a;
  };
}

// Printable sets repeat across cells (constant pieces give All/Empty).
class MemoOracle {
 public:
  explicit MemoOracle(ThinOracle inner) : inner_(std::move(inner)) {}
  const ThinAssessment& operator()(const IndexSet& k) {
    if (!k.printable()) {
      scratch_ = inner_(k);
      return scratch_;
    }
    const auto key = k.to_string();
    auto it = memo_.find(key);
    if (it == memo_.end()) it = memo_.emplace(key, inner_(k)).first;
    return it->second;
  }

 private:
  ThinOracle inner_;
  std::map<std::string, ThinAssessment> memo_;
  ThinAssessment scratch_;
};

std::string describe(const ThinAssessment& a) {
  std::string s = to_string(a.value) + ": " + to_string(a.estimate.verdict);
  if (a.estimate.verdict == DensityVerdict::Exists) s += "(" + num(a.estimate.value) + ")";
  s += " on " + a.estimate.set;
  return s;
}

CellLabel label_of(Thinness t) {
  switch (t) {
    case Thinness::Thin: return CellLabel::Out;
    case Thinness::NonThin: return CellLabel::In;
    case Thinness::Inconclusive: return CellLabel::Uncertain;
  }
  return CellLabel::Uncertain;
}

PointSetEstimate blank(PointSetKind kind, const std::string& ideal, const ValueGrid& grid) {
  PointSetEstimate est;
  est.kind = kind;
  est.ideal = ideal;
  est.grid = grid;
  for (std::size_t i = 0; i < grid.cells; ++i) {
    CellResult c;
    c.range = grid.cell(i);
    c.centre = grid.centre(i);
    est.cells.push_back(c);
  }
  return est;
}

bool prefix_only(const SequenceSpec& x, PointSetEstimate& est) {
  if (!x.prefix_length()) return false;
  est.note = "imported data prefix: asymptotic labels are not available";
  for (auto& c : est.cells) c.evidence = "imported prefix";
  return true;
}

PointSetEstimate cluster_points(const SequenceSpec& x, const ValueGrid& grid, const AnalysisConfig& cfg,
                                const ThinOracle& oracle, PointSetKind kind, const std::string& ideal) {
  PointSetEstimate est = blank(kind, ideal, grid);
  if (prefix_only(x, est)) return est;
  MemoOracle thin(oracle);
  const double w = grid.width;
  for (std::size_t i = 0; i < grid.cells; ++i) {
    auto& cell = est.cells[i];
    const auto& a = thin(x.preimage(cell_ball(cell.centre, w)));
    cell.label = label_of(a.value);
    cell.evidence = describe(a);
    std::size_t parts = 1;
    for (std::size_t round = 0; round < cfg.refine_rounds && cell.label != CellLabel::Out; ++round) {
      parts *= 2;
      const double sub = w / static_cast<double>(parts);
      std::size_t thin_parts = 0, nonthin_parts = 0;
      for (std::size_t p = 0; p < parts; ++p) {
        const double y = cell.range.lo + (static_cast<double>(p) + 0.5) * sub;
        const auto t = thin(x.preimage(cell_ball(y, sub))).value;
        thin_parts += t == Thinness::Thin;
        nonthin_parts += t == Thinness::NonThin;
      }
      const std::string tag = "; refined x" + std::to_string(parts) + ": " + std::to_string(nonthin_parts) +
                              " NonThin, " + std::to_string(thin_parts) + " Thin";
      cell.evidence += tag;
      if (thin_parts == parts) {
        cell.label = CellLabel::Out;
      } else if (nonthin_parts > 0) {
        cell.label = CellLabel::In;
      } else {
        cell.label = CellLabel::Uncertain;
      }
    }
  }
  est.note = "cells labelled by thinness of {k : |x_k - y| < w} at w = " + num(w) + ", " +
             std::to_string(cfg.refine_rounds) + " refinement round(s)";
  return est;
}

PointSetEstimate limit_points(const SequenceSpec& x, const ValueGrid& grid, const AnalysisConfig& cfg,
                              const ThinOracle& oracle, PointSetKind kind, const std::string& ideal) {
  PointSetEstimate est = blank(kind, ideal, grid);
  if (prefix_only(x, est)) return est;
  MemoOracle thin(oracle);
  const double w = grid.width;
  const double conv_tol = std::min(cfg.tol, w / 2);

  for (const auto& s : guard_selectors(x)) {
    const auto& a = thin(s);
    if (a.value != Thinness::NonThin) continue;
    const auto lim = limit_along(x, s, conv_tol, cfg);
    if (!lim.value) continue;
    const auto at = grid.locate(*lim.value);
    if (!at || est.cells[*at].label == CellLabel::In) continue;
    auto& cell = est.cells[*at];
    cell.label = CellLabel::In;
    cell.witness = s.to_string();
    cell.evidence = "NonThin selector converging to " + num(*lim.value) + " (" + describe(a) + ")";
  }

  for (std::size_t i = 0; i < grid.cells; ++i) {
    auto& cell = est.cells[i];
    if (cell.label == CellLabel::In) continue;
    std::string trail;
    for (int m = 0; m <= 2; ++m) {
      const double r = w / static_cast<double>(1 << m);
      const IndexSet p = x.preimage(cell_ball(cell.centre, r));
      const auto& a = thin(p);
      if (m == 0 && a.value == Thinness::Thin) {
        cell.label = CellLabel::Out;
        trail = describe(a);
        break;
      }
      if (!trail.empty()) trail += "; ";
      trail += "m=" + std::to_string(m) + " " + to_string(a.value);
      if (a.value != Thinness::NonThin) continue;
      const auto lim = limit_along(x, p, conv_tol, cfg);
      if (lim.value && grid.locate(*lim.value) == i) {
        cell.label = CellLabel::In;
        cell.witness = p.to_string();
        trail += " converging to " + num(*lim.value);
        break;
      }
      trail += lim.value ? " converging outside the cell" : " (" + lim.diagnosis + ")";
    }
    cell.evidence = trail;
  }
  est.note =
      "witnesses searched among effective guards, their complements and pairwise combinations, and preimages "
      "{k : |x_k - y| < w/2^m}, m = 0..2";
  return est;
}

}  // namespace

// ------------------------------------------------------------------ grid

ValueGrid ValueGrid::span(double lo, double hi, std::size_t cells) {
  if (!(hi > lo) || cells == 0) throw std::invalid_argument("grid needs lo < hi and at least one cell");
  ValueGrid g;
  g.lower = lo;
  g.cells = cells;
  g.width = (hi - lo) / static_cast<double>(cells);
  return g;
}

Interval ValueGrid::cell(std::size_t i) const {
  return Interval::half_open(lower + static_cast<double>(i) * width, lower + static_cast<double>(i + 1) * width);
}

std::optional<std::size_t> ValueGrid::locate(double v) const {
  if (!(v >= lower) || !(v < upper())) return std::nullopt;
  auto i = static_cast<std::size_t>(std::floor((v - lower) / width));
  if (i >= cells) i = cells - 1;
  // floating-point edges: trust the interval test
  if (!cell(i).contains(v) && i + 1 < cells && cell(i + 1).contains(v)) ++i;
  if (!cell(i).contains(v) && i > 0 && cell(i - 1).contains(v)) --i;
  return i;
}

std::string to_string(CellLabel l) {
  switch (l) {
    case CellLabel::In: return "In";
    case CellLabel::Out: return "Out";
    case CellLabel::Uncertain: return "Uncertain";
  }
  return "?";
}

std::string to_string(PointSetKind k) {
  switch (k) {
    case PointSetKind::Ordinary: return "ordinary";
    case PointSetKind::Lambda: return "lambda";
    case PointSetKind::Gamma: return "gamma";
    case PointSetKind::StatisticalLimit: return "statistical-limit";
    case PointSetKind::StatisticalCluster: return "statistical-cluster";
  }
  return "?";
}

std::vector<std::size_t> PointSetEstimate::in_cells() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].label == CellLabel::In) out.push_back(i);
  }
  return out;
}

IntervalSet PointSetEstimate::in_region() const {
  std::vector<Interval> parts;
  for (const auto& c : cells) {
    if (c.label == CellLabel::In) parts.push_back(Interval::closed(c.range.lo, c.range.hi));
  }
  return IntervalSet(std::move(parts));
}

// ------------------------------------------------------------ convergence

double tail_candidate(const SequenceSpec& x, const AnalysisConfig& cfg) {
  const auto pts = cfg.sched.points();
  std::uint64_t from = pts[pts.size() - 2] + 1;
  std::uint64_t last = pts.back();
  if (const auto len = x.prefix_length()) {
    last = *len;
    from = last / 2 + 1;
  }
  const auto vals = x.values(last, std::max(last, cfg.sched.ceiling));
  std::vector<double> s;
  const std::uint64_t stride = std::max<std::uint64_t>(1, (last - from + 1) / 4096);
  for (std::uint64_t n = from; n <= last; n += stride) s.push_back((*vals)[n - 1]);
  auto mid = s.begin() + static_cast<std::ptrdiff_t>(s.size() / 2);
  std::nth_element(s.begin(), mid, s.end());
  return *mid;
}

SelectorLimit limit_along(const SequenceSpec& x, const IndexSet& selector, double tol, const AnalysisConfig& cfg) {
  SelectorLimit out;
  if (x.prefix_length()) {
    out.diagnosis = "imported prefix";
    return out;
  }
  const std::uint64_t n = last_checkpoint(cfg);
  const auto bm = selector.bitmap(n, cfg.sched.ceiling);
  out.selected = bm->rank(n);
  constexpr std::uint64_t kMinSelected = std::uint64_t{1} << (kMinCheckpoints - 1);
  if (out.selected < kMinSelected) {
    out.diagnosis = "only " + std::to_string(out.selected) + " selected indices up to " + std::to_string(n);
    return out;
  }
  const auto vals = x.values(n, cfg.sched.ceiling);
  std::vector<double> along;
  along.reserve(out.selected);
  bm->for_each(n, [&](std::uint64_t k) { along.push_back((*vals)[k - 1]); });
  const auto sub = CheckpointSchedule::for_budget(along.size());
  const auto lim =
      ideal_limit([&along](std::uint64_t j) { return along[j - 1]; }, Ideal::fin(), sub, tol);
  out.status = lim.status;
  out.value = lim.value;
  out.diagnosis = lim.diagnosis;
  return out;
}

ConvergenceVerdict test_i_statistical_convergence(const SequenceSpec& x, const Ideal& ideal, double xi, double eps,
                                                  double delta, const AnalysisConfig& cfg) {
  if (!(eps > 0.0) || !(delta > 0.0)) throw std::invalid_argument("eps and delta must be positive");
  ConvergenceVerdict out;
  out.xi = xi;
  ConvergenceStep step{eps, delta, {}};
  if (x.prefix_length()) {
    step.verdict.rule = "imported prefix";
    out.steps.push_back(step);
    return out;
  }
  const IndexSet dev = x.preimage(IntervalSet::outside_ball(xi, eps));
  const auto ex = cfg.density.use_exact ? dev.exact_density() : std::nullopt;
  if (ex && !ex->positive) {
    step.verdict.value = Membership::InIdeal;
    step.verdict.rule = "deviation set has density 0 by structure, so its prefix fractions vanish";
  } else if (ex && ex->value > delta) {
    step.verdict.value = Membership::NotInIdeal;
    step.verdict.rule = "deviation density " + num(ex->value) + " exceeds delta, so the level set is cofinite";
  } else {
    const std::uint64_t n = last_checkpoint(cfg);
    const auto bm = dev.bitmap(n, cfg.sched.ceiling);
    auto level = std::make_shared<PrefixBitmap>(n);
    std::uint64_t seen = 0;
    for (std::uint64_t j = 1; j <= n; ++j) {
      seen += bm->test(j);
      if (static_cast<double>(seen) >= delta * static_cast<double>(j)) level->set(j);
    }
    level->finalize();
    const IndexSet e = known_prefix(level, "level(" + num(eps) + "," + num(delta) + ")");
    step.verdict = ideal.is_member(e, cfg.sched);
  }
  out.status = step.verdict.value;
  if (out.status == Membership::NotInIdeal) out.witness = "eps=" + num(eps) + " delta=" + num(delta);
  out.steps.push_back(std::move(step));
  return out;
}

namespace {

ConvergenceVerdict aggregate(double xi, std::vector<ConvergenceStep> steps) {
  ConvergenceVerdict out;
  out.xi = xi;
  bool all_in = !steps.empty();
  for (const auto& s : steps) {
    if (s.verdict.value == Membership::NotInIdeal && out.status != Membership::NotInIdeal) {
      out.status = Membership::NotInIdeal;
      out.witness = "eps=" + num(s.eps) + (s.delta > 0 ? " delta=" + num(s.delta) : std::string());
    }
    if (s.verdict.value != Membership::InIdeal) all_in = false;
  }
  if (out.status != Membership::NotInIdeal && all_in) out.status = Membership::InIdeal;
  out.steps = std::move(steps);
  return out;
}

}  // namespace

ConvergenceVerdict test_i_statistical_convergence(const SequenceSpec& x, const Ideal& ideal, double xi,
                                                  const AnalysisConfig& cfg) {
  std::vector<ConvergenceStep> steps;
  for (const double eps : cfg.eps_ladder) {
    for (const double delta : cfg.delta_ladder) {
      auto v = test_i_statistical_convergence(x, ideal, xi, eps, delta, cfg);
      steps.push_back(v.steps.front());
      if (v.status == Membership::NotInIdeal) return aggregate(xi, std::move(steps));
    }
  }
  return aggregate(xi, std::move(steps));
}

ConvergenceVerdict test_statistical_convergence(const SequenceSpec& x, double xi, const AnalysisConfig& cfg) {
  std::vector<ConvergenceStep> steps;
  for (const double eps : cfg.eps_ladder) {
    ConvergenceStep s{eps, 0.0, {}};
    if (x.prefix_length()) {
      s.verdict.rule = "imported prefix";
    } else {
      const auto est = natural_density(x.preimage(IntervalSet::outside_ball(xi, eps)), cfg.sched, cfg.tol, cfg.density);
      s.verdict.rule = "deviation density " + to_string(est.verdict);
      if (est.verdict == DensityVerdict::Zero) {
        s.verdict.value = Membership::InIdeal;
      } else if (est.verdict == DensityVerdict::DoesNotExist ||
                 (est.verdict == DensityVerdict::Exists && (est.value > cfg.tol || (est.exact && est.exact->positive)))) {
        s.verdict.value = Membership::NotInIdeal;
      }
    }
    steps.push_back(std::move(s));
  }
  return aggregate(xi, std::move(steps));
}

ConvergenceVerdict test_i_convergence(const SequenceSpec& x, const Ideal& ideal, double xi, const AnalysisConfig& cfg) {
  std::vector<ConvergenceStep> steps;
  for (const double eps : cfg.eps_ladder) {
    ConvergenceStep s{eps, 0.0, {}};
    if (x.prefix_length()) {
      s.verdict.rule = "imported prefix";
    } else {
      s.verdict = ideal.is_member(x.preimage(IntervalSet::outside_ball(xi, eps)), cfg.sched);
    }
    steps.push_back(std::move(s));
  }
  return aggregate(xi, std::move(steps));
}

// ------------------------------------------------------------ boundedness

std::string to_string(Boundedness::Kind k) {
  switch (k) {
    case Boundedness::Kind::Bounded: return "Bounded";
    case Boundedness::Kind::BoundedAbove: return "BoundedAbove";
    case Boundedness::Kind::BoundedBelow: return "BoundedBelow";
    case Boundedness::Kind::Unbounded: return "Unbounded";
    case Boundedness::Kind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

std::uint64_t probe_length(const AnalysisConfig& cfg) {
  const std::uint64_t n = last_checkpoint(cfg);
  return std::max<std::uint64_t>(1, std::min<std::uint64_t>(std::uint64_t{1} << 16, n / 16));
}

}  // namespace

Boundedness test_i_statistical_boundedness(const SequenceSpec& x, const Ideal& ideal, const AnalysisConfig& cfg) {
  Boundedness out;
  if (x.prefix_length()) return out;
  const std::uint64_t probe = probe_length(cfg);
  const auto vals = x.values(probe, std::max(probe, cfg.sched.ceiling));
  double top = 0.0;
  for (std::uint64_t k = 0; k < probe; ++k) top = std::max(top, std::fabs((*vals)[k]));

  MemoOracle thin(ideal_oracle(ideal, cfg));
  std::vector<double> rungs;
  for (double l = 1.0; l < 0x1p62; l *= 2.0) {
    rungs.push_back(l);
    if (l >= top) break;
  }
  bool all_nonthin = true;
  for (const double l : rungs) {
    const IntervalSet exceed{Interval{-kInf, -l, false, false}, Interval{l, kInf, false, false}};
    const auto t = thin(x.preimage(exceed)).value;
    out.ladder.emplace_back(l, t);
    if (t == Thinness::Thin) {
      out.kind = Boundedness::Kind::Bounded;
      out.bound = l;
      out.compact = Interval::closed(-l, l);
      return out;
    }
    if (t != Thinness::NonThin) all_nonthin = false;
  }
  if (all_nonthin) {
    out.kind = Boundedness::Kind::Unbounded;
    return out;
  }
  for (const double l : rungs) {
    if (thin(x.preimage(IntervalSet{Interval{l, kInf, false, false}})).value == Thinness::Thin) {
      out.kind = Boundedness::Kind::BoundedAbove;
      out.bound = l;
      return out;
    }
    if (thin(x.preimage(IntervalSet{Interval{-kInf, -l, false, false}})).value == Thinness::Thin) {
      out.kind = Boundedness::Kind::BoundedBelow;
      out.bound = -l;
      return out;
    }
  }
  return out;
}

ValueGrid default_grid(const SequenceSpec& x, const Ideal& ideal, const AnalysisConfig& cfg) {
  const std::size_t cells = std::max<std::size_t>(cfg.grid_cells, 3);
  double lo = kInf, hi = -kInf;
  if (const auto len = x.prefix_length()) {
    for (std::uint64_t k = 1; k <= *len; ++k) {
      lo = std::min(lo, x.eval(k));
      hi = std::max(hi, x.eval(k));
    }
  } else {
    const auto b = test_i_statistical_boundedness(x, ideal, cfg);
    if (b.kind != Boundedness::Kind::Bounded) {
      throw UnboundedRange("sequence is not I-statistically bounded under " + ideal.name() + " (" +
                           to_string(b.kind) + "); pass an explicit grid");
    }
    const std::uint64_t probe = probe_length(cfg);
    const auto vals = x.values(probe, std::max(probe, cfg.sched.ceiling));
    for (std::uint64_t k = 0; k < probe; ++k) {
      const double v = (*vals)[k];
      if (std::fabs(v) > b.bound) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    // closed forms reach values the prefix never shows (1/(v_2(k)+1) at k = 2^40)
    for (int j = 20; j < 63; ++j) {
      for (const std::uint64_t k : {(std::uint64_t{1} << j) - 1, std::uint64_t{1} << j, (std::uint64_t{1} << j) + 1}) {
        try {
          const double v = x.eval(k);
          if (!std::isfinite(v) || std::fabs(v) > b.bound) continue;
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        } catch (const std::exception&) {
          // best effort: some guards only answer inside the ceiling
        }
      }
    }
    if (lo > hi) throw UnboundedRange("no probe value inside the boundedness bound; pass an explicit grid");
  }
  // extreme values sit at the centres of the second and second-to-last cells
  ValueGrid g;
  g.cells = cells;
  if (hi == lo) {
    g.width = 1.0 / static_cast<double>(cells - 3);
    g.lower = lo - (static_cast<double>(cells / 2) + 0.5) * g.width;
  } else {
    g.width = (hi - lo) / static_cast<double>(cells - 3);
    g.lower = lo - 1.5 * g.width;
  }
  return g;
}

// ------------------------------------------------------------ point sets

std::vector<IndexSet> guard_selectors(const SequenceSpec& x) {
  std::vector<IndexSet> base;
  for (const auto& g : x.effective_guards()) {
    if (g.kind() != IndexSet::Kind::Empty && g.finite() != Tri::True) base.push_back(g);
  }
  std::vector<IndexSet> out;
  std::vector<std::string> seen;
  auto add = [&](const IndexSet& s_in) {
    const IndexSet s = simplify(s_in);
    if (s.kind() == IndexSet::Kind::Empty || s.finite() == Tri::True) return;
    const auto key = s.to_string();
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) return;
    seen.push_back(key);
    out.push_back(s);
  };
  for (const auto& g : base) add(g);
  for (const auto& g : base) add(complement(g));
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t j = i + 1; j < base.size(); ++j) {
      add(unite(base[i], base[j]));
      add(intersect(base[i], base[j]));
      add(intersect(base[i], complement(base[j])));
      add(intersect(base[j], complement(base[i])));
    }
  }
  return out;
}

PointSetEstimate estimate_gamma(const SequenceSpec& x, const Ideal& ideal, const ValueGrid& grid,
                                const AnalysisConfig& cfg) {
  return cluster_points(x, grid, cfg, ideal_oracle(ideal, cfg), PointSetKind::Gamma, ideal.name());
}

PointSetEstimate estimate_lambda(const SequenceSpec& x, const Ideal& ideal, const ValueGrid& grid,
                                 const AnalysisConfig& cfg) {
  return limit_points(x, grid, cfg, ideal_oracle(ideal, cfg), PointSetKind::Lambda, ideal.name());
}

PointSetEstimate estimate_statistical_cluster_points(const SequenceSpec& x, const ValueGrid& grid,
                                                     const AnalysisConfig& cfg) {
  return cluster_points(x, grid, cfg, natural_oracle(cfg), PointSetKind::StatisticalCluster, "natural density");
}

PointSetEstimate estimate_statistical_limit_points(const SequenceSpec& x, const ValueGrid& grid,
                                                   const AnalysisConfig& cfg) {
  return limit_points(x, grid, cfg, natural_oracle(cfg), PointSetKind::StatisticalLimit, "natural density");
}

PointSetEstimate estimate_ordinary_limit_points(const SequenceSpec& x, const ValueGrid& grid,
                                                const AnalysisConfig& cfg) {
  PointSetEstimate est = blank(PointSetKind::Ordinary, "fin", grid);
  if (prefix_only(x, est)) return est;
  const Ideal fin = Ideal::fin();
  for (auto& cell : est.cells) {
    const IndexSet p = x.preimage(cell_ball(cell.centre, grid.width));
    const auto v = fin.is_member(p, cfg.sched);
    cell.label = v.value == Membership::NotInIdeal ? CellLabel::In
                 : v.value == Membership::InIdeal  ? CellLabel::Out
                                                   : CellLabel::Uncertain;
    cell.evidence = (v.value == Membership::NotInIdeal ? "infinite: " : v.value == Membership::InIdeal ? "finite: " : "") +
                    v.rule + " on " + p.to_string();
  }
  est.note = "cells labelled by finiteness of {k : |x_k - y| < w}";
  return est;
}

// ------------------------------------------------------------- properties

DistanceCheck distance_tail_check(const SequenceSpec& x, const Ideal& ideal, const PointSetEstimate& gamma, double eps,
                                  const AnalysisConfig& cfg) {
  const IntervalSet region = gamma.in_region();
  if (region.empty()) throw PreconditionFailed("Gamma estimate has no In cell");
  std::vector<Interval> near;
  for (const auto& p : region.parts()) near.push_back(Interval::open(p.lo - eps, p.hi + eps));
  const IndexSet far = x.preimage(IntervalSet(std::move(near)).complement());
  const auto a = assess_thin(far, ideal, cfg.sched, cfg.tol, cfg.density);
  return DistanceCheck{a.value, far.to_string(), a.estimate};
}

namespace {

void require_same_grid(const PointSetEstimate& a, const PointSetEstimate& b) {
  if (a.cells.size() != b.cells.size() || a.grid.lower != b.grid.lower || a.grid.width != b.grid.width) {
    throw std::invalid_argument("point-set estimates use different grids");
  }
}

std::string cell_name(const PointSetEstimate& e, std::size_t i) {
  return "cell " + std::to_string(i) + " " + e.cells[i].range.to_string();
}

}  // namespace

PropertyResult check_inclusion(const PointSetEstimate& lambda, const PointSetEstimate& gamma,
                               const PointSetEstimate& ordinary) {
  require_same_grid(lambda, gamma);
  require_same_grid(gamma, ordinary);
  PropertyResult r;
  r.status = Membership::InIdeal;
  for (std::size_t i = 0; i < gamma.cells.size(); ++i) {
    if (lambda.cells[i].label == CellLabel::In && gamma.cells[i].label == CellLabel::Out) {
      r.status = Membership::NotInIdeal;
      r.details.push_back(cell_name(gamma, i) + ": In for lambda, Out for gamma");
    }
    if (gamma.cells[i].label == CellLabel::In && ordinary.cells[i].label == CellLabel::Out) {
      r.status = Membership::NotInIdeal;
      r.details.push_back(cell_name(gamma, i) + ": In for gamma, Out for L");
    }
  }
  return r;
}

PropertyResult check_closedness(const PointSetEstimate& gamma) {
  PropertyResult r;
  r.status = Membership::InIdeal;
  const auto& c = gamma.cells;
  if (gamma.in_cells().empty()) {
    r.status = Membership::NotInIdeal;
    r.details.push_back("no In cell");
    return r;
  }
  // Out cells carry a Thin neighbourhood covering the whole cell, so every
  // decided gap is open; only undecided cells leave closure unconfirmed.
  for (std::size_t i = 1; i + 1 < c.size(); ++i) {
    if (c[i - 1].label != CellLabel::In || c[i + 1].label != CellLabel::In) continue;
    if (c[i].label == CellLabel::Uncertain) {
      r.status = Membership::Inconclusive;
      r.details.push_back(cell_name(gamma, i) + ": undecided between two In cells");
    } else if (c[i].label == CellLabel::Out) {
      r.details.push_back(cell_name(gamma, i) + ": gap backed by a Thin neighbourhood");
    }
  }
  return r;
}

std::vector<Interval> out_intervals(const PointSetEstimate& gamma, std::size_t count) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  const auto& c = gamma.cells;
  for (std::size_t i = 0; i < c.size();) {
    if (c[i].label != CellLabel::Out) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < c.size() && c[j + 1].label == CellLabel::Out) ++j;
    runs.emplace_back(i, j);
    i = j + 1;
  }
  std::vector<std::pair<std::size_t, std::size_t>> picks;
  auto pick = [&](std::size_t a, std::size_t b) {
    if (picks.size() >= count) return;
    if (std::find(picks.begin(), picks.end(), std::make_pair(a, b)) == picks.end()) picks.emplace_back(a, b);
  };
  for (const auto& [a, b] : runs) pick(a, b);
  for (const auto& [a, b] : runs) {
    pick(a, a);
    pick(b, b);
  }
  std::vector<Interval> out;
  for (const auto& [a, b] : picks) out.push_back(Interval::closed(c[a].range.lo, c[b].range.hi));
  return out;
}

PropertyResult check_compact_exclusion(const SequenceSpec& x, const Ideal& ideal, const Interval& a,
                                       const AnalysisConfig& cfg) {
  PropertyResult r;
  const IndexSet p = x.preimage(IntervalSet{a});
  const auto t = assess_thin(p, ideal, cfg.sched, cfg.tol, cfg.density);
  r.details.push_back(a.to_string() + ": " + describe(t));
  r.status = t.value == Thinness::Thin      ? Membership::InIdeal
             : t.value == Thinness::NonThin ? Membership::NotInIdeal
                                            : Membership::Inconclusive;
  return r;
}

PropertyResult compare_labels(const PointSetEstimate& a, const PointSetEstimate& b) {
  require_same_grid(a, b);
  PropertyResult r;
  r.status = Membership::InIdeal;
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    if (a.cells[i].label != b.cells[i].label) {
      r.status = Membership::NotInIdeal;
      r.details.push_back(cell_name(a, i) + ": " + to_string(a.cells[i].label) + " vs " + to_string(b.cells[i].label));
    }
  }
  return r;
}

}  // namespace istat
