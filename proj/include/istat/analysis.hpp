#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "istat/density.hpp"
#include "istat/ideal.hpp"
#include "istat/interval_set.hpp"
#include "istat/sequence.hpp"

namespace istat {

struct AnalysisConfig {
  CheckpointSchedule sched;
  double tol = kDefaultTolerance;
  DensityOptions density;
  std::size_t grid_cells = 64;
  std::size_t refine_rounds = 1;
  std::vector<double> eps_ladder = {0.1, 0.05, 0.02};
  std::vector<double> delta_ladder = {0.05, 0.01};
};

/// Equal cells [lower + i w, lower + (i + 1) w) over the value axis.
struct ValueGrid {
  double lower = 0.0;
  double width = 1.0;
  std::size_t cells = 64;

  static ValueGrid span(double lo, double hi, std::size_t cells);

  double upper() const { return lower + width * static_cast<double>(cells); }
  double centre(std::size_t i) const { return lower + (static_cast<double>(i) + 0.5) * width; }
  Interval cell(std::size_t i) const;
  /// Cell holding v, if inside the grid.
  std::optional<std::size_t> locate(double v) const;
};

enum class CellLabel { In, Out, Uncertain };
enum class PointSetKind { Ordinary, Lambda, Gamma, StatisticalLimit, StatisticalCluster };

std::string to_string(CellLabel l);
std::string to_string(PointSetKind k);

struct CellResult {
  Interval range;
  double centre = 0.0;
  CellLabel label = CellLabel::Uncertain;
  std::string evidence;
  std::string witness;  // selector expression for Lambda
};

struct PointSetEstimate {
  PointSetKind kind = PointSetKind::Gamma;
  std::string ideal;
  ValueGrid grid;
  std::vector<CellResult> cells;
  std::string note;

  std::vector<std::size_t> in_cells() const;
  /// Union of the In cells as closed intervals.
  IntervalSet in_region() const;
};

// ------------------------------------------------------------ convergence

struct ConvergenceStep {
  double eps = 0.0;
  double delta = 0.0;
  MembershipVerdict verdict;  // on {n : |{k <= n : |x_k - xi| >= eps}| / n >= delta}
};

struct ConvergenceVerdict {
  Membership status = Membership::Inconclusive;  // InIdeal: converges; NotInIdeal: refuted
  double xi = 0.0;
  std::vector<ConvergenceStep> steps;
  std::string witness;
};

/// One (eps, delta) instance of I-statistical convergence to xi.
ConvergenceVerdict test_i_statistical_convergence(const SequenceSpec& x, const Ideal& ideal, double xi, double eps,
                                                  double delta, const AnalysisConfig& cfg);
/// The whole (eps, delta) ladder of the config.
ConvergenceVerdict test_i_statistical_convergence(const SequenceSpec& x, const Ideal& ideal, double xi,
                                                  const AnalysisConfig& cfg);
/// d({k : |x_k - xi| >= eps}) = 0 for every eps of the ladder.
ConvergenceVerdict test_statistical_convergence(const SequenceSpec& x, double xi, const AnalysisConfig& cfg);
/// {k : |x_k - xi| >= eps} in I for every eps of the ladder.
ConvergenceVerdict test_i_convergence(const SequenceSpec& x, const Ideal& ideal, double xi, const AnalysisConfig& cfg);

/// Ordinary limit of x along a selector (None when too few indices or not settled).
struct SelectorLimit {
  Membership status = Membership::Inconclusive;
  std::optional<double> value;
  std::uint64_t selected = 0;
  std::string diagnosis;
};
SelectorLimit limit_along(const SequenceSpec& x, const IndexSet& selector, double tol, const AnalysisConfig& cfg);

/// Median of the last checkpoint window of x (the usual candidate limit).
double tail_candidate(const SequenceSpec& x, const AnalysisConfig& cfg);

// ------------------------------------------------------------ boundedness

struct Boundedness {
  enum class Kind { Bounded, BoundedAbove, BoundedBelow, Unbounded, Inconclusive };
  Kind kind = Kind::Inconclusive;
  double bound = 0.0;
  Interval compact;  // [-l, l] for Bounded
  std::vector<std::pair<double, Thinness>> ladder;
};

std::string to_string(Boundedness::Kind k);

Boundedness test_i_statistical_boundedness(const SequenceSpec& x, const Ideal& ideal, const AnalysisConfig& cfg);

/// 64 cells (cfg.grid_cells) over the probe-window values inside the
/// boundedness bound, one cell of margin. Throws UnboundedRange.
ValueGrid default_grid(const SequenceSpec& x, const Ideal& ideal, const AnalysisConfig& cfg);

// ------------------------------------------------------------ point sets

PointSetEstimate estimate_gamma(const SequenceSpec& x, const Ideal& ideal, const ValueGrid& grid,
                                const AnalysisConfig& cfg);
PointSetEstimate estimate_lambda(const SequenceSpec& x, const Ideal& ideal, const ValueGrid& grid,
                                 const AnalysisConfig& cfg);
PointSetEstimate estimate_ordinary_limit_points(const SequenceSpec& x, const ValueGrid& grid,
                                                const AnalysisConfig& cfg);
/// Natural-density versions (statistical cluster / limit points).
PointSetEstimate estimate_statistical_cluster_points(const SequenceSpec& x, const ValueGrid& grid,
                                                     const AnalysisConfig& cfg);
PointSetEstimate estimate_statistical_limit_points(const SequenceSpec& x, const ValueGrid& grid,
                                                   const AnalysisConfig& cfg);

/// Selector family searched for Lambda witnesses: effective guards, their
/// complements, and pairwise unions, intersections and differences.
std::vector<IndexSet> guard_selectors(const SequenceSpec& x);

// ------------------------------------------------------------- properties

struct PropertyResult {
  Membership status = Membership::Inconclusive;  // InIdeal: holds; NotInIdeal: violated
  std::vector<std::string> details;
};

/// {k : dist(x_k, In-region) >= eps} is Thin.
struct DistanceCheck {
  Thinness verdict = Thinness::Inconclusive;
  std::string set;
  DensityEstimate estimate;
};
DistanceCheck distance_tail_check(const SequenceSpec& x, const Ideal& ideal, const PointSetEstimate& gamma, double eps,
                                  const AnalysisConfig& cfg);

/// No Lambda cell In where Gamma is Out; no Gamma cell In where L is Out.
PropertyResult check_inclusion(const PointSetEstimate& lambda, const PointSetEstimate& gamma,
                               const PointSetEstimate& ordinary);
/// No Out cell of Gamma with In neighbours on both sides.
PropertyResult check_closedness(const PointSetEstimate& gamma);
/// Up to `count` closed intervals made of Out cells of Gamma.
std::vector<Interval> out_intervals(const PointSetEstimate& gamma, std::size_t count);
/// {k : x_k in A} is Thin for a compact A covered by Out cells.
PropertyResult check_compact_exclusion(const SequenceSpec& x, const Ideal& ideal, const Interval& a,
                                       const AnalysisConfig& cfg);
/// Cell labels agree (In/Out/Uncertain) between two estimates on one grid.
PropertyResult compare_labels(const PointSetEstimate& a, const PointSetEstimate& b);

}  // namespace istat
