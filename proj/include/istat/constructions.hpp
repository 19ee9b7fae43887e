#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "istat/analysis.hpp"

namespace istat {

struct ApioWitness {
  std::vector<IndexSet> inputs;   // A_j
  std::vector<IndexSet> outputs;  // B_j = A_j n (n_j, inf)
  IndexSet union_set;             // B
  std::vector<std::uint64_t> splice_points;
  /// |A_j (sym diff) B_j| = |A_j n [1, n_j]|, exact.
  std::vector<std::uint64_t> head_bounds;
  std::vector<ThinAssessment> input_verdicts;
  ThinAssessment verdict;  // on B
  bool finite_differences = false;
  bool thin_union = false;
};

/// Splice a finite family of thin sets into one thin union.
/// Throws PreconditionFailed when some A_j is not Thin and ConstructionFailed
/// when no splice point fits below the ceiling.
ApioWitness apio_witness(const std::vector<IndexSet>& family, const Ideal& ideal, const AnalysisConfig& cfg);

struct DecompositionWitness {
  double limit = 0.0;
  IndexSet set;  // B, claimed d_I(B) = 1
  ApioWitness apio;
  ConvergenceVerdict convergence;  // I-statistical, checked first
  ThinAssessment complement;       // on N \ B
  SelectorLimit along;             // ordinary limit of x along B
  std::uint64_t deviation_from = 0;
  double max_deviation = 0.0;      // max |x_k - l| over k in B, deviation_from <= k <= N
  /// Thin complement and convergence along B agree with the I-statistical test.
  bool round_trip = false;
  std::string note;
};

inline constexpr std::size_t kDefaultLadderDepth = 8;

DecompositionWitness decompose(const SequenceSpec& x, const Ideal& ideal, double l, const AnalysisConfig& cfg,
                               std::size_t depth = kDefaultLadderDepth);

/// max |x_k - l| over k in B with from <= k <= n.
double max_deviation_along(const SequenceSpec& x, const IndexSet& b, double l, std::uint64_t from, std::uint64_t n,
                           std::uint64_t ceiling);

struct Companion {
  SequenceSpec sequence;   // y
  IndexSet disagreement;   // superset of {k : x_k != y_k}
  ThinAssessment disagreement_verdict;
  PointSetEstimate limit_points;  // L_y
  /// Each In cell of L_y lies within one cell of an In cell of Gamma and back.
  bool matches = false;
  std::vector<std::string> mismatches;
};

/// Remap the values far from the Gamma In-region to the nearest In centre.
Companion companion_sequence(const SequenceSpec& x, const Ideal& ideal, const PointSetEstimate& gamma,
                             const AnalysisConfig& cfg);

enum class Monotone { Increasing, Decreasing };

struct MonotoneOptions {
  Monotone direction = Monotone::Increasing;
  std::optional<IndexSet> m;  // computed from x when absent
  /// Shrink M to {k in M : x_k <= l0} first, l0 from the boundedness ladder.
  bool shrink = false;
};

struct InclusionCheck {
  double eps = 0.0;
  std::uint64_t k0 = 0;
  std::uint64_t checked = 0;     // indices of M in (k0, N]
  std::uint64_t violations = 0;  // of those, outside (l - eps, l + eps)
  std::uint64_t first_violation = 0;
  Thinness violation_verdict = Thinness::Inconclusive;
  bool literal = false;  // no violations at all
};

struct MonotoneResult {
  Membership status = Membership::Inconclusive;  // InIdeal: converges to limit
  std::optional<double> limit;
  IndexSet m;
  DensityEstimate m_density;
  Boundedness boundedness;
  std::optional<double> shrink_bound;
  std::optional<ThinAssessment> shrink_verdict;  // on M \ S
  std::vector<std::pair<std::uint64_t, double>> window_sups;  // (window end, sup over M)
  bool stabilized = false;
  ConvergenceVerdict convergence;
  InclusionCheck inclusion;
  std::string note;
};

/// {k : x_k <= x_{k+1}} as a predicate set.
IndexSet monotone_set(const SequenceSpec& x);
/// -x, piece by piece.
SequenceSpec negate(const SequenceSpec& x);

/// Throws PreconditionFailed when d_I(M) is not 1 or x is not bounded on the
/// monotone side.
MonotoneResult monotone_i_stat_limit(const SequenceSpec& x, const Ideal& ideal, const AnalysisConfig& cfg,
                                     const MonotoneOptions& opts = {});

struct Extraction {
  IndexSet set;  // B
  ThinAssessment verdict;
  Boundedness boundedness;
  /// Grid cells hit by values off B, and whether each sits next to an In cell.
  std::vector<std::size_t> hit_cells;
  bool compact = false;
  std::string note;
};

/// Throws PreconditionFailed unless x is I-statistically bounded and Gamma has
/// an In cell; ConstructionFailed names the offending cell.
Extraction heine_borel_extract(const SequenceSpec& x, const Ideal& ideal, const PointSetEstimate& gamma,
                               const AnalysisConfig& cfg);

}  // namespace istat
