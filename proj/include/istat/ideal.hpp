#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "istat/index_set.hpp"
#include "istat/schedule.hpp"

namespace istat {

enum class Membership { InIdeal, NotInIdeal, Inconclusive };

std::string to_string(Membership m);

struct MembershipVerdict {
  Membership value = Membership::Inconclusive;
  std::string rule;  // which decision procedure fired
  /// (checkpoint, count or partial sum) samples behind a prefix verdict
  std::vector<std::pair<std::uint64_t, double>> evidence;
};

/// Decision thresholds shared by the prefix heuristics.
struct IdealConfig {
  double density_tol = 0.01;
  double summable_flat = 1e-12;        // tail growth treated as none
  double summable_decay = 0.35;        // second-half growth <= this * first-half: In
  double summable_persist = 0.5;       // second-half growth >= this * first-half ...
  double summable_min_slope = 0.01;    // ... and at least this per unit of log n: NotIn
  double fin_growth_share = 1.0 / 3.0; // share of tail windows with growth for NotIn
};

enum class IdealKind { Fin, DensityZero, Summable, Trace };

/// One of the shipped admissible ideals on N.
class Ideal {
 public:
  static Ideal fin();
  static Ideal density_zero(IdealConfig cfg = {});
  static Ideal summable(IdealConfig cfg = {});
  /// {A : A n G finite}; throws ConstructionFailed when G is conclusively finite.
  static Ideal trace(IndexSet g, IdealConfig cfg = {});

  IdealKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool admissible() const { return true; }
  const IdealConfig& config() const { return cfg_; }
  /// G for Trace ideals, All otherwise.
  const IndexSet& trace_set() const { return g_; }

  MembershipVerdict is_member(const IndexSet& k, const CheckpointSchedule& budget) const;
  /// A is in the associated filter iff N \ A is in the ideal.
  MembershipVerdict in_filter(const IndexSet& a, const CheckpointSchedule& budget) const;

 private:
  Ideal(IdealKind kind, std::string name, IdealConfig cfg, IndexSet g);
  IdealKind kind_;
  std::string name_;
  IdealConfig cfg_;
  IndexSet g_;
};

/// f(n) for n = 1, 2, ...; evaluated in increasing order.
using PrefixFunction = std::function<double(std::uint64_t)>;

struct LadderStep {
  double eps = 0.0;
  MembershipVerdict deviation;  // verdict on {n : |f(n) - L| >= eps}
};

struct IdealLimit {
  std::optional<double> value;  // set only when every ladder step is InIdeal
  Membership status = Membership::Inconclusive;  // InIdeal: converges; NotInIdeal: refuted
  double candidate = 0.0;
  std::vector<LadderStep> ladder;
  /// min/max of f over tail-window n outside the finest deviation set (along
  /// G for Trace ideals).
  double tail_min = 0.0;
  double tail_max = 0.0;
  std::string diagnosis;
};

/// I-lim f with tolerance ladder {2 tol, tol, tol / 2}.
IdealLimit ideal_limit(const PrefixFunction& f, const Ideal& ideal, const CheckpointSchedule& sched, double tol);

struct AxiomReport {
  bool pass = true;
  std::vector<std::pair<std::string, Membership>> verdicts;
  std::vector<std::string> violations;  // each names the offending pair
};

/// Ideal and filter axioms over a finite universe of sets.
AxiomReport check_axioms(const Ideal& ideal, const std::vector<IndexSet>& universe, const CheckpointSchedule& budget);

}  // namespace istat
