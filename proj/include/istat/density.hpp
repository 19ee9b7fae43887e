#pragma once

#include <optional>
#include <string>
#include <vector>

#include "istat/ideal.hpp"
#include "istat/index_set.hpp"
#include "istat/schedule.hpp"

namespace istat {

inline constexpr double kDefaultTolerance = 0.02;

enum class DensityVerdict { Exists, DoesNotExist, Zero, Inconclusive };

std::string to_string(DensityVerdict v);

struct DensityOptions {
  /// Use structure-derived exact densities when available.
  bool use_exact = true;
  /// i_density returns a conclusive natural density directly (d = r gives
  /// d_I = r for admissible I) instead of running the ideal limit.
  bool shortcut = true;
};

struct DensityEstimate {
  std::string set;
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> ratios;
  double liminf = 0.0;
  double limsup = 0.0;
  DensityVerdict verdict = DensityVerdict::Inconclusive;
  double value = 0.0;  // meaningful for Exists and Zero
  double tol = kDefaultTolerance;
  std::optional<std::string> ideal;
  /// Exact density from structure, when used.
  std::optional<ExactDensity> exact;
  std::string note;
};

DensityEstimate natural_density(const IndexSet& k, const CheckpointSchedule& sched, double tol = kDefaultTolerance,
                                DensityOptions opts = {});

DensityEstimate i_density(const IndexSet& k, const Ideal& ideal, const CheckpointSchedule& sched,
                          double tol = kDefaultTolerance, DensityOptions opts = {});

enum class Thinness { Thin, NonThin, Inconclusive };

std::string to_string(Thinness t);

struct ThinAssessment {
  Thinness value = Thinness::Inconclusive;
  DensityEstimate estimate;
};

ThinAssessment assess_thin(const IndexSet& k, const Ideal& ideal, const CheckpointSchedule& sched,
                           double tol = kDefaultTolerance, DensityOptions opts = {});

Thinness classify_thin(const IndexSet& k, const Ideal& ideal, const CheckpointSchedule& sched,
                       double tol = kDefaultTolerance, DensityOptions opts = {});

}  // namespace istat
