#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "istat/formula.hpp"
#include "istat/index_set.hpp"
#include "istat/interval_set.hpp"

namespace istat {

struct Piece {
  IndexSet guard;
  Formula formula;
};

/// Piecewise closed-form real sequence x_1, x_2, ...; the first piece whose
/// guard contains k defines x_k, otherwise the default formula does.
class SequenceSpec {
 public:
  SequenceSpec();  // constant 0
  SequenceSpec(std::vector<Piece> pieces, Formula fallback, std::string name = {});

  static SequenceSpec constant(double c, std::string name = {});
  static SequenceSpec of(Formula f, std::string name = {});
  /// Finite data prefix (diagnostics only). eval past the end throws
  /// ResourceLimit and every asymptotic verdict on it is Inconclusive.
  static SequenceSpec from_prefix(std::vector<double> values, std::string name = {});

  double eval(std::uint64_t k) const;

  const std::vector<Piece>& pieces() const { return pieces_; }
  const Formula& fallback() const { return fallback_; }
  const std::string& name() const { return name_; }
  SequenceSpec renamed(std::string name) const;

  /// Length of a data prefix, or nullopt for closed-form sequences.
  std::optional<std::uint64_t> prefix_length() const;

  /// Guard of each piece minus all earlier guards, then the default's
  /// region; size pieces().size() + 1 and pairwise disjoint.
  std::vector<IndexSet> effective_guards() const;

  /// x_1..x_n (index 0 holds x_1). Memoized and shared between copies.
  std::shared_ptr<const std::vector<double>> values(std::uint64_t n,
                                                    std::uint64_t ceiling = kDefaultPrefixCeiling) const;

  /// {k : x_k in s}. Symbolic whenever each piece allows it; otherwise a
  /// predicate over sampled values.
  IndexSet preimage(const IntervalSet& s) const;

  /// Text used in reports: pieces as `guard -> formula`, then default.
  std::string to_string() const;

 private:
  struct Cache;
  std::vector<Piece> pieces_;
  Formula fallback_;
  std::string name_;
  std::shared_ptr<const std::vector<double>> data_;
  std::shared_ptr<Cache> cache_;
};

struct Perturbed {
  SequenceSpec sequence;
  IndexSet disagreement;
};

/// y_k = g(k) on K and x_k elsewhere.
Perturbed perturb(const SequenceSpec& x, const IndexSet& k, const Formula& g);
/// y_k = source_k on K and x_k elsewhere.
Perturbed perturb(const SequenceSpec& x, const IndexSet& k, const SequenceSpec& source);

/// {x}_A: the values x_{k_1}, x_{k_2}, ... for A = {k_1 < k_2 < ...}.
class SubsequenceView {
 public:
  SubsequenceView(SequenceSpec base, IndexSet selector, Tri infinite);

  const SequenceSpec& base() const { return base_; }
  const IndexSet& selector() const { return selector_; }
  /// True when the selector is conclusively infinite.
  Tri infinite() const { return infinite_; }

  /// Selected indices k_j <= n.
  std::vector<std::uint64_t> indices(std::uint64_t n, std::uint64_t ceiling = kDefaultPrefixCeiling) const;
  /// (k_j, x_{k_j}) for k_j <= n.
  std::vector<std::pair<std::uint64_t, double>> values(std::uint64_t n,
                                                       std::uint64_t ceiling = kDefaultPrefixCeiling) const;

 private:
  SequenceSpec base_;
  IndexSet selector_;
  Tri infinite_;
};

/// Throws FiniteSelector when A is conclusively finite.
SubsequenceView restrict(const SequenceSpec& x, const IndexSet& a);

/// Reads one value per line (or comma separated); '#' starts a comment.
SequenceSpec import_csv_prefix(const std::string& text, std::string name = {});

/// {k : f(k) in s} for a single formula when it has a symbolic form.
std::optional<IndexSet> formula_preimage(const Formula& f, const IntervalSet& s);

}  // namespace istat
