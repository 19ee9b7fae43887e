#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "istat/bitmap.hpp"
#include "istat/schedule.hpp"

namespace istat {

/// Integer closed form in a single variable `i`, used for block bounds.
/// Arithmetic saturates at +-INT64_MAX instead of overflowing.
class IntExpr {
 public:
  enum class Op { Const, Var, Add, Sub, Mul, Pow, Neg };

  static IntExpr constant(std::int64_t v);
  static IntExpr var();
  friend IntExpr operator+(const IntExpr& a, const IntExpr& b);
  friend IntExpr operator-(const IntExpr& a, const IntExpr& b);
  friend IntExpr operator*(const IntExpr& a, const IntExpr& b);
  friend IntExpr operator-(const IntExpr& a);
  static IntExpr pow(const IntExpr& base, const IntExpr& exponent);

  std::int64_t eval(std::int64_t i) const;
  std::string to_string() const;

  struct Node;

 private:
  explicit IntExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// A user-defined subset of N. `member` is mandatory; the rest are optional
/// accelerators. `fill` marks members in [1, bitmap.size()] in one pass.
struct CustomPredicate {
  std::string name;
  std::function<bool(std::uint64_t)> member;
  std::function<std::uint64_t(std::uint64_t)> count;
  std::function<void(PrefixBitmap&)> fill;
};

enum class Tri { False, True, Unknown };

/// Exact natural density when it can be derived from structure alone.
/// `positive`/`full` are exact even when `value` underflows or rounds.
struct ExactDensity {
  double value = 0.0;
  bool positive = false;  // d > 0
  bool full = false;      // d == 1
};

/// Eventually periodic description: for j > threshold, j is a member iff
/// pattern[j % period].
struct PeriodicForm {
  std::uint64_t threshold = 0;
  std::uint64_t period = 1;
  std::vector<bool> pattern;

  bool empty_pattern() const;
  double density() const;
};

inline constexpr std::uint64_t kUnboundedLevel = std::numeric_limits<std::uint64_t>::max();

/// Immutable symbolic subset K of N = {1, 2, ...} with exact membership and
/// exact prefix counts |K(n)|. Copies share structure.
class IndexSet {
 public:
  enum class Kind {
    Empty,
    All,
    Finite,
    Progression,
    Blocks,
    Squares,
    Powers,
    Residue,
    Valuation,
    Custom,
    Union,
    Intersection,
    Complement,
    SymmetricDifference,
  };

  IndexSet();  // Empty

  static IndexSet empty();
  static IndexSet all();
  static IndexSet finite(std::vector<std::uint64_t> elements);
  /// {first, first + step, ...}; first >= 1, step >= 1.
  static IndexSet progression(std::uint64_t first, std::uint64_t step);
  static IndexSet evens() { return progression(2, 2); }
  static IndexSet odds() { return progression(1, 2); }
  /// [lo, hi] as closed-form progressions.
  static IndexSet range(std::uint64_t lo, std::uint64_t hi);
  /// Union of the intervals [lower(i), upper(i)] for i = 0, 1, ...; bounds must
  /// be positive, nonempty and strictly ordered (lower(i+1) > upper(i)).
  static IndexSet blocks(IntExpr lower, IntExpr upper);
  static IndexSet squares();
  /// {base^0, base^1, ...}, base >= 2.
  static IndexSet powers(std::uint64_t base);
  /// {j : j mod modulus == remainder}, 0 <= remainder < modulus.
  static IndexSet residue(std::uint64_t modulus, std::uint64_t remainder);
  /// {j : lo <= v_base(j) <= hi}; hi may be kUnboundedLevel.
  static IndexSet valuation(std::uint64_t base, std::uint64_t lo, std::uint64_t hi);
  static IndexSet custom(CustomPredicate predicate);

  friend IndexSet unite(const IndexSet& a, const IndexSet& b);
  friend IndexSet intersect(const IndexSet& a, const IndexSet& b);
  friend IndexSet complement(const IndexSet& a);
  friend IndexSet symmetric_difference(const IndexSet& a, const IndexSet& b);

  Kind kind() const;
  bool contains(std::uint64_t j) const;

  /// |{j in K : j <= n}|. Throws ResourceLimit when n > ceiling.
  std::uint64_t count(std::uint64_t n, std::uint64_t ceiling = kDefaultPrefixCeiling) const;

  /// Exact membership bits for 1..n (memoized; shared between copies).
  std::shared_ptr<const PrefixBitmap> bitmap(std::uint64_t n, std::uint64_t ceiling = kDefaultPrefixCeiling) const;

  /// Canonical text in the set-expression grammar. Custom nodes print as
  /// `custom:<name>` and do not re-parse.
  std::string to_string() const;
  bool printable() const;

  /// Structure-only facts; no prefix scanning.
  Tri finite() const;
  Tri cofinite() const;
  std::optional<PeriodicForm> periodic() const;
  std::optional<ExactDensity> exact_density() const;

  // Node accessors for structural consumers (simplifier, ideals, printers).
  IndexSet lhs() const;
  IndexSet rhs() const;
  const std::vector<std::uint64_t>& elements() const;
  std::uint64_t param_a() const;  // first / modulus / base
  std::uint64_t param_b() const;  // step / remainder / level lo
  std::uint64_t param_c() const;  // level hi
  const IntExpr& block_lower() const;
  const IntExpr& block_upper() const;
  const CustomPredicate& predicate() const;

  /// Identity of the underlying node; equal for copies.
  const void* identity() const { return node_.get(); }

  struct Node;

 private:
  explicit IndexSet(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Structurally equal (same printable text, or same node for custom sets).
bool same_structure(const IndexSet& a, const IndexSet& b);

/// Semantically equal set with trivial nodes collapsed.
IndexSet simplify(const IndexSet& k);

std::uint64_t isqrt(std::uint64_t n);
/// Exponent of the largest power of base dividing j (j >= 1, base >= 2).
std::uint64_t valuation_of(std::uint64_t j, std::uint64_t base);

/// Set known only on 1..bits->size() (a finalized bitmap); membership or
/// counts past that throw ResourceLimit.
IndexSet known_prefix(std::shared_ptr<const PrefixBitmap> bits, std::string name);

}  // namespace istat
