#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace istat {

/// Closed-form real term in the index k.
///
/// Grammar: infix `+ - * / ^` over numbers, `k`, and parentheses, plus the
/// named forms `inv(e)` (1/e), `pow(q,e)` (q^e, |q| <= 1), `invval(b,e)`
/// (1/(v_b(e)+1)), `val(b,e)`, `sqrt(e)`, `isqrt(e)`, `abs(e)`, `min(a,b)`,
/// `max(a,b)` and `mod(e,m)`.
class Formula {
 public:
  enum class Op { Const, Index, Add, Sub, Mul, Div, Pow, Neg, Call };
  enum class Monotonicity { Constant, NonDecreasing, NonIncreasing, Unknown };

  Formula();  // constant 0
  static Formula constant(double v);
  static Formula index();
  static Formula parse(std::string_view text);  // throws ParseError

  /// x_k; throws std::domain_error when the value is not finite.
  double eval(std::uint64_t k) const;

  std::string to_string() const;

  /// Monotonicity in k over k >= 1, derived from structure only.
  Monotonicity monotonicity() const;

  bool is_constant() const { return monotonicity() == Monotonicity::Constant; }
  /// True for exactly `invval(b,k)`; sets `base`.
  bool is_inverse_valuation(std::uint64_t& base) const;

  Formula negated() const;

  /// A formula agreeing with this one on even (or odd) k, with every
  /// `pow(q,k)` for q < 0 resolved to +-pow(|q|,k). Nullopt when there is no
  /// such term, or when a negative base has an exponent other than k.
  std::optional<Formula> on_parity(bool even) const;

  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const Node& node() const { return *node_; }

 private:
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Op op = Op::Const;
  double value = 0.0;
  std::string name;  // Call
  std::vector<std::shared_ptr<const Node>> args;
};

}  // namespace istat
