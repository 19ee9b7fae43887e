#include "istat/formula.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "istat/errors.hpp"
#include "istat/index_set.hpp"

namespace istat {

namespace {

using NodePtr = std::shared_ptr<const Formula::Node>;
using Op = Formula::Op;
using Mono = Formula::Monotonicity;

NodePtr make(Op op, std::vector<NodePtr> args = {}, double value = 0.0, std::string name = {}) {
  auto n = std::make_shared<Formula::Node>();
  n->op = op;
  n->args = std::move(args);
  n->value = value;
  n->name = std::move(name);
  return n;
}

struct Arity {
  const char* name;
  std::size_t args;
};

constexpr Arity kFunctions[] = {
    {"inv", 1}, {"pow", 2}, {"invval", 2}, {"val", 2}, {"sqrt", 1},
    {"isqrt", 1}, {"abs", 1}, {"min", 2}, {"max", 2}, {"mod", 2},
};

double eval_node(const Formula::Node& n, double k);

std::uint64_t as_positive_integer(double x, const char* what) {
  if (!(x >= 1.0) || x != std::floor(x) || x > 9.007199254740992e15) {
    throw std::domain_error(std::string(what) + " needs a positive integer argument");
  }
  return static_cast<std::uint64_t>(x);
}

double eval_call(const Formula::Node& n, double k) {
  const auto arg = [&](std::size_t i) { return eval_node(*n.args[i], k); };
  const std::string& f = n.name;
  if (f == "inv") return 1.0 / arg(0);
  if (f == "pow") return std::pow(arg(0), arg(1));
  if (f == "invval" || f == "val") {
    const auto base = as_positive_integer(arg(0), f.c_str());
    const auto j = as_positive_integer(arg(1), f.c_str());
    const auto v = static_cast<double>(valuation_of(j, base));
    return f == "val" ? v : 1.0 / (v + 1.0);
  }
  if (f == "sqrt") return std::sqrt(arg(0));
  if (f == "isqrt") {
    const double x = arg(0);
    if (x < 0) return std::nan("");
    return static_cast<double>(isqrt(static_cast<std::uint64_t>(std::floor(x))));
  }
  if (f == "abs") return std::fabs(arg(0));
  if (f == "min") return std::min(arg(0), arg(1));
  if (f == "max") return std::max(arg(0), arg(1));
  if (f == "mod") {
    const double m = arg(1);
    const double r = std::fmod(arg(0), m);
    return r < 0 ? r + std::fabs(m) : r;
  }
  throw std::domain_error("unknown function " + f);
}

double eval_node(const Formula::Node& n, double k) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Index: return k;
    case Op::Add: return eval_node(*n.args[0], k) + eval_node(*n.args[1], k);
    case Op::Sub: return eval_node(*n.args[0], k) - eval_node(*n.args[1], k);
    case Op::Mul: return eval_node(*n.args[0], k) * eval_node(*n.args[1], k);
    case Op::Div: return eval_node(*n.args[0], k) / eval_node(*n.args[1], k);
    case Op::Pow: return std::pow(eval_node(*n.args[0], k), eval_node(*n.args[1], k));
    case Op::Neg: return -eval_node(*n.args[0], k);
    case Op::Call: return eval_call(n, k);
  }
  return 0.0;
}

// ------------------------------------------------------------------ parser

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    auto e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("formula: " + msg, pos_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    auto lhs = term();
    while (true) {
      if (accept('+')) {
        lhs = make(Op::Add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(Op::Sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    auto lhs = unary();
    while (true) {
      if (accept('*')) {
        lhs = make(Op::Mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Op::Div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return make(Op::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const auto* begin = text_.data() + pos_;
      const auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), v);
      if (ec != std::errc()) fail("bad number");
      pos_ += static_cast<std::size_t>(ptr - begin);
      return make(Op::Const, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      if (name == "k") return make(Op::Index);
      for (const auto& fn : kFunctions) {
        if (name != fn.name) continue;
        expect('(');
        std::vector<NodePtr> args;
        args.push_back(expr());
        while (accept(',')) args.push_back(expr());
        expect(')');
        if (args.size() != fn.args) {
          pos_ = start;
          fail(name + " takes " + std::to_string(fn.args) + " argument(s)");
        }
        validate_call(name, args, start);
        return make(Op::Call, std::move(args), 0.0, name);
      }
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected '") + c + "'");
  }

  void validate_call(const std::string& name, const std::vector<NodePtr>& args, std::size_t at) {
    const Formula first(args[0]);
    if (name == "pow") {
      if (!first.is_constant()) {
        pos_ = at;
        fail("pow base must be constant");
      }
      const double q = first.eval(1);
      if (std::fabs(q) > 1.0) {
        pos_ = at;
        fail("pow base must satisfy |q| <= 1");
      }
    }
    if (name == "invval" || name == "val") {
      const double b = first.is_constant() ? first.eval(1) : 0.0;
      if (b < 2 || b != std::floor(b)) {
        pos_ = at;
        fail(name + " base must be an integer >= 2");
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ----------------------------------------------------------------- printing

int precedence(const Formula::Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

std::string number_text(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

void print(const Formula::Node& n, int parent, std::string& out) {
  const int p = precedence(n);
  const bool paren = p < parent;
  if (paren) out += '(';
  switch (n.op) {
    case Op::Const:
      if (n.value < 0 || std::signbit(n.value)) {
        out += "(" + number_text(n.value) + ")";
      } else {
        out += number_text(n.value);
      }
      break;
    case Op::Index: out += 'k'; break;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      static constexpr char kSym[] = {'+', '-', '*', '/'};
      print(*n.args[0], p, out);
      out += kSym[static_cast<int>(n.op) - static_cast<int>(Op::Add)];
      print(*n.args[1], p + 1, out);
      break;
    }
    case Op::Pow:
      print(*n.args[0], p + 1, out);
      out += '^';
      print(*n.args[1], p, out);
      break;
    case Op::Neg:
      out += '-';
      print(*n.args[0], p + 1, out);
      break;
    case Op::Call:
      out += n.name;
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ',';
        print(*n.args[i], 0, out);
      }
      out += ')';
      break;
  }
  if (paren) out += ')';
}

// ------------------------------------------------------------- monotonicity

Mono flip(Mono m) {
  if (m == Mono::NonDecreasing) return Mono::NonIncreasing;
  if (m == Mono::NonIncreasing) return Mono::NonDecreasing;
  return m;
}

Mono add(Mono a, Mono b) {
  if (a == Mono::Constant) return b;
  if (b == Mono::Constant) return a;
  if (a == b) return a;
  return Mono::Unknown;
}

Mono mono_of(const Formula::Node& n);

/// Sign of a subterm that is positive for every k >= 1, derived from its
/// monotone direction and its value at k = 1.
bool positive_everywhere(const Formula::Node& n) {
  const Mono m = mono_of(n);
  if (m == Mono::Unknown || m == Mono::NonIncreasing) return false;
  try {
    return eval_node(n, 1.0) > 0.0;
  } catch (const std::domain_error&) {
    return false;
  }
}

bool nonnegative_everywhere(const Formula::Node& n) {
  const Mono m = mono_of(n);
  if (m == Mono::Unknown || m == Mono::NonIncreasing) return false;
  try {
    return eval_node(n, 1.0) >= 0.0;
  } catch (const std::domain_error&) {
    return false;
  }
}

Mono scale(Mono m, double c) {
  if (c == 0.0) return Mono::Constant;
  return c > 0 ? m : flip(m);
}

Mono mono_of(const Formula::Node& n) {
  switch (n.op) {
    case Op::Const: return Mono::Constant;
    case Op::Index: return Mono::NonDecreasing;
    case Op::Add: return add(mono_of(*n.args[0]), mono_of(*n.args[1]));
    case Op::Sub: return add(mono_of(*n.args[0]), flip(mono_of(*n.args[1])));
    case Op::Neg: return flip(mono_of(*n.args[0]));
    case Op::Mul: {
      const Mono a = mono_of(*n.args[0]);
      const Mono b = mono_of(*n.args[1]);
      if (a == Mono::Constant) return scale(b, eval_node(*n.args[0], 1.0));
      if (b == Mono::Constant) return scale(a, eval_node(*n.args[1], 1.0));
      return Mono::Unknown;
    }
    case Op::Div: {
      const Mono a = mono_of(*n.args[0]);
      const Mono b = mono_of(*n.args[1]);
      if (b == Mono::Constant) {
        const double c = eval_node(*n.args[1], 1.0);
        if (c == 0.0) return Mono::Unknown;
        return scale(a, c);
      }
      if (a == Mono::Constant && positive_everywhere(*n.args[1])) {
        return scale(Mono::NonIncreasing, eval_node(*n.args[0], 1.0));
      }
      return Mono::Unknown;
    }
    case Op::Pow: {
      const Mono a = mono_of(*n.args[0]);
      const Mono b = mono_of(*n.args[1]);
      if (a == Mono::Constant && b == Mono::Constant) return Mono::Constant;
      if (b == Mono::Constant && nonnegative_everywhere(*n.args[0])) {
        const double e = eval_node(*n.args[1], 1.0);
        return e >= 0 ? a : flip(a);
      }
      return Mono::Unknown;
    }
    case Op::Call: {
      const std::string& f = n.name;
      if (f == "inv") {
        const Mono a = mono_of(*n.args[0]);
        if (a == Mono::Constant) return Mono::Constant;
        return positive_everywhere(*n.args[0]) ? Mono::NonIncreasing : Mono::Unknown;
      }
      if (f == "pow") {
        const double q = eval_node(*n.args[0], 1.0);
        const Mono e = mono_of(*n.args[1]);
        if (e == Mono::Constant || q == 1.0) return Mono::Constant;
        if (q == 0.0 && positive_everywhere(*n.args[1])) return Mono::Constant;
        if (q > 0.0 && q < 1.0) return flip(e);
        return Mono::Unknown;
      }
      if (f == "sqrt" || f == "isqrt") {
        const Mono a = mono_of(*n.args[0]);
        return (a == Mono::Constant || nonnegative_everywhere(*n.args[0])) ? a : Mono::Unknown;
      }
      if (f == "min" || f == "max") return add(mono_of(*n.args[0]), mono_of(*n.args[1])) == Mono::Unknown
                                               ? Mono::Unknown
                                               : add(mono_of(*n.args[0]), mono_of(*n.args[1]));
      bool all_const = true;
      for (const auto& a : n.args) all_const = all_const && mono_of(*a) == Mono::Constant;
      return all_const ? Mono::Constant : Mono::Unknown;
    }
  }
  return Mono::Unknown;
}

// Rewrites negative-base powers of k for one parity; `hit` records a rewrite,
// `bad` a negative base whose exponent is not k itself.
NodePtr resolve_parity(const NodePtr& n, bool even, bool& hit, bool& bad) {
  if (n->op == Op::Call && n->name == "pow" && mono_of(*n->args[0]) == Mono::Constant &&
      eval_node(*n->args[0], 1.0) < 0.0) {
    if (n->args[1]->op != Op::Index) {
      bad = true;
      return n;
    }
    hit = true;
    NodePtr p = make(Op::Call, {make(Op::Const, {}, -eval_node(*n->args[0], 1.0)), n->args[1]}, 0.0, "pow");
    return even ? p : make(Op::Neg, {p});
  }
  if (n->args.empty()) return n;
  std::vector<NodePtr> args;
  bool changed = false;
  for (const auto& a : n->args) {
    args.push_back(resolve_parity(a, even, hit, bad));
    changed = changed || args.back() != a;
  }
  return changed ? make(n->op, std::move(args), n->value, n->name) : n;
}

}  // namespace

Formula::Formula() : node_(make(Op::Const, {}, 0.0)) {}

Formula Formula::constant(double v) { return Formula(make(Op::Const, {}, v)); }

Formula Formula::index() { return Formula(make(Op::Index)); }

Formula Formula::parse(std::string_view text) { return Formula(Parser(text).parse()); }

double Formula::eval(std::uint64_t k) const {
  const double v = eval_node(*node_, static_cast<double>(k));
  if (!std::isfinite(v)) {
    throw std::domain_error("formula " + to_string() + " is not finite at k=" + std::to_string(k));
  }
  return v;
}

std::string Formula::to_string() const {
  std::string out;
  print(*node_, 0, out);
  return out;
}

Formula::Monotonicity Formula::monotonicity() const { return mono_of(*node_); }

bool Formula::is_inverse_valuation(std::uint64_t& base) const {
  const Node& n = *node_;
  if (n.op != Op::Call || n.name != "invval") return false;
  if (n.args[1]->op != Op::Index || n.args[0]->op != Op::Const) return false;
  base = static_cast<std::uint64_t>(n.args[0]->value);
  return true;
}

Formula Formula::negated() const {
  if (node_->op == Op::Const) return constant(-node_->value);
  if (node_->op == Op::Neg) return Formula(node_->args[0]);
  return Formula(make(Op::Neg, {node_}));
}

std::optional<Formula> Formula::on_parity(bool even) const {
  bool hit = false, bad = false;
  NodePtr r = resolve_parity(node_, even, hit, bad);
  if (!hit || bad) return std::nullopt;
  return Formula(std::move(r));
}

}  // namespace istat
