#include "istat/cli/parse.hpp"

#include <cctype>
#include <charconv>
#include <string>
#include <vector>

#include "istat/errors.hpp"

namespace istat::cli {

namespace {

constexpr std::uint64_t kMaxFiniteElements = 1u << 20;

class Cursor {
 public:
  Cursor(std::string_view text, std::size_t base, const char* what) : s_(text), base_(base), what_(what) {}

  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw ParseError(std::string(what_) + ": " + msg, base_ + at);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip();
    return pos_ >= s_.size();
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  bool accept(std::string_view word) {
    skip();
    if (s_.substr(pos_, word.size()) != word) return false;
    pos_ += word.size();
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string ident() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }
  std::uint64_t number() {
    skip();
    std::uint64_t v = 0;
    const auto* first = s_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
    if (ec == std::errc::result_out_of_range) fail("number out of range");
    if (ptr == first) fail("expected a non-negative integer");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }
  std::size_t pos() const { return pos_; }
  void finish() {
    if (!done()) fail("unexpected trailing input");
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t base_;
  const char* what_;
};

// ------------------------------------------------------------ integer terms

IntExpr int_sum(Cursor& c);

IntExpr int_atom(Cursor& c) {
  if (c.accept('(')) {
    IntExpr e = int_sum(c);
    c.expect(')');
    return e;
  }
  if (c.accept('-')) return -int_atom(c);
  if (c.accept('i')) return IntExpr::var();
  if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
    const auto v = c.number();
    if (v > static_cast<std::uint64_t>(INT64_MAX)) c.fail("number out of range");
    return IntExpr::constant(static_cast<std::int64_t>(v));
  }
  c.fail("expected an integer, 'i' or '('");
}

IntExpr int_power(Cursor& c) {
  IntExpr base = int_atom(c);
  if (c.accept('^')) return IntExpr::pow(base, int_power(c));
  return base;
}

IntExpr int_product(Cursor& c) {
  IntExpr e = int_power(c);
  while (c.accept('*')) e = e * int_power(c);
  return e;
}

IntExpr int_sum(Cursor& c) {
  IntExpr e = int_product(c);
  for (;;) {
    if (c.accept('+')) {
      e = e + int_product(c);
    } else if (c.accept('-')) {
      e = e - int_product(c);
    } else {
      return e;
    }
  }
}

// ------------------------------------------------------------------ sets

IndexSet set_expr(Cursor& c);

std::vector<IndexSet> set_args(Cursor& c, std::size_t min, std::size_t max, const std::string& name) {
  const std::size_t at = c.pos();
  c.expect('(');
  std::vector<IndexSet> out;
  if (!c.accept(')')) {
    do out.push_back(set_expr(c));
    while (c.accept(','));
    c.expect(')');
  }
  if (out.size() < min || out.size() > max) {
    c.fail_at(name + " takes " + (min == max ? std::to_string(min) : "at least " + std::to_string(min)) +
                  " set argument(s)",
              at);
  }
  return out;
}

std::vector<std::uint64_t> num_args(Cursor& c, std::size_t count, const std::string& name, bool allow_inf = false,
                                    bool* inf = nullptr) {
  c.expect('(');
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < count; ++i) {
    if (i) {
      if (!c.accept(',')) {
        if (i + 1 == count && allow_inf) break;
        c.fail(name + " expects " + std::to_string(count) + " arguments");
      }
    }
    if (allow_inf && i + 1 == count && c.accept("inf")) {
      *inf = true;
      out.push_back(kUnboundedLevel);
      continue;
    }
    out.push_back(c.number());
  }
  c.expect(')');
  return out;
}

IndexSet finite_items(Cursor& c) {
  c.expect('{');
  std::vector<std::uint64_t> elems;
  if (!c.accept('}')) {
    do {
      const std::size_t at = c.pos();
      const std::uint64_t lo = c.number();
      std::uint64_t hi = lo;
      if (c.accept("..")) hi = c.number();
      if (lo == 0) c.fail_at("finite sets hold positive integers", at);
      if (hi < lo) c.fail_at("empty range", at);
      if (hi - lo >= kMaxFiniteElements || elems.size() + (hi - lo) >= kMaxFiniteElements) {
        c.fail_at("finite set too large", at);
      }
      for (std::uint64_t v = lo; v <= hi; ++v) elems.push_back(v);
    } while (c.accept(','));
    c.expect('}');
  }
  return IndexSet::finite(std::move(elems));
}

template <class Op>
IndexSet fold(std::vector<IndexSet> xs, Op op) {
  IndexSet acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) acc = op(acc, xs[i]);
  return acc;
}

IndexSet set_expr(Cursor& c) {
  c.skip();
  const std::size_t start = c.pos();
  const std::string name = c.ident();
  if (name.empty()) c.fail("expected a set expression");
  try {
    if (name == "empty") return IndexSet::empty();
    if (name == "all") return IndexSet::all();
    if (name == "evens") return IndexSet::evens();
    if (name == "odds") return IndexSet::odds();
    if (name == "squares") return IndexSet::squares();
    if (name == "finite") return finite_items(c);
    if (name == "ap") {
      const auto a = num_args(c, 2, name);
      return IndexSet::progression(a[0], a[1]);
    }
    if (name == "powers") return IndexSet::powers(num_args(c, 1, name)[0]);
    if (name == "residue") {
      const auto a = num_args(c, 2, name);
      return IndexSet::residue(a[0], a[1]);
    }
    if (name == "val") {
      bool inf = false;
      const auto a = num_args(c, 3, name, true, &inf);
      return IndexSet::valuation(a[0], a[1], a.size() == 3 ? a[2] : a[1]);
    }
    if (name == "blocks") {
      c.expect('(');
      IntExpr lo = int_sum(c);
      c.expect(',');
      IntExpr hi = int_sum(c);
      c.expect(')');
      return IndexSet::blocks(lo, hi);
    }
    if (name == "union") return fold(set_args(c, 1, SIZE_MAX, name), [](const IndexSet& a, const IndexSet& b) { return unite(a, b); });
    if (name == "inter") return fold(set_args(c, 1, SIZE_MAX, name), [](const IndexSet& a, const IndexSet& b) { return intersect(a, b); });
    if (name == "symdiff") {
      const auto a = set_args(c, 2, 2, name);
      return symmetric_difference(a[0], a[1]);
    }
    if (name == "comp") return complement(set_args(c, 1, 1, name)[0]);
  } catch (const std::invalid_argument& e) {
    c.fail_at(e.what(), start);
  }
  c.fail_at("unknown set '" + name + "'", start);
}

}  // namespace

IndexSet parse_set(std::string_view text) {
  Cursor c(text, 0, "set");
  IndexSet s = set_expr(c);
  c.finish();
  return s;
}

IntExpr parse_int_expr(std::string_view text) {
  Cursor c(text, 0, "integer term");
  IntExpr e = int_sum(c);
  c.finish();
  return e;
}

Ideal parse_ideal(std::string_view text) {
  Cursor c(text, 0, "ideal");
  const std::string name = c.ident();
  Ideal out = Ideal::fin();
  if (name == "fin") {
    out = Ideal::fin();
  } else if (name == "density0") {
    out = Ideal::density_zero();
  } else if (name == "summable") {
    out = Ideal::summable();
  } else if (name == "trace") {
    c.expect('(');
    const std::size_t at = c.pos();
    // the inner set is parsed with offsets relative to the whole string
    int depth = 1;
    std::size_t end = at;
    while (end < text.size() && depth > 0) {
      if (text[end] == '(') ++depth;
      if (text[end] == ')') --depth;
      if (depth > 0) ++end;
    }
    if (depth != 0) c.fail("unbalanced parentheses");
    Cursor inner(text.substr(at, end - at), at, "ideal");
    IndexSet g = set_expr(inner);
    inner.finish();
    out = Ideal::trace(g);
    Cursor rest(text.substr(end + 1), end + 1, "ideal");
    rest.finish();
    return out;
  } else {
    c.fail_at("unknown ideal '" + name + "' (fin, density0, summable, trace(<set>))", 0);
  }
  c.finish();
  return out;
}

}  // namespace istat::cli
