#include "istat/index_set.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "istat/errors.hpp"

namespace istat {

// ---------------------------------------------------------------- IntExpr

struct IntExpr::Node {
  Op op = Op::Const;
  std::int64_t value = 0;
  std::shared_ptr<const Node> a, b;
};

namespace {

constexpr std::int64_t kSatMax = std::numeric_limits<std::int64_t>::max();

std::int64_t saturate(__int128 v) {
  if (v > kSatMax) return kSatMax;
  if (v < -kSatMax) return -kSatMax;
  return static_cast<std::int64_t>(v);
}

std::int64_t sat_pow(std::int64_t base, std::int64_t exp) {
  if (exp < 0) return 0;
  if (base == 0) return exp == 0 ? 1 : 0;
  if (base == 1) return 1;
  if (base == -1) return exp % 2 == 0 ? 1 : -1;
  __int128 r = 1;
  for (std::int64_t e = 0; e < exp; ++e) {
    r *= base;
    if (r > kSatMax || r < -kSatMax) return saturate(r);
  }
  return static_cast<std::int64_t>(r);
}

int precedence(IntExpr::Op op) {
  switch (op) {
    case IntExpr::Op::Add:
    case IntExpr::Op::Sub: return 1;
    case IntExpr::Op::Mul: return 2;
    case IntExpr::Op::Neg: return 3;
    case IntExpr::Op::Pow: return 4;
    default: return 5;
  }
}

}  // namespace

IntExpr IntExpr::constant(std::int64_t v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v;
  return IntExpr(std::move(n));
}

IntExpr IntExpr::var() {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  return IntExpr(std::move(n));
}

IntExpr operator+(const IntExpr& a, const IntExpr& b) {
  auto n = std::make_shared<IntExpr::Node>();
  n->op = IntExpr::Op::Add;
  n->a = a.node_;
  n->b = b.node_;
  return IntExpr(std::move(n));
}

IntExpr operator-(const IntExpr& a, const IntExpr& b) {
  auto n = std::make_shared<IntExpr::Node>();
  n->op = IntExpr::Op::Sub;
  n->a = a.node_;
  n->b = b.node_;
  return IntExpr(std::move(n));
}

IntExpr operator*(const IntExpr& a, const IntExpr& b) {
  auto n = std::make_shared<IntExpr::Node>();
  n->op = IntExpr::Op::Mul;
  n->a = a.node_;
  n->b = b.node_;
  return IntExpr(std::move(n));
}

IntExpr operator-(const IntExpr& a) {
  auto n = std::make_shared<IntExpr::Node>();
  n->op = IntExpr::Op::Neg;
  n->a = a.node_;
  return IntExpr(std::move(n));
}

IntExpr IntExpr::pow(const IntExpr& base, const IntExpr& exponent) {
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->a = base.node_;
  n->b = exponent.node_;
  return IntExpr(std::move(n));
}

namespace {

std::int64_t eval_int(const IntExpr::Node& n, std::int64_t i) {
  using Op = IntExpr::Op;
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return i;
    case Op::Add: return saturate(static_cast<__int128>(eval_int(*n.a, i)) + eval_int(*n.b, i));
    case Op::Sub: return saturate(static_cast<__int128>(eval_int(*n.a, i)) - eval_int(*n.b, i));
    case Op::Mul: return saturate(static_cast<__int128>(eval_int(*n.a, i)) * eval_int(*n.b, i));
    case Op::Neg: return -eval_int(*n.a, i);
    case Op::Pow: return sat_pow(eval_int(*n.a, i), eval_int(*n.b, i));
  }
  return 0;
}

void print_int(const IntExpr::Node& n, int parent, std::string& out) {
  using Op = IntExpr::Op;
  const int p = precedence(n.op);
  const bool paren = p < parent;
  if (paren) out += '(';
  switch (n.op) {
    case Op::Const:
      if (n.value < 0 && parent > 1) {
        out += '(' + std::to_string(n.value) + ')';
      } else {
        out += std::to_string(n.value);
      }
      break;
    case Op::Var: out += 'i'; break;
    case Op::Add:
      print_int(*n.a, p, out);
      out += '+';
      print_int(*n.b, p, out);
      break;
    case Op::Sub:
      print_int(*n.a, p, out);
      out += '-';
      print_int(*n.b, p + 1, out);
      break;
    case Op::Mul:
      print_int(*n.a, p, out);
      out += '*';
      print_int(*n.b, p + 1, out);
      break;
    case Op::Neg:
      out += '-';
      print_int(*n.a, p + 1, out);
      break;
    case Op::Pow:
      print_int(*n.a, p + 1, out);
      out += '^';
      print_int(*n.b, p, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::int64_t IntExpr::eval(std::int64_t i) const { return eval_int(*node_, i); }

std::string IntExpr::to_string() const {
  std::string out;
  print_int(*node_, 0, out);
  return out;
}

// ---------------------------------------------------------------- helpers

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::uint64_t valuation_of(std::uint64_t j, std::uint64_t base) {
  std::uint64_t v = 0;
  while (j % base == 0) {
    j /= base;
    ++v;
  }
  return v;
}

namespace {

constexpr std::uint64_t kPeriodCap = std::uint64_t{1} << 16;
constexpr std::uint64_t kU64Max = std::numeric_limits<std::uint64_t>::max();

/// base^e, or nullopt if it exceeds `limit`.
std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t e, std::uint64_t limit) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (r > limit / base) return std::nullopt;
    r *= base;
  }
  if (r > limit) return std::nullopt;
  return r;
}

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::True && b == Tri::True) return Tri::True;
  return Tri::Unknown;
}

}  // namespace

bool PeriodicForm::empty_pattern() const { return std::none_of(pattern.begin(), pattern.end(), [](bool b) { return b; }); }

double PeriodicForm::density() const {
  const auto ones = std::count(pattern.begin(), pattern.end(), true);
  return static_cast<double>(ones) / static_cast<double>(period);
}

// ---------------------------------------------------------------- nodes

struct IndexSet::Node {
  Kind kind = Kind::Empty;
  std::vector<std::uint64_t> elems;
  std::uint64_t a = 0, b = 0, c = 0;
  std::optional<IntExpr> lower, upper;
  std::shared_ptr<const CustomPredicate> pred;
  std::shared_ptr<const Node> left, right;

  mutable std::mutex mu;
  mutable std::shared_ptr<const PrefixBitmap> cache;
  // Blocks enumerated so far, as (lo, hi); complete up to blocks_reach.
  mutable std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;
  mutable std::uint64_t blocks_reach = 0;
  mutable bool blocks_exhausted = false;
};

namespace {

using NodePtr = std::shared_ptr<const IndexSet::Node>;

NodePtr empty_node() {
  static const NodePtr n = [] {
    auto p = std::make_shared<IndexSet::Node>();
    p->kind = IndexSet::Kind::Empty;
    return p;
  }();
  return n;
}

NodePtr make_node(IndexSet::Kind kind) {
  auto p = std::make_shared<IndexSet::Node>();
  p->kind = kind;
  return p;
}

/// Ensures blocks are enumerated while lower(i) <= n. Caller holds node.mu.
void extend_blocks(const IndexSet::Node& node, std::uint64_t n) {
  if (node.blocks_exhausted || node.blocks_reach >= n) return;
  std::int64_t i = static_cast<std::int64_t>(node.blocks.size());
  while (true) {
    const std::int64_t lo = node.lower->eval(i);
    const std::int64_t hi = node.upper->eval(i);
    if (lo < 1) throw std::invalid_argument("blocks: lower bound " + std::to_string(lo) + " < 1 at i=" + std::to_string(i));
    if (hi < lo) throw std::invalid_argument("blocks: empty block at i=" + std::to_string(i));
    if (!node.blocks.empty() && static_cast<std::uint64_t>(lo) <= node.blocks.back().second) {
      throw std::invalid_argument("blocks: block " + std::to_string(i) + " overlaps or precedes block " +
                                  std::to_string(i - 1));
    }
    if (lo >= kSatMax) {
      node.blocks_exhausted = true;
      return;
    }
    node.blocks.emplace_back(static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi));
    ++i;
    if (static_cast<std::uint64_t>(lo) > n) {
      node.blocks_reach = static_cast<std::uint64_t>(lo) - 1;
      return;
    }
  }
}

std::uint64_t count_closed(const IndexSet::Node& node, std::uint64_t n, bool& ok);

}  // namespace

IndexSet::IndexSet() : node_(empty_node()) {}

IndexSet IndexSet::empty() { return IndexSet(); }

IndexSet IndexSet::all() {
  static const NodePtr n = make_node(Kind::All);
  return IndexSet(n);
}

IndexSet IndexSet::finite(std::vector<std::uint64_t> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  if (!elements.empty() && elements.front() == 0) throw std::invalid_argument("finite: elements must be >= 1");
  if (elements.empty()) return empty();
  auto p = std::make_shared<Node>();
  p->kind = Kind::Finite;
  p->elems = std::move(elements);
  return IndexSet(std::move(p));
}

IndexSet IndexSet::progression(std::uint64_t first, std::uint64_t step) {
  if (first < 1 || step < 1) throw std::invalid_argument("ap: first and step must be >= 1");
  auto p = std::make_shared<Node>();
  p->kind = Kind::Progression;
  p->a = first;
  p->b = step;
  return IndexSet(std::move(p));
}

IndexSet IndexSet::range(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 1) lo = 1;
  if (hi < lo) return empty();
  if (hi == kU64Max) return progression(lo, 1);
  return intersect(progression(lo, 1), complement(progression(hi + 1, 1)));
}

IndexSet IndexSet::blocks(IntExpr lower, IntExpr upper) {
  auto p = std::make_shared<Node>();
  p->kind = Kind::Blocks;
  p->lower = std::move(lower);
  p->upper = std::move(upper);
  {
    // Validate the head eagerly so malformed generators fail at construction.
    std::lock_guard<std::mutex> lock(p->mu);
    extend_blocks(*p, std::uint64_t{1} << 20);
  }
  return IndexSet(std::move(p));
}

IndexSet IndexSet::squares() {
  static const NodePtr n = make_node(Kind::Squares);
  return IndexSet(n);
}

IndexSet IndexSet::powers(std::uint64_t base) {
  if (base < 2) throw std::invalid_argument("powers: base must be >= 2");
  auto p = std::make_shared<Node>();
  p->kind = Kind::Powers;
  p->a = base;
  return IndexSet(std::move(p));
}

IndexSet IndexSet::residue(std::uint64_t modulus, std::uint64_t remainder) {
  if (modulus < 1 || remainder >= modulus) throw std::invalid_argument("residue: need 0 <= r < m");
  auto p = std::make_shared<Node>();
  p->kind = Kind::Residue;
  p->a = modulus;
  p->b = remainder;
  return IndexSet(std::move(p));
}

IndexSet IndexSet::valuation(std::uint64_t base, std::uint64_t lo, std::uint64_t hi) {
  if (base < 2) throw std::invalid_argument("val: base must be >= 2");
  if (lo > hi) return empty();
  auto p = std::make_shared<Node>();
  p->kind = Kind::Valuation;
  p->a = base;
  p->b = lo;
  p->c = hi;
  return IndexSet(std::move(p));
}

IndexSet IndexSet::custom(CustomPredicate predicate) {
  if (!predicate.member) throw std::invalid_argument("custom set needs a membership rule");
  auto p = std::make_shared<Node>();
  p->kind = Kind::Custom;
  p->pred = std::make_shared<const CustomPredicate>(std::move(predicate));
  return IndexSet(std::move(p));
}

IndexSet unite(const IndexSet& a, const IndexSet& b) {
  auto p = std::make_shared<IndexSet::Node>();
  p->kind = IndexSet::Kind::Union;
  p->left = a.node_;
  p->right = b.node_;
  return IndexSet(std::move(p));
}

IndexSet intersect(const IndexSet& a, const IndexSet& b) {
  auto p = std::make_shared<IndexSet::Node>();
  p->kind = IndexSet::Kind::Intersection;
  p->left = a.node_;
  p->right = b.node_;
  return IndexSet(std::move(p));
}

IndexSet complement(const IndexSet& a) {
  auto p = std::make_shared<IndexSet::Node>();
  p->kind = IndexSet::Kind::Complement;
  p->left = a.node_;
  return IndexSet(std::move(p));
}

IndexSet symmetric_difference(const IndexSet& a, const IndexSet& b) {
  auto p = std::make_shared<IndexSet::Node>();
  p->kind = IndexSet::Kind::SymmetricDifference;
  p->left = a.node_;
  p->right = b.node_;
  return IndexSet(std::move(p));
}

IndexSet::Kind IndexSet::kind() const { return node_->kind; }
IndexSet IndexSet::lhs() const { return IndexSet(node_->left ? node_->left : empty_node()); }
IndexSet IndexSet::rhs() const { return IndexSet(node_->right ? node_->right : empty_node()); }
const std::vector<std::uint64_t>& IndexSet::elements() const { return node_->elems; }
std::uint64_t IndexSet::param_a() const { return node_->a; }
std::uint64_t IndexSet::param_b() const { return node_->b; }
std::uint64_t IndexSet::param_c() const { return node_->c; }
const IntExpr& IndexSet::block_lower() const { return *node_->lower; }
const IntExpr& IndexSet::block_upper() const { return *node_->upper; }
const CustomPredicate& IndexSet::predicate() const { return *node_->pred; }

// ---------------------------------------------------------------- membership

bool IndexSet::contains(std::uint64_t j) const {
  const Node& n = *node_;
  if (j == 0) return false;
  switch (n.kind) {
    case Kind::Empty: return false;
    case Kind::All: return true;
    case Kind::Finite: return std::binary_search(n.elems.begin(), n.elems.end(), j);
    case Kind::Progression: return j >= n.a && (j - n.a) % n.b == 0;
    case Kind::Blocks: {
      std::lock_guard<std::mutex> lock(n.mu);
      extend_blocks(n, j);
      auto it = std::upper_bound(n.blocks.begin(), n.blocks.end(), j,
                                 [](std::uint64_t v, const auto& blk) { return v < blk.first; });
      if (it == n.blocks.begin()) return false;
      --it;
      return j <= it->second;
    }
    case Kind::Squares: {
      const auto r = isqrt(j);
      return r * r == j;
    }
    case Kind::Powers: {
      while (j % n.a == 0) j /= n.a;
      return j == 1;
    }
    case Kind::Residue: return j % n.a == n.b;
    case Kind::Valuation: {
      const auto v = valuation_of(j, n.a);
      return v >= n.b && v <= n.c;
    }
    case Kind::Custom: return n.pred->member(j);
    case Kind::Union: return lhs().contains(j) || rhs().contains(j);
    case Kind::Intersection: return lhs().contains(j) && rhs().contains(j);
    case Kind::Complement: return !lhs().contains(j);
    case Kind::SymmetricDifference: return lhs().contains(j) != rhs().contains(j);
  }
  return false;
}

// ---------------------------------------------------------------- counting

namespace {

std::uint64_t count_closed(const IndexSet::Node& n, std::uint64_t lim, bool& ok) {
  using Kind = IndexSet::Kind;
  ok = true;
  switch (n.kind) {
    case Kind::Empty: return 0;
    case Kind::All: return lim;
    case Kind::Finite:
      return static_cast<std::uint64_t>(std::upper_bound(n.elems.begin(), n.elems.end(), lim) - n.elems.begin());
    case Kind::Progression: return lim < n.a ? 0 : (lim - n.a) / n.b + 1;
    case Kind::Blocks: {
      std::lock_guard<std::mutex> lock(n.mu);
      extend_blocks(n, lim);
      std::uint64_t total = 0;
      for (const auto& [lo, hi] : n.blocks) {
        if (lo > lim) break;
        total += std::min(hi, lim) - lo + 1;
      }
      return total;
    }
    case Kind::Squares: return isqrt(lim);
    case Kind::Powers: {
      std::uint64_t c = 0;
      for (std::uint64_t p = 1; p <= lim; p *= n.a) {
        ++c;
        if (p > lim / n.a) break;
      }
      return c;
    }
    case Kind::Residue:
      if (n.b == 0) return lim / n.a;
      return lim < n.b ? 0 : (lim - n.b) / n.a + 1;
    case Kind::Valuation: {
      const auto lo_pow = checked_pow(n.a, n.b, lim);
      if (!lo_pow) return 0;
      std::uint64_t c = lim / *lo_pow;
      if (n.c != kUnboundedLevel) {
        if (const auto hi_pow = checked_pow(n.a, n.c + 1, lim)) c -= lim / *hi_pow;
      }
      return c;
    }
    case Kind::Custom:
      if (n.pred->count) return n.pred->count(lim);
      ok = false;
      return 0;
    default: ok = false; return 0;
  }
}

std::uint64_t round_up_size(std::uint64_t n, std::uint64_t ceiling) {
  std::uint64_t t = 4096;
  while (t < n) t <<= 1;
  return std::max(n, std::min(t, ceiling));
}

void fill_node(const IndexSet& set, PrefixBitmap& bm, std::uint64_t ceiling);

}  // namespace

std::uint64_t IndexSet::count(std::uint64_t n, std::uint64_t ceiling) const {
  if (n > ceiling) {
    throw ResourceLimit("count up to " + std::to_string(n) + " exceeds prefix ceiling " + std::to_string(ceiling));
  }
  if (n == 0) return 0;
  if (node_->kind == Kind::Complement) return n - lhs().count(n, ceiling);
  bool ok = false;
  const auto c = count_closed(*node_, n, ok);
  if (ok) return c;
  return bitmap(n, ceiling)->rank(n);
}

std::shared_ptr<const PrefixBitmap> IndexSet::bitmap(std::uint64_t n, std::uint64_t ceiling) const {
  if (n > ceiling) {
    throw ResourceLimit("prefix of " + std::to_string(n) + " exceeds prefix ceiling " + std::to_string(ceiling));
  }
  {
    std::lock_guard<std::mutex> lock(node_->mu);
    if (node_->cache && node_->cache->size() >= n) return node_->cache;
  }
  // Built outside the lock: children take their own locks, and a concurrent
  // duplicate build is harmless.
  auto bm = std::make_shared<PrefixBitmap>(round_up_size(n, ceiling));
  fill_node(*this, *bm, ceiling);
  bm->finalize();
  std::lock_guard<std::mutex> lock(node_->mu);
  if (!node_->cache || node_->cache->size() < bm->size()) node_->cache = bm;
  return node_->cache;
}

namespace {

void combine(PrefixBitmap& out, const PrefixBitmap& a, const PrefixBitmap& b, IndexSet::Kind kind) {
  auto& w = out.words();
  const auto& wa = a.words();
  const auto& wb = b.words();
  for (std::size_t i = 0; i < w.size(); ++i) {
    switch (kind) {
      case IndexSet::Kind::Union: w[i] = wa[i] | wb[i]; break;
      case IndexSet::Kind::Intersection: w[i] = wa[i] & wb[i]; break;
      default: w[i] = wa[i] ^ wb[i]; break;
    }
  }
}

void fill_node(const IndexSet& set, PrefixBitmap& bm, std::uint64_t ceiling) {
  using Kind = IndexSet::Kind;
  const std::uint64_t n = bm.size();
  switch (set.kind()) {
    case Kind::Empty: return;
    case Kind::All: bm.set_range(1, n); return;
    case Kind::Finite:
      for (auto e : set.elements()) {
        if (e > n) break;
        bm.set(e);
      }
      return;
    case Kind::Progression: {
      const auto a = set.param_a(), d = set.param_b();
      if (d == 1) {
        bm.set_range(a, n);
        return;
      }
      for (std::uint64_t j = a; j <= n; j += d) bm.set(j);
      return;
    }
    case Kind::Blocks: {
      (void)set.count(n, std::max(ceiling, n));  // validates the generator up to n
      for (std::int64_t i = 0;; ++i) {
        const std::int64_t lo = set.block_lower().eval(i);
        if (lo < 1 || static_cast<std::uint64_t>(lo) > n) break;
        bm.set_range(static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(set.block_upper().eval(i)));
      }
      return;
    }
    case Kind::Squares:
      for (std::uint64_t m = 1; m * m <= n; ++m) bm.set(m * m);
      return;
    case Kind::Powers:
      for (std::uint64_t p = 1; p <= n; p *= set.param_a()) {
        bm.set(p);
        if (p > n / set.param_a()) break;
      }
      return;
    case Kind::Residue: {
      const auto m = set.param_a(), r = set.param_b();
      for (std::uint64_t j = r == 0 ? m : r; j <= n; j += m) bm.set(j);
      return;
    }
    case Kind::Valuation: {
      const auto base = set.param_a();
      const auto step = checked_pow(base, set.param_b(), n);
      if (!step) return;
      for (std::uint64_t j = *step; j <= n; j += *step) {
        if (set.param_c() == kUnboundedLevel || valuation_of(j, base) <= set.param_c()) bm.set(j);
      }
      return;
    }
    case Kind::Custom: {
      const auto& pred = set.predicate();
      if (pred.fill) {
        pred.fill(bm);
        return;
      }
      for (std::uint64_t j = 1; j <= n; ++j) {
        if (pred.member(j)) bm.set(j);
      }
      return;
    }
    case Kind::Complement: {
      auto inner = set.lhs().bitmap(n, std::max(ceiling, n));
      auto& w = bm.words();
      const auto& wi = inner->words();
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = ~wi[i];
      return;
    }
    case Kind::Union:
    case Kind::Intersection:
    case Kind::SymmetricDifference: {
      auto a = set.lhs().bitmap(n, std::max(ceiling, n));
      auto b = set.rhs().bitmap(n, std::max(ceiling, n));
      combine(bm, *a, *b, set.kind());
      return;
    }
  }
}

}  // namespace

// ---------------------------------------------------------------- printing

std::string IndexSet::to_string() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Empty: return "empty";
    case Kind::All: return "all";
    case Kind::Finite: {
      std::string s = "finite{";
      for (std::size_t i = 0; i < n.elems.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(n.elems[i]);
      }
      return s + "}";
    }
    case Kind::Progression:
      if (n.a == 2 && n.b == 2) return "evens";
      if (n.a == 1 && n.b == 2) return "odds";
      return "ap(" + std::to_string(n.a) + "," + std::to_string(n.b) + ")";
    case Kind::Blocks: return "blocks(" + n.lower->to_string() + "," + n.upper->to_string() + ")";
    case Kind::Squares: return "squares";
    case Kind::Powers: return "powers(" + std::to_string(n.a) + ")";
    case Kind::Residue: return "residue(" + std::to_string(n.a) + "," + std::to_string(n.b) + ")";
    case Kind::Valuation:
      if (n.b == n.c) return "val(" + std::to_string(n.a) + "," + std::to_string(n.b) + ")";
      return "val(" + std::to_string(n.a) + "," + std::to_string(n.b) + "," +
             (n.c == kUnboundedLevel ? std::string("inf") : std::to_string(n.c)) + ")";
    case Kind::Custom: return "custom:" + n.pred->name;
    case Kind::Union: return "union(" + lhs().to_string() + "," + rhs().to_string() + ")";
    case Kind::Intersection: return "inter(" + lhs().to_string() + "," + rhs().to_string() + ")";
    case Kind::Complement: return "comp(" + lhs().to_string() + ")";
    case Kind::SymmetricDifference: return "symdiff(" + lhs().to_string() + "," + rhs().to_string() + ")";
  }
  return "?";
}

bool IndexSet::printable() const {
  switch (node_->kind) {
    case Kind::Custom: return false;
    case Kind::Complement: return lhs().printable();
    case Kind::Union:
    case Kind::Intersection:
    case Kind::SymmetricDifference: return lhs().printable() && rhs().printable();
    default: return true;
  }
}

bool same_structure(const IndexSet& a, const IndexSet& b) {
  if (a.identity() == b.identity()) return true;
  if (a.kind() != b.kind()) return false;
  if (!a.printable() || !b.printable()) return false;
  return a.to_string() == b.to_string();
}

// ---------------------------------------------------------------- structure

std::optional<PeriodicForm> IndexSet::periodic() const {
  const Node& n = *node_;
  auto single = [](std::uint64_t threshold, std::uint64_t period) {
    PeriodicForm f;
    f.threshold = threshold;
    f.period = period;
    f.pattern.assign(period, false);
    return f;
  };
  switch (n.kind) {
    case Kind::Empty: return single(0, 1);
    case Kind::All: {
      auto f = single(0, 1);
      f.pattern[0] = true;
      return f;
    }
    case Kind::Finite: return single(n.elems.back(), 1);
    case Kind::Progression: {
      if (n.b > kPeriodCap) return std::nullopt;
      auto f = single(n.a - 1, n.b);
      f.pattern[n.a % n.b] = true;
      return f;
    }
    case Kind::Residue: {
      if (n.a > kPeriodCap) return std::nullopt;
      auto f = single(0, n.a);
      f.pattern[n.b] = true;
      return f;
    }
    case Kind::Valuation: {
      if (n.c == kUnboundedLevel) {
        const auto p = checked_pow(n.a, n.b, kPeriodCap);
        if (!p) return std::nullopt;
        auto f = single(0, *p);
        f.pattern[0] = true;
        return f;
      }
      const auto p = checked_pow(n.a, n.c + 1, kPeriodCap);
      if (!p) return std::nullopt;
      auto f = single(0, *p);
      for (std::uint64_t r = 1; r < *p; ++r) f.pattern[r] = valuation_of(r, n.a) >= n.b;
      return f;
    }
    case Kind::Complement: {
      auto f = lhs().periodic();
      if (!f) return std::nullopt;
      f->pattern.flip();
      return f;
    }
    case Kind::Union:
    case Kind::Intersection:
    case Kind::SymmetricDifference: {
      const auto fa = lhs().periodic();
      if (!fa) return std::nullopt;
      const auto fb = rhs().periodic();
      if (!fb) return std::nullopt;
      const auto l = std::lcm(fa->period, fb->period);
      if (l > kPeriodCap) return std::nullopt;
      auto f = single(std::max(fa->threshold, fb->threshold), l);
      for (std::uint64_t r = 0; r < l; ++r) {
        const bool x = fa->pattern[r % fa->period];
        const bool y = fb->pattern[r % fb->period];
        f.pattern[r] = n.kind == Kind::Union ? (x || y) : n.kind == Kind::Intersection ? (x && y) : (x != y);
      }
      return f;
    }
    default: return std::nullopt;
  }
}

namespace {

struct Finiteness {
  Tri fin = Tri::Unknown;
  Tri cofin = Tri::Unknown;
};

Finiteness structural_finiteness(const IndexSet& s) {
  using Kind = IndexSet::Kind;
  switch (s.kind()) {
    case Kind::Empty: return {Tri::True, Tri::False};
    case Kind::All: return {Tri::False, Tri::True};
    case Kind::Finite: return {Tri::True, Tri::False};
    case Kind::Progression: return {Tri::False, s.param_b() == 1 ? Tri::True : Tri::False};
    case Kind::Residue: return {Tri::False, s.param_a() == 1 ? Tri::True : Tri::False};
    case Kind::Valuation:
      return {Tri::False, (s.param_b() == 0 && s.param_c() == kUnboundedLevel) ? Tri::True : Tri::False};
    case Kind::Squares:
    case Kind::Powers: return {Tri::False, Tri::False};
    case Kind::Blocks: return {Tri::False, Tri::Unknown};
    case Kind::Custom: return {};
    case Kind::Complement: {
      const auto in = structural_finiteness(s.lhs());
      return {in.cofin, in.fin};
    }
    case Kind::Union: {
      const auto a = structural_finiteness(s.lhs());
      const auto b = structural_finiteness(s.rhs());
      Finiteness r;
      r.fin = tri_and(a.fin, b.fin);
      if (a.cofin == Tri::True || b.cofin == Tri::True) {
        r.cofin = Tri::True;
      } else if (a.fin == Tri::True) {
        r.cofin = b.cofin;
      } else if (b.fin == Tri::True) {
        r.cofin = a.cofin;
      }
      return r;
    }
    case Kind::Intersection: {
      const auto a = structural_finiteness(s.lhs());
      const auto b = structural_finiteness(s.rhs());
      Finiteness r;
      r.cofin = tri_and(a.cofin, b.cofin);
      if (a.fin == Tri::True || b.fin == Tri::True) {
        r.fin = Tri::True;
      } else if (a.cofin == Tri::True) {
        r.fin = b.fin;
      } else if (b.cofin == Tri::True) {
        r.fin = a.fin;
      }
      return r;
    }
    case Kind::SymmetricDifference: {
      const auto a = structural_finiteness(s.lhs());
      const auto b = structural_finiteness(s.rhs());
      if (a.fin == Tri::True) return b;
      if (b.fin == Tri::True) return a;
      if (a.cofin == Tri::True) return {b.cofin, b.fin};
      if (b.cofin == Tri::True) return {a.cofin, a.fin};
      return {};
    }
  }
  return {};
}

}  // namespace

Tri IndexSet::finite() const {
  if (const auto f = periodic()) return f->empty_pattern() ? Tri::True : Tri::False;
  return structural_finiteness(*this).fin;
}

Tri IndexSet::cofinite() const {
  if (const auto f = periodic()) {
    const bool full = std::all_of(f->pattern.begin(), f->pattern.end(), [](bool b) { return b; });
    return full ? Tri::True : Tri::False;
  }
  return structural_finiteness(*this).cofin;
}

std::optional<ExactDensity> IndexSet::exact_density() const {
  const Node& n = *node_;
  if (n.kind != Kind::Finite && n.kind != Kind::Empty && n.kind != Kind::All) {
    if (const auto f = periodic()) {
      const auto ones = std::count(f->pattern.begin(), f->pattern.end(), true);
      return ExactDensity{f->density(), ones > 0, static_cast<std::uint64_t>(ones) == f->period};
    }
  }
  const ExactDensity zero{0.0, false, false};
  const ExactDensity one{1.0, true, true};
  auto comp = [](const ExactDensity& d) { return ExactDensity{1.0 - d.value, !d.full, !d.positive}; };
  switch (n.kind) {
    case Kind::Empty:
    case Kind::Finite:
    case Kind::Squares:
    case Kind::Powers: return zero;
    case Kind::All: return one;
    case Kind::Progression: return ExactDensity{1.0 / static_cast<double>(n.b), true, n.b == 1};
    case Kind::Residue: return ExactDensity{1.0 / static_cast<double>(n.a), true, n.a == 1};
    case Kind::Valuation: {
      const double base = static_cast<double>(n.a);
      const double lo = std::pow(base, -static_cast<double>(n.b));
      const double hi = n.c == kUnboundedLevel ? 0.0 : std::pow(base, -static_cast<double>(n.c) - 1.0);
      return ExactDensity{lo - hi, true, n.b == 0 && n.c == kUnboundedLevel};
    }
    case Kind::Blocks:
    case Kind::Custom: return std::nullopt;
    case Kind::Complement: {
      const auto in = lhs().exact_density();
      if (!in) return std::nullopt;
      return comp(*in);
    }
    case Kind::Union: {
      const auto a = lhs().exact_density();
      const auto b = rhs().exact_density();
      if ((a && a->full) || (b && b->full)) return one;
      if (a && b) {
        if (!b->positive) return a;
        if (!a->positive) return b;
      }
      return std::nullopt;
    }
    case Kind::Intersection: {
      const auto a = lhs().exact_density();
      const auto b = rhs().exact_density();
      if ((a && !a->positive) || (b && !b->positive)) return zero;
      if (a && b) {
        if (b->full) return a;
        if (a->full) return b;
      }
      return std::nullopt;
    }
    case Kind::SymmetricDifference: {
      const auto a = lhs().exact_density();
      const auto b = rhs().exact_density();
      if (!a || !b) return std::nullopt;
      if (!b->positive) return a;
      if (!a->positive) return b;
      if (b->full) return comp(*a);
      if (a->full) return comp(*b);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- simplify

namespace {

bool is_complement_of(const IndexSet& a, const IndexSet& b) {
  return (a.kind() == IndexSet::Kind::Complement && same_structure(a.lhs(), b)) ||
         (b.kind() == IndexSet::Kind::Complement && same_structure(b.lhs(), a));
}

}  // namespace

IndexSet simplify(const IndexSet& k) {
  using Kind = IndexSet::Kind;
  switch (k.kind()) {
    case Kind::Progression:
      if (k.param_a() == 1 && k.param_b() == 1) return IndexSet::all();
      return k;
    case Kind::Residue:
      if (k.param_a() == 1) return IndexSet::all();
      return k;
    case Kind::Valuation:
      if (k.param_b() == 0 && k.param_c() == kUnboundedLevel) return IndexSet::all();
      return k;
    case Kind::Complement: {
      const auto in = simplify(k.lhs());
      if (in.kind() == Kind::Complement) return in.lhs();
      if (in.kind() == Kind::Empty) return IndexSet::all();
      if (in.kind() == Kind::All) return IndexSet::empty();
      if (in.identity() == k.lhs().identity()) return k;
      return complement(in);
    }
    case Kind::Union: {
      const auto a = simplify(k.lhs());
      const auto b = simplify(k.rhs());
      if (a.kind() == Kind::Empty) return b;
      if (b.kind() == Kind::Empty) return a;
      if (a.kind() == Kind::All || b.kind() == Kind::All) return IndexSet::all();
      if (same_structure(a, b)) return a;
      if (is_complement_of(a, b)) return IndexSet::all();
      if (a.kind() == Kind::Finite && b.kind() == Kind::Finite) {
        auto e = a.elements();
        e.insert(e.end(), b.elements().begin(), b.elements().end());
        return IndexSet::finite(std::move(e));
      }
      if (a.kind() == Kind::Valuation && b.kind() == Kind::Valuation && a.param_a() == b.param_a()) {
        const auto lo = std::min(a.param_b(), b.param_b());
        const auto hi = std::max(a.param_c(), b.param_c());
        const bool touching = std::max(a.param_b(), b.param_b()) <= std::min(a.param_c(), b.param_c()) + 1 ||
                              std::min(a.param_c(), b.param_c()) == kUnboundedLevel;
        if (touching) return simplify(IndexSet::valuation(a.param_a(), lo, hi));
      }
      if (a.identity() == k.lhs().identity() && b.identity() == k.rhs().identity()) return k;
      return unite(a, b);
    }
    case Kind::Intersection: {
      const auto a = simplify(k.lhs());
      const auto b = simplify(k.rhs());
      if (a.kind() == Kind::Empty || b.kind() == Kind::Empty) return IndexSet::empty();
      if (a.kind() == Kind::All) return b;
      if (b.kind() == Kind::All) return a;
      if (same_structure(a, b)) return a;
      if (is_complement_of(a, b)) return IndexSet::empty();
      if (a.kind() == Kind::Finite || b.kind() == Kind::Finite) {
        const auto& fin = a.kind() == Kind::Finite ? a : b;
        const auto& other = a.kind() == Kind::Finite ? b : a;
        std::vector<std::uint64_t> kept;
        for (auto e : fin.elements()) {
          if (other.contains(e)) kept.push_back(e);
        }
        return IndexSet::finite(std::move(kept));
      }
      if (a.kind() == Kind::Valuation && b.kind() == Kind::Valuation && a.param_a() == b.param_a()) {
        return simplify(IndexSet::valuation(a.param_a(), std::max(a.param_b(), b.param_b()),
                                            std::min(a.param_c(), b.param_c())));
      }
      if (a.identity() == k.lhs().identity() && b.identity() == k.rhs().identity()) return k;
      return intersect(a, b);
    }
    case Kind::SymmetricDifference: {
      const auto a = simplify(k.lhs());
      const auto b = simplify(k.rhs());
      if (same_structure(a, b)) return IndexSet::empty();
      if (a.kind() == Kind::Empty) return b;
      if (b.kind() == Kind::Empty) return a;
      if (a.kind() == Kind::All) return simplify(complement(b));
      if (b.kind() == Kind::All) return simplify(complement(a));
      if (a.identity() == k.lhs().identity() && b.identity() == k.rhs().identity()) return k;
      return symmetric_difference(a, b);
    }
    default: return k;
  }
}

IndexSet known_prefix(std::shared_ptr<const PrefixBitmap> bits, std::string name) {
  const std::uint64_t known = bits->size();
  const auto beyond = [known](std::uint64_t j) {
    return ResourceLimit("index " + std::to_string(j) + " is past the known prefix of " + std::to_string(known));
  };
  CustomPredicate pred;
  pred.name = std::move(name);
  pred.member = [bits, known, beyond](std::uint64_t j) {
    if (j > known) throw beyond(j);
    return bits->test(j);
  };
  pred.count = [bits, known, beyond](std::uint64_t n) {
    if (n > known) throw beyond(n);
    return bits->rank(n);
  };
  pred.fill = [bits](PrefixBitmap& out) {
    auto& w = out.words();
    const auto& src = bits->words();
    std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(std::min(w.size(), src.size())), w.begin());
  };
  return IndexSet::custom(std::move(pred));
}

}  // namespace istat
