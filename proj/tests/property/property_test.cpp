#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "istat/cli/parse.hpp"
#include "istat/density.hpp"
#include "istat/sequence.hpp"

using namespace istat;

namespace {

constexpr int kCases = 60;

// Random set expressions in the textual grammar, so every generated case also
// exercises the parser.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return rng_() % n; }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  std::string leaf() {
    const auto n = [](std::uint64_t v) { return std::to_string(v); };
    switch (below(11)) {
      case 0: return "empty";
      case 1: return "all";
      case 2: return "evens";
      case 3: return "odds";
      case 4: return "squares";
      case 5: return "ap(" + n(between(1, 9)) + "," + n(between(1, 7)) + ")";
      case 6: return "powers(" + n(between(2, 5)) + ")";
      case 7: {
        const auto m = between(2, 9);
        return "residue(" + n(m) + "," + n(below(m)) + ")";
      }
      case 8: {
        const auto lo = below(3);
        return below(2) ? "val(" + n(between(2, 3)) + "," + n(lo) + ")"
                        : "val(" + n(between(2, 3)) + "," + n(lo) + "," + n(lo + below(3)) + ")";
      }
      case 9: {
        const auto b = between(3, 5);
        return "blocks(" + n(b) + "^i," + n(b) + "^i+" + n(below(b - 1)) + ")";
      }
      default: {
        std::string s = "finite{";
        const auto a = between(1, 50);
        s += n(a) + "," + n(a + between(1, 30)) + ".." + n(a + between(31, 90)) + "}";
        return s;
      }
    }
  }

  std::string set(int depth) {
    if (depth == 0 || below(3) == 0) return leaf();
    switch (below(4)) {
      case 0: return "union(" + set(depth - 1) + "," + set(depth - 1) + ")";
      case 1: return "inter(" + set(depth - 1) + "," + set(depth - 1) + ")";
      case 2: return "comp(" + set(depth - 1) + ")";
      default: return "symdiff(" + set(depth - 1) + "," + set(depth - 1) + ")";
    }
  }

  IndexSet parsed(int depth) { return cli::parse_set(set(depth)); }

  std::string formula() {
    static const std::vector<std::string> pool = {"k", "inv(k)", "1-inv(k)", "pow(-1,k)", "invval(2,k)",
                                                  "3", "2*k+1", "inv(k*k)", "-k", "k/(k+1)"};
    return pool[below(pool.size())];
  }

 private:
  std::mt19937_64 rng_;
};

std::uint64_t brute(const IndexSet& k, std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t j = 1; j <= n; ++j) c += k.contains(j);
  return c;
}

}  // namespace

TEST_CASE("De Morgan laws hold pointwise and in counts") {
  Gen g(11);
  for (int i = 0; i < kCases; ++i) {
    const auto a = g.parsed(2), b = g.parsed(2);
    const auto lhs = complement(unite(a, b)), rhs = intersect(complement(a), complement(b));
    const auto lhs2 = complement(intersect(a, b)), rhs2 = unite(complement(a), complement(b));
    for (std::uint64_t j = 1; j <= 600; ++j) {
      REQUIRE(lhs.contains(j) == rhs.contains(j));
      REQUIRE(lhs2.contains(j) == rhs2.contains(j));
    }
    const auto n = g.between(1, 100000);
    CHECK(lhs.count(n) == rhs.count(n));
    CHECK(lhs2.count(n) == rhs2.count(n));
  }
}

TEST_CASE("inclusion-exclusion up to 1e5") {
  Gen g(12);
  for (int i = 0; i < kCases; ++i) {
    const auto a = g.parsed(2), b = g.parsed(2);
    for (const std::uint64_t n : {g.between(1, 1000), g.between(1000, 100000), std::uint64_t{100000}}) {
      CHECK(unite(a, b).count(n) + intersect(a, b).count(n) == a.count(n) + b.count(n));
      CHECK(symmetric_difference(a, b).count(n) == unite(a, b).count(n) - intersect(a, b).count(n));
    }
  }
}

TEST_CASE("counts agree with membership") {
  Gen g(13);
  for (int i = 0; i < kCases; ++i) {
    const auto a = g.parsed(3);
    const auto n = g.between(1, 4000);
    INFO(a.to_string());
    CHECK(a.count(n) == brute(a, n));
  }
}

TEST_CASE("complement counts") {
  Gen g(14);
  for (int i = 0; i < kCases; ++i) {
    const auto a = g.parsed(3);
    const auto n = g.between(1, 100000);
    CHECK(complement(a).count(n) == n - a.count(n));
  }
}

TEST_CASE("prefix ratios are subadditive") {
  Gen g(15);
  const auto sched = CheckpointSchedule::for_budget(1 << 16);
  for (int i = 0; i < kCases; ++i) {
    const auto a = g.parsed(2), b = g.parsed(2);
    const auto ea = natural_density(a, sched), eb = natural_density(b, sched);
    const auto eu = natural_density(unite(a, b), sched);
    for (std::size_t t = 0; t < eu.ratios.size(); ++t) CHECK(eu.ratios[t] <= ea.ratios[t] + eb.ratios[t] + 1e-12);
    CHECK(eu.limsup <= ea.limsup + eb.limsup + 1e-12);
  }
}

TEST_CASE("exact densities match long prefixes") {
  Gen g(16);
  for (int i = 0; i < kCases; ++i) {
    const auto a = g.parsed(2);
    const auto d = a.exact_density();
    if (!d || !a.periodic()) continue;
    // periodic sets reach their density at every multiple of the period
    const auto p = a.periodic()->period;
    const auto from = a.periodic()->threshold + 1000;
    if (p > 100000 || from > 1000000) continue;
    INFO(a.to_string());
    CHECK(static_cast<double>(a.count(from + p * 7) - a.count(from)) / static_cast<double>(p * 7) ==
          doctest::Approx(d->value));
  }
}

TEST_CASE("perturbation round trip") {
  Gen g(17);
  for (int i = 0; i < kCases; ++i) {
    const auto x = SequenceSpec::of(Formula::parse(g.formula()));
    const auto k = g.parsed(2);
    const auto f = Formula::parse(g.formula());
    const auto y = perturb(x, k, f);
    const auto back = perturb(y.sequence, k, x);
    for (std::uint64_t j = 1; j <= 500; ++j) {
      REQUIRE(y.sequence.eval(j) == (k.contains(j) ? f.eval(j) : x.eval(j)));
      REQUIRE(back.sequence.eval(j) == x.eval(j));
      if (y.sequence.eval(j) != x.eval(j)) REQUIRE(y.disagreement.contains(j));
    }
  }
}

TEST_CASE("disjoint pieces commute") {
  Gen g(18);
  for (int i = 0; i < kCases; ++i) {
    const auto a = g.parsed(2);
    const auto b = intersect(g.parsed(2), complement(a));
    const Piece pa{a, Formula::parse(g.formula())}, pb{b, Formula::parse(g.formula())};
    const auto fallback = Formula::parse(g.formula());
    const SequenceSpec x({pa, pb}, fallback), y({pb, pa}, fallback);
    const auto vx = x.values(2000), vy = y.values(2000);
    CHECK(*vx == *vy);
  }
}

TEST_CASE("ideals are closed under subsets") {
  Gen g(19);
  const auto budget = CheckpointSchedule::for_budget(1 << 16);
  const std::vector<Ideal> ideals = {Ideal::fin(), Ideal::density_zero(), Ideal::summable(),
                                     Ideal::trace(IndexSet::powers(4))};
  for (int i = 0; i < kCases; ++i) {
    const auto a = g.parsed(2), b = g.parsed(2);
    for (const auto& ideal : ideals) {
      if (ideal.is_member(a, budget).value != Membership::InIdeal) continue;
      INFO(ideal.name() << " " << a.to_string() << " " << b.to_string());
      CHECK(ideal.is_member(intersect(a, b), budget).value != Membership::NotInIdeal);
    }
  }
}

TEST_CASE("printed sets parse back to the same set") {
  Gen g(20);
  for (int i = 0; i < kCases; ++i) {
    const auto text = g.set(3);
    const auto a = cli::parse_set(text);
    if (!a.printable()) continue;
    const auto b = cli::parse_set(a.to_string());
    INFO(text << " -> " << a.to_string());
    CHECK(b.to_string() == a.to_string());
    for (std::uint64_t j = 1; j <= 400; ++j) REQUIRE(a.contains(j) == b.contains(j));
    const auto s = simplify(a);
    CHECK(cli::parse_set(s.to_string()).count(5000) == a.count(5000));
  }
}

TEST_CASE("printed formulas parse back to the same formula") {
  Gen g(21);
  for (int i = 0; i < kCases; ++i) {
    const auto f = Formula::parse(g.formula());
    const auto h = Formula::parse(f.to_string());
    CHECK(h.to_string() == f.to_string());
    for (std::uint64_t k = 1; k <= 50; ++k) CHECK(h.eval(k) == f.eval(k));
  }
}
