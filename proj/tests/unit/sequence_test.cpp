#include "doctest.h"

#include "istat/errors.hpp"
#include "istat/sequence.hpp"

using namespace istat;

namespace {

SequenceSpec parity() {
  return SequenceSpec({{IndexSet::evens(), Formula::constant(0)}}, Formula::constant(1), "parity");
}

std::uint64_t brute_preimage(const SequenceSpec& x, const IntervalSet& s, std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t k = 1; k <= n; ++k) c += s.contains(x.eval(k));
  return c;
}

}  // namespace

TEST_CASE("interval sets") {
  const auto out = IntervalSet::outside_ball(0.0, 0.5);
  CHECK(out.contains(0.5));
  CHECK(out.contains(-2.0));
  CHECK_FALSE(out.contains(0.49));
  CHECK(out.complement().parts().size() == 1);
  const IntervalSet merged{Interval::half_open(0, 1), Interval::closed(1, 2)};
  CHECK(merged.parts().size() == 1);
  CHECK(merged.contains(2.0));
}

TEST_CASE("piecewise evaluation") {
  CHECK(parity().eval(10) == 0);
  CHECK(parity().eval(7) == 1);
  CHECK(SequenceSpec::of(Formula::parse("inv(k)")).eval(4) == doctest::Approx(0.25));
  CHECK(SequenceSpec::of(Formula::parse("invval(2,k)")).eval(12) == doctest::Approx(1.0 / 3));
  const auto vals = parity().values(100);
  CHECK((*vals)[9] == 0);
  CHECK((*vals)[8] == 1);
}

TEST_CASE("first match wins") {
  const SequenceSpec x({{IndexSet::squares(), Formula::constant(5)}, {IndexSet::evens(), Formula::constant(2)}},
                       Formula::constant(0));
  CHECK(x.eval(4) == 5);
  CHECK(x.eval(6) == 2);
  CHECK(x.eval(7) == 0);
  const auto g = x.effective_guards();
  REQUIRE(g.size() == 3);
  CHECK_FALSE(g[1].contains(4));
  CHECK(g[2].contains(7));
}

TEST_CASE("symbolic preimages") {
  const auto val = SequenceSpec::of(Formula::parse("invval(2,k)"));
  const auto near_zero = val.preimage(IntervalSet::ball(0.0, 0.05));
  CHECK(near_zero.printable());
  const auto d = near_zero.exact_density();
  REQUIRE(d);
  CHECK(d->positive);

  const SequenceSpec exc({{IndexSet::squares(), Formula::index()}}, Formula::constant(0));
  const auto p = exc.preimage(IntervalSet::ball(0.0, 0.5));
  CHECK(p.printable());
  CHECK(p.count(10000) == brute_preimage(exc, IntervalSet::ball(0.0, 0.5), 10000));

  const auto mono = SequenceSpec::of(Formula::parse("1-inv(k)"));
  const auto tail = mono.preimage(IntervalSet::ball(1.0, 0.01));
  CHECK(tail.to_string() == "ap(101,1)");

  const auto alt = SequenceSpec::of(Formula::parse("pow(-1,k)"));
  CHECK(alt.preimage(IntervalSet::ball(1.0, 0.5)).to_string() == "evens");
}

TEST_CASE("preimage agrees with evaluation") {
  const std::vector<SequenceSpec> xs = {
      parity(),
      SequenceSpec::of(Formula::parse("invval(2,k)")),
      SequenceSpec::of(Formula::parse("pow(-1,k)*(1+inv(k))")),
      SequenceSpec({{IndexSet::squares(), Formula::parse("-k")}}, Formula::parse("1-inv(k)")),
  };
  const std::vector<IntervalSet> sets = {IntervalSet::ball(0.0, 0.3), IntervalSet::ball(1.0, 0.1),
                                         IntervalSet::outside_ball(0.5, 0.25),
                                         IntervalSet{Interval::closed(-1.2, -0.9)}};
  for (const auto& x : xs) {
    for (const auto& s : sets) {
      CAPTURE(x.to_string());
      CAPTURE(s.to_string());
      CHECK(x.preimage(s).count(5000) == brute_preimage(x, s, 5000));
    }
  }
}

TEST_CASE("perturb and restore") {
  const auto x = parity();
  const auto y = perturb(x, IndexSet::squares(), Formula::index());
  CHECK(y.sequence.eval(9) == 9);
  CHECK(y.sequence.eval(8) == 0);
  CHECK(y.disagreement.to_string() == "squares");
  const auto back = perturb(y.sequence, IndexSet::squares(), x);
  for (std::uint64_t k = 1; k <= 2000; ++k) CHECK(back.sequence.eval(k) == x.eval(k));
  const auto same = perturb(x, IndexSet::empty(), Formula::constant(42));
  for (std::uint64_t k = 1; k <= 100; ++k) CHECK(same.sequence.eval(k) == x.eval(k));
}

TEST_CASE("subsequence views") {
  CHECK_THROWS_AS(restrict(parity(), IndexSet::finite({1, 2})), FiniteSelector);
  const auto view = restrict(parity(), IndexSet::evens());
  CHECK(view.infinite() == Tri::True);
  for (const auto& [k, v] : view.values(200)) CHECK(v == 0);
  const auto val = restrict(SequenceSpec::of(Formula::parse("invval(2,k)")), IndexSet::progression(2, 4));
  for (const auto& [k, v] : val.values(1000)) CHECK(v == doctest::Approx(0.5));
}

TEST_CASE("csv prefix import") {
  const auto x = import_csv_prefix("# header\n1, 2.5\n-3\n");
  REQUIRE(x.prefix_length());
  CHECK(*x.prefix_length() == 3);
  CHECK(x.eval(2) == 2.5);
  CHECK_THROWS_AS(x.eval(4), ResourceLimit);
  CHECK_THROWS_AS(import_csv_prefix("1,abc"), ParseError);
}
