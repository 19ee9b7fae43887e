#include "doctest.h"

#include <cmath>

#include "istat/constructions.hpp"
#include "istat/errors.hpp"

using namespace istat;

namespace {

AnalysisConfig config() {
  AnalysisConfig cfg;
  cfg.sched.ceiling = 1 << 20;
  return cfg;
}

SequenceSpec square_excursion() {
  return SequenceSpec({{IndexSet::squares(), Formula::index()}}, Formula::constant(0), "square-excursion");
}

SequenceSpec parity() {
  return SequenceSpec({{IndexSet::evens(), Formula::constant(0)}}, Formula::constant(1), "parity");
}

SequenceSpec off_thin_set() {
  return SequenceSpec({{IndexSet::squares(), Formula::parse("-k")}}, Formula::parse("1-inv(k)"), "monotone-off-thin");
}

}  // namespace

TEST_CASE("apio witness") {
  const auto cfg = config();
  const auto w = apio_witness({IndexSet::squares(), IndexSet::powers(2)}, Ideal::fin(), cfg);
  CHECK(w.thin_union);
  CHECK(w.finite_differences);
  REQUIRE(w.splice_points.size() == 2);
  CHECK(w.splice_points[0] < w.splice_points[1]);
  CHECK(w.head_bounds[0] == isqrt(w.splice_points[0]));
  // count(B, n) <= sqrt(n) + log2(n) + 1
  for (const std::uint64_t n : {4096u, 65536u, 1u << 20}) {
    CHECK(static_cast<double>(w.union_set.count(n)) <= std::sqrt(n) + std::log2(n) + 1);
  }

  const auto e = apio_witness({IndexSet::empty()}, Ideal::fin(), cfg);
  CHECK(e.union_set.kind() == IndexSet::Kind::Empty);

  const auto s = apio_witness({IndexSet::squares()}, Ideal::fin(), cfg);
  CHECK(s.union_set.count(1 << 20) + s.head_bounds[0] == IndexSet::squares().count(1 << 20));

  CHECK_THROWS_AS(apio_witness({IndexSet::evens()}, Ideal::fin(), cfg), PreconditionFailed);
}

TEST_CASE("decomposition") {
  const auto cfg = config();
  const auto d = decompose(square_excursion(), Ideal::fin(), 0.0, cfg);
  CHECK(d.round_trip);
  CHECK(d.complement.value == Thinness::Thin);
  CHECK(max_deviation_along(square_excursion(), d.set, 0.0, 10000, 1 << 20, 1 << 20) < cfg.tol);
  CHECK(d.set.contains(5));
  CHECK_FALSE(d.set.contains(1 << 18));

  const auto c = decompose(SequenceSpec::constant(2), Ideal::fin(), 2.0, cfg);
  CHECK(c.set.kind() == IndexSet::Kind::All);

  CHECK_THROWS_AS(decompose(parity(), Ideal::fin(), 0.0, cfg), PreconditionFailed);
}

TEST_CASE("companion sequence") {
  const auto cfg = config();
  const SequenceSpec exc({{IndexSet::squares(), Formula::constant(100)}}, Formula::constant(5));
  const auto grid = default_grid(exc, Ideal::fin(), cfg);
  const auto gamma = estimate_gamma(exc, Ideal::fin(), grid, cfg);
  const auto c = companion_sequence(exc, Ideal::fin(), gamma, cfg);
  CHECK(c.matches);
  CHECK(c.disagreement_verdict.value == Thinness::Thin);
  CHECK(c.sequence.eval(16) == doctest::Approx(5.0).epsilon(0.05));
  CHECK(c.sequence.eval(17) == 5.0);

  const auto x = parity();
  const auto pg = estimate_gamma(x, Ideal::fin(), default_grid(x, Ideal::fin(), cfg), cfg);
  const auto p = companion_sequence(x, Ideal::fin(), pg, cfg);
  CHECK(p.disagreement.kind() == IndexSet::Kind::Empty);
  CHECK(p.sequence.pieces().size() == x.pieces().size());
  CHECK(p.matches);
}

TEST_CASE("monotone limits") {
  const auto cfg = config();
  const auto a = monotone_i_stat_limit(SequenceSpec::of(Formula::parse("1-inv(k)")), Ideal::fin(), cfg);
  REQUIRE(a.limit);
  CHECK(*a.limit == doctest::Approx(1.0).epsilon(0.001));
  CHECK(a.inclusion.literal);

  const auto b = monotone_i_stat_limit(off_thin_set(), Ideal::fin(), cfg);
  REQUIRE(b.limit);
  CHECK(*b.limit == doctest::Approx(1.0).epsilon(0.001));
  CHECK(b.stabilized);
  CHECK_FALSE(b.inclusion.literal);
  CHECK(b.inclusion.violation_verdict == Thinness::Thin);

  MonotoneOptions down;
  down.direction = Monotone::Decreasing;
  const auto c = monotone_i_stat_limit(negate(off_thin_set()), Ideal::fin(), cfg, down);
  REQUIRE(c.limit);
  CHECK(*c.limit == doctest::Approx(-1.0).epsilon(0.001));

  CHECK_THROWS_AS(monotone_i_stat_limit(SequenceSpec::of(Formula::index()), Ideal::fin(), cfg), PreconditionFailed);
  CHECK_THROWS_AS(monotone_i_stat_limit(parity(), Ideal::fin(), cfg), PreconditionFailed);
}

TEST_CASE("monotone limit after shrinking M") {
  const auto cfg = config();
  const auto i = IntExpr::var() + IntExpr::constant(1);
  const IndexSet spikes = IndexSet::blocks(i * i * i, i * i * i + IntExpr::constant(1));
  const SequenceSpec x({{spikes, Formula::index()}}, Formula::parse("1-inv(k)"), "spiky");
  const auto plain = monotone_i_stat_limit(x, Ideal::fin(), cfg);
  CHECK_FALSE(plain.stabilized);
  CHECK(plain.status == Membership::Inconclusive);
  MonotoneOptions opts;
  opts.shrink = true;
  const auto s = monotone_i_stat_limit(x, Ideal::fin(), cfg, opts);
  REQUIRE(s.limit);
  CHECK(*s.limit == doctest::Approx(1.0).epsilon(0.001));
  REQUIRE(s.shrink_verdict);
  CHECK(s.shrink_verdict->value == Thinness::Thin);
}

TEST_CASE("heine-borel extraction") {
  const auto cfg = config();
  const auto x = parity();
  const auto pg = estimate_gamma(x, Ideal::fin(), default_grid(x, Ideal::fin(), cfg), cfg);
  const auto p = heine_borel_extract(x, Ideal::fin(), pg, cfg);
  CHECK(p.set.kind() == IndexSet::Kind::Empty);
  CHECK(p.compact);

  const SequenceSpec exc({{IndexSet::squares(), Formula::constant(7)}}, Formula::constant(0));
  const auto eg = estimate_gamma(exc, Ideal::fin(), default_grid(exc, Ideal::fin(), cfg), cfg);
  const auto e = heine_borel_extract(exc, Ideal::fin(), eg, cfg);
  CHECK(e.verdict.value == Thinness::Thin);
  CHECK(e.set.count(1 << 20) == IndexSet::squares().count(1 << 20));

  auto vcfg = cfg;
  vcfg.tol = 0.005;
  const auto v = SequenceSpec::of(Formula::parse("invval(2,k)"));
  const auto vg = estimate_gamma(v, Ideal::fin(), ValueGrid::span(-0.01, 1.01, 64), vcfg);
  const auto ve = heine_borel_extract(v, Ideal::fin(), vg, vcfg);
  CHECK(ve.set.count(1 << 20) == 0);
  CHECK(ve.compact);
}
