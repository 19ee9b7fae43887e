#include "doctest.h"

#include "istat/density.hpp"
#include "istat/errors.hpp"

using namespace istat;

namespace {

IndexSet four_blocks() {
  const auto i = IntExpr::var();
  const auto four_i = IntExpr::pow(IntExpr::constant(4), i);
  return IndexSet::blocks(four_i, IntExpr::constant(2) * four_i - IntExpr::constant(1));
}

CheckpointSchedule small() {
  CheckpointSchedule s;
  s.ceiling = 1 << 20;
  return s;
}

constexpr DensityOptions kNumeric{false, false};

}  // namespace

TEST_CASE("natural density verdicts") {
  const auto s = small();
  const auto evens = natural_density(IndexSet::evens(), s);
  CHECK(evens.verdict == DensityVerdict::Exists);
  CHECK(evens.value == doctest::Approx(0.5).epsilon(0.001));
  CHECK(natural_density(IndexSet::squares(), s).verdict == DensityVerdict::Zero);
  const auto blocks = natural_density(four_blocks(), s);
  CHECK(blocks.verdict == DensityVerdict::DoesNotExist);
  CHECK(blocks.liminf == doctest::Approx(1.0 / 3).epsilon(0.02));
  CHECK(blocks.limsup == doctest::Approx(2.0 / 3).epsilon(0.02));
  CHECK(blocks.liminf <= blocks.limsup);
}

TEST_CASE("numeric path agrees with the exact one") {
  const auto s = small();
  for (const auto& k : {IndexSet::evens(), IndexSet::residue(3, 1), IndexSet::valuation(2, 1, 1),
                        complement(IndexSet::squares())}) {
    const auto a = natural_density(k, s);
    const auto b = natural_density(k, s, kDefaultTolerance, kNumeric);
    CAPTURE(k.to_string());
    CHECK(a.verdict == b.verdict);
    CHECK(a.value == doctest::Approx(b.value).epsilon(0.01));
  }
}

TEST_CASE("ideal membership examples") {
  const auto s = small();
  CHECK(Ideal::fin().is_member(IndexSet::finite({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), s).value == Membership::InIdeal);
  CHECK(Ideal::fin().is_member(IndexSet::evens(), s).value == Membership::NotInIdeal);
  CHECK(Ideal::density_zero().is_member(IndexSet::squares(), s).value == Membership::InIdeal);
  CHECK(Ideal::summable().is_member(IndexSet::squares(), s).value == Membership::InIdeal);
  CHECK(Ideal::summable().is_member(IndexSet::evens(), s).value == Membership::NotInIdeal);
  const auto g = Ideal::trace(IndexSet::powers(4));
  CHECK(g.is_member(IndexSet::evens(), s).value == Membership::NotInIdeal);
  CHECK(g.is_member(IndexSet::odds(), s).value == Membership::InIdeal);
  CHECK_THROWS_AS(Ideal::trace(IndexSet::finite({4})), ConstructionFailed);
}

TEST_CASE("prefix heuristics on opaque sets") {
  const auto s = small();
  const auto opaque = [](IndexSet k, std::string name) {
    CustomPredicate p;
    p.name = std::move(name);
    p.member = [k](std::uint64_t j) { return k.contains(j); };
    return IndexSet::custom(std::move(p));
  };
  const auto sq = opaque(IndexSet::squares(), "sq");
  const auto head = opaque(IndexSet::range(1, 500), "head");
  const auto ev = opaque(IndexSet::evens(), "ev");
  CHECK(Ideal::fin().is_member(head, s).value == Membership::InIdeal);
  CHECK(Ideal::fin().is_member(sq, s).value == Membership::NotInIdeal);
  CHECK(Ideal::density_zero().is_member(sq, s).value == Membership::InIdeal);
  CHECK(Ideal::density_zero().is_member(ev, s).value == Membership::NotInIdeal);
  CHECK(Ideal::summable().is_member(sq, s).value == Membership::InIdeal);
  CHECK(Ideal::summable().is_member(ev, s).value == Membership::NotInIdeal);
}

TEST_CASE("ideal limits") {
  const auto s = small();
  const auto inv = ideal_limit([](std::uint64_t n) { return 1.0 / static_cast<double>(n); }, Ideal::fin(), s, 0.02);
  REQUIRE(inv.value);
  CHECK(*inv.value == doctest::Approx(0.0).epsilon(0.001));
  const auto half = ideal_limit([](std::uint64_t n) { return static_cast<double>(n / 2) / static_cast<double>(n); },
                                Ideal::summable(), s, 0.02);
  REQUIRE(half.value);
  CHECK(*half.value == doctest::Approx(0.5).epsilon(0.001));
  const auto alt = ideal_limit([](std::uint64_t n) { return static_cast<double>(n % 2); }, Ideal::fin(), s, 0.02);
  CHECK(alt.status == Membership::NotInIdeal);
}

TEST_CASE("I-density along a trace ideal") {
  const auto s = small();
  const auto g = Ideal::trace(IndexSet::powers(4));
  const auto est = i_density(four_blocks(), g, s);
  CHECK(est.verdict == DensityVerdict::Exists);
  CHECK(est.value == doctest::Approx(1.0 / 3).epsilon(0.01));
  CHECK(i_density(four_blocks(), Ideal::fin(), s).verdict == DensityVerdict::DoesNotExist);
  CHECK(i_density(IndexSet::evens(), Ideal::summable(), s, 0.02, kNumeric).value == doctest::Approx(0.5).epsilon(0.01));
  CHECK(i_density(IndexSet::squares(), Ideal::fin(), s, 0.02, kNumeric).verdict == DensityVerdict::Zero);
}

TEST_CASE("thinness") {
  const auto s = small();
  CHECK(classify_thin(IndexSet::squares(), Ideal::fin(), s) == Thinness::Thin);
  CHECK(classify_thin(IndexSet::evens(), Ideal::fin(), s) == Thinness::NonThin);
  CHECK(classify_thin(four_blocks(), Ideal::fin(), s) == Thinness::NonThin);
  CHECK(classify_thin(IndexSet::valuation(2, 12, kUnboundedLevel), Ideal::fin(), s) == Thinness::NonThin);
}

TEST_CASE("axioms") {
  const auto s = small();
  CHECK(check_axioms(Ideal::fin(), {IndexSet::finite({1, 2}), IndexSet::finite({3}), IndexSet::evens()}, s).pass);
  CHECK(check_axioms(Ideal::density_zero(), {IndexSet::squares(), IndexSet::powers(2), IndexSet::evens()}, s).pass);
  const auto rep = check_axioms(Ideal::trace(IndexSet::powers(4)),
                                {IndexSet::evens(), IndexSet::finite({4, 16}), IndexSet::powers(4)}, s);
  CHECK(rep.pass);
  CHECK(rep.verdicts[2].second == Membership::NotInIdeal);
}
