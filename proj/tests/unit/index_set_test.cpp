#include "doctest.h"

#include "istat/errors.hpp"
#include "istat/index_set.hpp"

using namespace istat;

namespace {

std::uint64_t brute(const IndexSet& k, std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t j = 1; j <= n; ++j) c += k.contains(j);
  return c;
}

IndexSet four_blocks() {
  const auto i = IntExpr::var();
  const auto four_i = IntExpr::pow(IntExpr::constant(4), i);
  return IndexSet::blocks(four_i, IntExpr::constant(2) * four_i - IntExpr::constant(1));
}

}  // namespace

TEST_CASE("membership basics") {
  CHECK(IndexSet::progression(2, 2).contains(10));
  CHECK_FALSE(complement(IndexSet::all()).contains(7));
  CHECK(IndexSet::squares().contains(49));
  CHECK_FALSE(IndexSet::squares().contains(50));
  CHECK(IndexSet::powers(3).contains(1));
  CHECK(IndexSet::powers(3).contains(81));
  CHECK_FALSE(IndexSet::powers(3).contains(82));
  CHECK(IndexSet::residue(5, 0).contains(25));
  CHECK(IndexSet::valuation(2, 1, 1).contains(6));
  CHECK_FALSE(IndexSet::valuation(2, 1, 1).contains(12));
  CHECK(IndexSet::finite({3, 9}).contains(9));
}

TEST_CASE("closed-form counts") {
  CHECK(IndexSet::progression(2, 2).count(10) == 5);
  CHECK(IndexSet::squares().count(100) == 10);
  CHECK(IndexSet::progression(3, 5).count(23) == 5);
  CHECK(IndexSet::range(5, 9).count(100) == 5);
  CHECK(four_blocks().count(31) == brute(four_blocks(), 31));
}

TEST_CASE("counts agree with membership") {
  const std::vector<IndexSet> sets = {
      IndexSet::evens(),
      IndexSet::squares(),
      IndexSet::powers(2),
      four_blocks(),
      IndexSet::valuation(3, 2, kUnboundedLevel),
      complement(IndexSet::squares()),
      symmetric_difference(IndexSet::evens(), IndexSet::residue(3, 1)),
      intersect(IndexSet::odds(), four_blocks()),
  };
  for (const auto& k : sets) {
    CAPTURE(k.to_string());
    for (std::uint64_t n : {1u, 2u, 17u, 1000u, 4097u}) CHECK(k.count(n) == brute(k, n));
  }
}

TEST_CASE("ceiling is enforced") {
  CHECK_THROWS_AS(IndexSet::evens().count(2000, 1000), ResourceLimit);
  CHECK_THROWS_AS((void)four_blocks().bitmap(1 << 20, 1 << 10), ResourceLimit);
}

TEST_CASE("simplify collapses trivial nodes") {
  CHECK(simplify(unite(IndexSet::empty(), IndexSet::evens())).to_string() == "evens");
  CHECK(simplify(intersect(IndexSet::all(), IndexSet::squares())).to_string() == "squares");
  const auto k = four_blocks();
  CHECK(simplify(symmetric_difference(k, k)).kind() == IndexSet::Kind::Empty);
  CHECK(simplify(complement(complement(k))).to_string() == k.to_string());
}

TEST_CASE("structural facts") {
  CHECK(IndexSet::finite({1, 2, 3}).finite() == Tri::True);
  CHECK(IndexSet::evens().finite() == Tri::False);
  CHECK(complement(IndexSet::finite({4})).cofinite() == Tri::True);
  const auto d = IndexSet::valuation(2, 20, kUnboundedLevel).exact_density();
  REQUIRE(d);
  CHECK(d->positive);
  CHECK_FALSE(d->full);
  const auto e = complement(IndexSet::squares()).exact_density();
  REQUIRE(e);
  CHECK(e->full);
  CHECK_FALSE(four_blocks().exact_density().has_value());
}

TEST_CASE("printing") {
  CHECK(IndexSet::progression(3, 5).to_string() == "ap(3,5)");
  CHECK(four_blocks().to_string() == "blocks(4^i,2*4^i-1)");
}
