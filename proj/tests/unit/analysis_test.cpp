#include "doctest.h"

#include <cmath>

#include "istat/analysis.hpp"
#include "istat/errors.hpp"

using namespace istat;

namespace {

AnalysisConfig config(std::uint64_t ceiling = 1 << 20) {
  AnalysisConfig cfg;
  cfg.sched.ceiling = ceiling;
  return cfg;
}

SequenceSpec parity() {
  return SequenceSpec({{IndexSet::evens(), Formula::constant(0)}}, Formula::constant(1), "parity");
}

SequenceSpec valuation() { return SequenceSpec::of(Formula::parse("invval(2,k)"), "valuation"); }

std::vector<double> in_centres(const PointSetEstimate& e) {
  std::vector<double> out;
  for (const auto i : e.in_cells()) out.push_back(e.cells[i].centre);
  return out;
}

bool has_in_near(const PointSetEstimate& e, double v) {
  const auto at = e.grid.locate(v);
  return at && e.cells[*at].label == CellLabel::In;
}

}  // namespace

TEST_CASE("grid cells") {
  const auto g = ValueGrid::span(-0.01, 1.01, 64);
  CHECK(g.width == doctest::Approx(1.02 / 64));
  CHECK(g.locate(0.0) == 0u);
  CHECK(g.locate(1.0) == 63u);
  CHECK_FALSE(g.locate(1.02).has_value());
  CHECK(g.cell(3).contains(g.centre(3)));
}

TEST_CASE("statistical convergence examples") {
  const auto cfg = config();
  const SequenceSpec sq({{IndexSet::squares(), Formula::constant(1)}}, Formula::constant(0));
  CHECK(test_i_statistical_convergence(sq, Ideal::fin(), 0.0, cfg).status == Membership::InIdeal);
  CHECK(test_i_statistical_convergence(parity(), Ideal::fin(), 0.0, 0.5, 0.1, cfg).status == Membership::NotInIdeal);
  for (const auto& ideal : {Ideal::fin(), Ideal::density_zero(), Ideal::summable()}) {
    CHECK(test_i_statistical_convergence(SequenceSpec::constant(3), ideal, 3.0, cfg).status == Membership::InIdeal);
  }
  CHECK(test_statistical_convergence(sq, 0.0, cfg).status == Membership::InIdeal);
  CHECK(test_i_convergence(sq, Ideal::density_zero(), 0.0, cfg).status == Membership::InIdeal);
  CHECK(test_i_convergence(sq, Ideal::fin(), 0.0, cfg).status == Membership::NotInIdeal);
}

TEST_CASE("opaque deviation sets go through the level-set classifier") {
  const auto cfg = config();
  const auto alt = SequenceSpec::of(Formula::parse("(2*mod(k,2)-1)*inv(k)"));
  CHECK(test_i_statistical_convergence(alt, Ideal::fin(), 0.0, 0.05, 0.01, cfg).status == Membership::InIdeal);
  const auto osc = SequenceSpec::of(Formula::parse("2*mod(k,2)-1"));
  CHECK(test_i_statistical_convergence(osc, Ideal::fin(), 1.0, 0.5, 0.1, cfg).status == Membership::NotInIdeal);
}

TEST_CASE("boundedness ladder") {
  const auto cfg = config();
  const SequenceSpec exc({{IndexSet::squares(), Formula::index()}}, Formula::constant(5));
  const auto b = test_i_statistical_boundedness(exc, Ideal::fin(), cfg);
  CHECK(b.kind == Boundedness::Kind::Bounded);
  CHECK(b.bound == 8);
  CHECK(test_i_statistical_boundedness(SequenceSpec::of(Formula::index()), Ideal::fin(), cfg).kind ==
        Boundedness::Kind::Unbounded);
  const auto one = test_i_statistical_boundedness(SequenceSpec::of(Formula::parse("pow(-1,k)")), Ideal::fin(), cfg);
  CHECK(one.kind == Boundedness::Kind::Bounded);
  CHECK(one.bound == 1);
  CHECK_THROWS_AS(default_grid(SequenceSpec::of(Formula::index()), Ideal::fin(), cfg), UnboundedRange);
}

TEST_CASE("parity point sets") {
  const auto cfg = config();
  const auto x = parity();
  const auto grid = default_grid(x, Ideal::fin(), cfg);
  const auto gamma = estimate_gamma(x, Ideal::fin(), grid, cfg);
  const auto lambda = estimate_lambda(x, Ideal::fin(), grid, cfg);
  const auto ord = estimate_ordinary_limit_points(x, grid, cfg);
  for (const auto* e : {&gamma, &lambda, &ord}) {
    CHECK(e->in_cells().size() == 2);
    CHECK(has_in_near(*e, 0.0));
    CHECK(has_in_near(*e, 1.0));
  }
  CHECK(check_inclusion(lambda, gamma, ord).status == Membership::InIdeal);
  const auto d = distance_tail_check(x, Ideal::fin(), gamma, 0.25, cfg);
  CHECK(d.verdict == Thinness::Thin);
}

TEST_CASE("constant and harmonic sequences") {
  const auto cfg = config();
  const auto c = SequenceSpec::constant(3);
  const auto grid = default_grid(c, Ideal::fin(), cfg);
  CHECK(in_centres(estimate_gamma(c, Ideal::fin(), grid, cfg)) == std::vector<double>{3.0});
  CHECK(in_centres(estimate_lambda(c, Ideal::fin(), grid, cfg)) == std::vector<double>{3.0});

  const auto h = SequenceSpec::of(Formula::parse("inv(k)"));
  const auto hg = default_grid(h, Ideal::fin(), cfg);
  const auto ord = estimate_ordinary_limit_points(h, hg, cfg);
  CHECK(has_in_near(ord, 0.0));
  for (const auto i : ord.in_cells()) CHECK(std::fabs(ord.cells[i].centre) < hg.width);
}

TEST_CASE("valuation sequence separates lambda from gamma") {
  auto cfg = config();
  cfg.tol = 0.005;
  const auto x = valuation();
  const auto grid = ValueGrid::span(-0.01, 1.01, 64);
  const auto gamma = estimate_gamma(x, Ideal::fin(), grid, cfg);
  const auto lambda = estimate_lambda(x, Ideal::fin(), grid, cfg);
  const auto ord = estimate_ordinary_limit_points(x, grid, cfg);
  for (int j = 1; j <= 6; ++j) {
    CAPTURE(j);
    CHECK(has_in_near(gamma, 1.0 / j));
    CHECK(has_in_near(lambda, 1.0 / j));
  }
  CHECK(has_in_near(gamma, 0.0));
  CHECK_FALSE(has_in_near(lambda, 0.0));
  CHECK(has_in_near(ord, 0.0));
  CHECK(check_inclusion(lambda, gamma, ord).status == Membership::InIdeal);
  CHECK(check_closedness(gamma).status == Membership::InIdeal);
  CHECK(distance_tail_check(x, Ideal::fin(), gamma, 0.05, cfg).verdict == Thinness::Thin);
}

TEST_CASE("statistical wrappers coincide with fin") {
  const auto cfg = config();
  const auto x = parity();
  const auto grid = default_grid(x, Ideal::fin(), cfg);
  CHECK(compare_labels(estimate_gamma(x, Ideal::fin(), grid, cfg), estimate_statistical_cluster_points(x, grid, cfg))
            .status == Membership::InIdeal);
  CHECK(compare_labels(estimate_lambda(x, Ideal::fin(), grid, cfg), estimate_statistical_limit_points(x, grid, cfg))
            .status == Membership::InIdeal);
}

TEST_CASE("imported prefixes stay inconclusive") {
  const auto cfg = config();
  const auto x = import_csv_prefix("0\n1\n0\n1\n");
  const auto grid = default_grid(x, Ideal::fin(), cfg);
  const auto gamma = estimate_gamma(x, Ideal::fin(), grid, cfg);
  CHECK(gamma.in_cells().empty());
  CHECK(test_i_statistical_boundedness(x, Ideal::fin(), cfg).kind == Boundedness::Kind::Inconclusive);
}
