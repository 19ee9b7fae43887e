#include "doctest.h"

#include "istat/cli/commands.hpp"
#include "istat/cli/corpus.hpp"
#include "istat/cli/parse.hpp"
#include "istat/cli/seqfile.hpp"
#include "istat/errors.hpp"

using namespace istat;
using namespace istat::cli;

namespace {

std::size_t error_position(const std::string& text) {
  try {
    parse_set(text);
  } catch (const ParseError& e) {
    return e.position();
  }
  FAIL("no ParseError for " << text);
  return 0;
}

RunOptions quick() {
  RunOptions o;
  o.nmax = std::uint64_t{1} << 18;
  return o;
}

}  // namespace

TEST_CASE("set grammar") {
  CHECK(parse_set("evens").count(100) == 50);
  CHECK(parse_set(" union( squares , powers(2) ) ").contains(32));
  CHECK(parse_set("inter(ap(1,3), evens, comp(squares))").contains(10));
  CHECK_FALSE(parse_set("inter(ap(1,3), evens, comp(squares))").contains(4));
  CHECK(parse_set("finite{1,5,10..20}").count(100) == 13);
  CHECK(parse_set("val(2,1,inf)").contains(1024));
  CHECK_FALSE(parse_set("val(2,1)").contains(8));
  CHECK(parse_set("residue(5,2)").contains(12));
  CHECK(parse_set("symdiff(evens, ap(1,3))").contains(7));
  const auto b = parse_set("blocks(4^i, 2*4^i-1)");
  CHECK(b.contains(4));
  CHECK(b.contains(7));
  CHECK_FALSE(b.contains(8));
  CHECK(b.contains(16));
  CHECK(parse_set("blocks((i+1)^3, (i+1)^3+1)").contains(28));
}

TEST_CASE("set parse errors carry offsets") {
  CHECK(error_position("ap(1,") == 5);
  CHECK(error_position("evens)") == 5);
  CHECK(error_position("bogus") == 0);
  CHECK(error_position("union(evens, nope)") == 13);
  CHECK_THROWS_AS(parse_set("ap(0,1)"), ParseError);
  CHECK_THROWS_AS(parse_set("comp(evens, odds)"), ParseError);
}

TEST_CASE("integer terms") {
  const auto e = parse_int_expr("2*4^i-1");
  CHECK(e.eval(0) == 1);
  CHECK(e.eval(2) == 31);
  CHECK(parse_int_expr("2^3^2").eval(0) == 512);
  CHECK(parse_int_expr("-(i-3)").eval(1) == 2);
}

TEST_CASE("ideal specs") {
  CHECK(parse_ideal("fin").name() == "fin");
  CHECK(parse_ideal("density0").kind() == IdealKind::DensityZero);
  CHECK(parse_ideal("summable").kind() == IdealKind::Summable);
  CHECK(parse_ideal("trace(powers(4))").name() == "trace(powers(4))");
  CHECK_THROWS_AS(parse_ideal("trace(finite{1,2})"), std::exception);
  CHECK_THROWS_AS(parse_ideal("maximal"), ParseError);
}

TEST_CASE("sequence documents round-trip") {
  for (const auto& c : sequence_corpus()) {
    const auto doc = sequence_document(c.x);
    const auto back = parse_sequence_document(doc);
    CHECK(back.name() == c.x.name());
    CHECK(back.to_string() == c.x.to_string());
    CHECK(sequence_document(back) == doc);
    for (std::uint64_t k = 1; k <= 300; ++k) REQUIRE(back.eval(k) == c.x.eval(k));
  }
}

TEST_CASE("sequence document errors name the field") {
  const auto message = [](const std::string& text) -> std::string {
    try {
      parse_sequence_document(text);
    } catch (const ParseError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message(R"({"pieces": [], "default": "0"})").find("format_version") != std::string::npos);
  CHECK(message(R"({"format_version": 2, "default": "0"})").find("unsupported") != std::string::npos);
  CHECK(message(R"({"format_version": 1, "pieces": [{"guard": "evens"}], "default": "0"})")
            .find("pieces[0]") != std::string::npos);
  const auto bad_guard = message(R"({"format_version": 1, "pieces": [{"guard": "ap(1,", "formula": "k"}],
                                    "default": "0"})");
  CHECK(bad_guard.find("pieces[0].guard") != std::string::npos);
  CHECK(bad_guard.find("at position 5") != std::string::npos);
  CHECK(message(R"({"format_version": 1, "default": "k+"})").find("default") != std::string::npos);
  CHECK_FALSE(message("{").empty());
}

TEST_CASE("csv prefixes") {
  const auto x = import_csv_prefix("# values\n1\n0.5, 0.25\n");
  REQUIRE(x.prefix_length() == 3u);
  CHECK(x.eval(3) == 0.25);
  CHECK_THROWS_AS(x.eval(4), ResourceLimit);
}

TEST_CASE("exit codes") {
  const auto r = [](CheckStatus s) { return CheckResult{"n", "s", "i", s, {}, Json::object()}; };
  CHECK(exit_code({r(CheckStatus::Pass), r(CheckStatus::Inconclusive)}) == 0);
  CHECK(exit_code({r(CheckStatus::Pass), r(CheckStatus::Fail)}) == 1);
  CHECK(exit_code({r(CheckStatus::Inconclusive)}) == 2);
  CHECK(exit_code({}) == 2);
  CHECK(input_error("density", "bad").exit_code == 3);
}

TEST_CASE("flag resolution") {
  RunOptions o;
  o.schedule = "512,1.5";
  o.grid = "-1,2,30";
  o.tol = 0.01;
  o.nmax = 1 << 20;
  const auto s = resolve(o);
  CHECK(s.cfg.sched.start == 512);
  CHECK(s.cfg.sched.ratio == 1.5);
  CHECK(s.cfg.sched.ceiling == 1u << 20);
  REQUIRE(s.grid);
  CHECK(s.grid->cells == 30);
  CHECK(s.grid->width == doctest::Approx(0.1));
  o.grid = "1,2";
  CHECK_THROWS_AS(resolve(o), ParseError);
  o.grid.reset();
  o.schedule = "x,2";
  CHECK_THROWS_AS(resolve(o), ParseError);
}

TEST_CASE("density command") {
  auto o = quick();
  const auto ev = cmd_density("evens", o);
  CHECK(ev.exit_code == 0);
  CHECK(ev.doc["sections"]["i_density"]["verdict"] == "Exists");
  CHECK(ev.doc["format_version"] == kFormatVersion);
  CHECK(ev.doc["config"]["schedule"]["ceiling"] == 1u << 18);
  CHECK(ev.tables.size() == 2);

  o.ideal = "trace(powers(4))";
  const auto b = cmd_density("blocks(4^i,2*4^i-1)", o);
  CHECK(b.doc["sections"]["natural_density"]["verdict"] == "DoesNotExist");
  CHECK(b.doc["sections"]["i_density"]["verdict"] == "Exists");
  CHECK(b.doc["sections"]["i_density"]["value"].get<double>() == doctest::Approx(1.0 / 3).epsilon(0.01));

  o.ideal = "summable";
  CHECK(cmd_density("squares", o).doc["sections"]["i_density"]["verdict"] == "Zero");
}

TEST_CASE("reports are deterministic") {
  const auto o = quick();
  const auto a = cmd_analyze("parity", o).render("json");
  const auto b = cmd_analyze("parity", o).render("json");
  CHECK(a == b);
  CHECK(cmd_analyze("parity", o).render("text").find("summary.exit_code: 0") != std::string::npos);
}

TEST_CASE("analyze on corpus sequences") {
  const auto o = quick();
  const auto p = cmd_analyze("parity", o);
  CHECK(p.exit_code == 0);
  CHECK(p.doc["sections"]["limit_points"]["Gamma"]["in_region"] == p.doc["sections"]["limit_points"]["Lambda"]["in_region"]);
  const auto c = cmd_analyze("constant", o);
  CHECK(c.doc["sections"]["convergence"]["i_statistical"]["status"] == "InIdeal");
  const auto u = cmd_analyze("unbounded", o);
  CHECK(u.exit_code == 2);
  CHECK(u.doc["sections"]["limit_points"].contains("guidance"));
}

TEST_CASE("check with fault injection fails") {
  const auto o = quick();
  CHECK(cmd_check("parity", o).exit_code == 0);
  const auto bad = cmd_check("parity", o, true);
  CHECK(bad.exit_code == 1);
  bool seen = false;
  for (const auto& c : bad.doc["checks"]) {
    if (c["name"] == "inclusion-chain") seen = c["status"] == "fail";
  }
  CHECK(seen);
}

TEST_CASE("check on a perturbed sequence") {
  const auto o = quick();
  const auto x = *find_sequence("parity");
  const auto y = perturb(x.x, IndexSet::powers(2), Formula::constant(7)).sequence.renamed("parity-perturbed");
  const auto results = sequence_checks(y, Ideal::fin(), SuiteOptions{resolve(o).cfg, 1, false});
  bool invariance = false;
  for (const auto& r : results) {
    if (r.name == "perturbation-invariance") invariance = r.status == CheckStatus::Pass;
  }
  CHECK(invariance);
  CHECK(exit_code(results) == 0);
}
