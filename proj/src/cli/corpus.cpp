#include "istat/cli/corpus.hpp"

#include <random>

#include "istat/cli/parse.hpp"

namespace istat::cli {

namespace {

SequenceSpec seq(const std::string& name, std::vector<std::pair<std::string, std::string>> pieces,
                 const std::string& fallback) {
  std::vector<Piece> ps;
  for (const auto& [g, f] : pieces) ps.push_back({parse_set(g), Formula::parse(f)});
  return SequenceSpec(std::move(ps), Formula::parse(fallback), name);
}

}  // namespace

const std::vector<CorpusSequence>& sequence_corpus() {
  static const std::vector<CorpusSequence> corpus = [] {
    std::vector<CorpusSequence> c;
    c.push_back({"parity", seq("parity", {{"evens", "0"}}, "1"), true, "0 on evens, 1 on odds"});
    c.push_back({"valuation", seq("valuation", {}, "invval(2,k)"), true, "1/(v_2(k)+1)"});
    c.push_back({"square-excursion", seq("square-excursion", {{"squares", "k"}}, "0"), true,
                 "0 off squares, k on squares"});
    c.push_back({"excursion-100", seq("excursion-100", {{"squares", "100"}}, "5"), true,
                 "5 off squares, 100 on squares"});
    c.push_back({"monotone-off-thin-set", seq("monotone-off-thin-set", {{"squares", "-k"}}, "1-inv(k)"), true,
                 "1 - 1/k off squares, -k on squares"});
    c.push_back({"blocks-indicator", seq("blocks-indicator", {{"blocks(4^i,2*4^i-1)", "1"}}, "0"), true,
                 "indicator of the blocks [4^i, 2*4^i - 1]"});
    c.push_back({"constant", seq("constant", {}, "3"), true, "constant 3"});
    c.push_back({"harmonic", seq("harmonic", {}, "inv(k)"), true, "1/k"});
    c.push_back({"square-bounded-excursion", seq("square-bounded-excursion", {{"squares", "7"}}, "0"), true,
                 "0 off squares, 7 on squares"});
    c.push_back({"alternating", seq("alternating", {}, "pow(-1,k)"), true, "(-1)^k"});
    c.push_back({"spiky-monotone", seq("spiky-monotone", {{"blocks((i+1)^3,(i+1)^3+1)", "k"}}, "1-inv(k)"), true,
                 "1 - 1/k with spikes x_k = k on the pairs {m^3, m^3 + 1}"});
    c.push_back({"unbounded", seq("unbounded", {}, "k"), false, "x_k = k"});
    return c;
  }();
  return corpus;
}

std::optional<CorpusSequence> find_sequence(const std::string& name) {
  for (const auto& c : sequence_corpus()) {
    if (c.name == name) return c;
  }
  return std::nullopt;
}

const std::vector<CorpusSet>& density_corpus() {
  static const std::vector<CorpusSet> corpus = [] {
    std::vector<CorpusSet> c;
    const auto add = [&](const std::string& text, double d) { c.push_back({text, parse_set(text), d}); };
    add("evens", 0.5);
    add("odds", 0.5);
    add("squares", 0.0);
    add("powers(2)", 0.0);
    add("ap(1,3)", 1.0 / 3);
    add("residue(5,2)", 0.2);
    add("val(2,1)", 0.25);
    add("comp(squares)", 1.0);
    add("finite{1..100}", 0.0);
    add("inter(evens,ap(1,3))", 1.0 / 6);
    return c;
  }();
  return corpus;
}

std::vector<IndexSet> thin_perturbations(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<IndexSet> out;
  for (std::size_t i = 0; i < count; ++i) {
    // raw engine output only; distributions are not portable across libraries
    const std::uint64_t r = rng();
    switch (i % 3) {
      case 0: out.push_back(IndexSet::powers(2 + r % 5)); break;
      case 1: {
        const auto a = 1 + r % 7;
        out.push_back(intersect(IndexSet::squares(), IndexSet::progression(a, 1 + (r >> 8) % 3)));
        break;
      }
      default: {
        std::vector<std::uint64_t> elems;
        for (int j = 0; j < 8; ++j) elems.push_back(1 + rng() % 4096);
        out.push_back(unite(IndexSet::finite(std::move(elems)), IndexSet::powers(3 + r % 3)));
        break;
      }
    }
  }
  return out;
}

}  // namespace istat::cli
