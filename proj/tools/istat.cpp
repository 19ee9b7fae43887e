#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "istat/cli/commands.hpp"
#include "istat/errors.hpp"

namespace cli = istat::cli;

namespace {

struct Output {
  std::string out;
  std::string tables;
};

void add_common(CLI::App* app, cli::RunOptions& o, Output& out) {
  app->add_option("--ideal", o.ideal, "fin | density0 | summable | trace(<set>)");
  app->add_option("--nmax", o.nmax, "prefix ceiling N_max");
  app->add_option("--tol", o.tol, "verdict tolerance");
  app->add_option("--grid", o.grid, "cell count N, or lo,hi,N");
  app->add_option("--schedule", o.schedule, "checkpoint start,ratio");
  app->add_option("--format", o.format, "json | text")->check(CLI::IsMember({"json", "text"}));
  app->add_option("--seed", o.seed, "seed for generated perturbations");
  app->add_option("--out", out.out, "write the report here instead of stdout");
  app->add_option("--tables", out.tables, "directory for TSV plot tables");
}

int emit(const cli::Report& r, const cli::RunOptions& o, const Output& out) {
  const auto text = r.render(o.format);
  if (out.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out.out, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write " << out.out << '\n';
      return 3;
    }
    f << text;
  }
  if (!out.tables.empty()) {
    std::filesystem::create_directories(out.tables);
    for (const auto& t : r.tables) {
      std::ofstream f(std::filesystem::path(out.tables) / (t.name + ".tsv"), std::ios::binary);
      f << t.tsv();
    }
  }
  return r.exit_code;
}

// Library failures become reports with the matching exit code.
cli::Report guarded(const std::string& command, const std::function<cli::Report()>& body) {
  auto failure = [&](const std::string& status, const std::string& what, int code) {
    cli::Report r = cli::input_error(command, what);
    r.doc["summary"] = cli::Json{{"status", status}, {"exit_code", code}};
    r.exit_code = code;
    return r;
  };
  try {
    return body();
  } catch (const istat::ParseError& e) {
    return cli::input_error(command, e.what());
  } catch (const std::invalid_argument& e) {
    return cli::input_error(command, e.what());
  } catch (const istat::PreconditionFailed& e) {
    return failure("precondition-failed", e.what(), 2);
  } catch (const istat::UnboundedRange& e) {
    return failure("unbounded-range", e.what(), 2);
  } catch (const istat::ResourceLimit& e) {
    return failure("resource-limit", e.what(), 2);
  } catch (const istat::ConstructionFailed& e) {
    return failure("construction-failed", e.what(), 1);
  } catch (const std::runtime_error& e) {
    return cli::input_error(command, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"I-statistical convergence toolkit"};
  app.require_subcommand(1);
  cli::RunOptions o;
  Output out;
  std::function<cli::Report()> run;
  std::string command;

  std::string set_text, seq, target;
  std::vector<std::string> sets;
  std::optional<double> limit;
  std::size_t depth = istat::kDefaultLadderDepth;
  bool decreasing = false, shrink = false, inject = false;
  std::optional<std::string> m;

  auto* density = app.add_subcommand("density", "natural and I-density of a set expression");
  density->add_option("set", set_text, "set expression")->required();
  add_common(density, o, out);
  density->callback([&] { command = "density"; run = [&] { return cli::cmd_density(set_text, o); }; });

  auto* analyze = app.add_subcommand("analyze", "boundedness, convergence and limit-point sets of a sequence");
  analyze->add_option("sequence", seq, "corpus name or sequence file")->required();
  add_common(analyze, o, out);
  analyze->callback([&] { command = "analyze"; run = [&] { return cli::cmd_analyze(seq, o); }; });

  auto* check = app.add_subcommand("check", "property checks on a sequence or the built-in suite");
  check->add_option("target", target, "paper-core, corpus name or sequence file")->required();
  check->add_flag("--inject-fault", inject)->group("");
  add_common(check, o, out);
  check->callback([&] { command = "check"; run = [&] { return cli::cmd_check(target, o, inject); }; });

  auto* decompose = app.add_subcommand("decompose", "set B of full I-density along which x converges");
  decompose->add_option("sequence", seq, "corpus name or sequence file")->required();
  decompose->add_option("--limit", limit, "the I-statistical limit (default: tail candidate)");
  decompose->add_option("--depth", depth, "number of eps levels 1/j")->check(CLI::Range(1, 64));
  add_common(decompose, o, out);
  decompose->callback([&] {
    command = "decompose";
    run = [&] { return cli::cmd_decompose(seq, limit, o, depth); };
  });

  auto* apio = app.add_subcommand("apio", "splice a family of thin sets into a thin union");
  apio->add_option("sets", sets, "set expressions")->required();
  add_common(apio, o, out);
  apio->callback([&] { command = "apio"; run = [&] { return cli::cmd_apio(sets, o); }; });

  auto* monotone = app.add_subcommand("monotone", "limit of a sequence monotone on a set of full I-density");
  monotone->add_option("sequence", seq, "corpus name or sequence file")->required();
  monotone->add_flag("--decreasing", decreasing);
  monotone->add_flag("--shrink", shrink, "restrict M to the bounded part first");
  monotone->add_option("--monotone-set", m, "set expression for M");
  add_common(monotone, o, out);
  monotone->callback([&] {
    command = "monotone";
    run = [&] { return cli::cmd_monotone(seq, decreasing, shrink, m, o); };
  });

  auto* extract = app.add_subcommand("extract", "thin set off which a bounded sequence stays near Gamma");
  extract->add_option("sequence", seq, "corpus name or sequence file")->required();
  add_common(extract, o, out);
  extract->callback([&] { command = "extract"; run = [&] { return cli::cmd_extract(seq, o); }; });

  auto* corpus = app.add_subcommand("corpus", "list the built-in sequences and sets");
  add_common(corpus, o, out);
  corpus->callback([&] { command = "corpus"; run = [&] { return cli::cmd_corpus(o); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }
  return emit(guarded(command, run), o, out);
}
