#pragma once

#include <optional>
#include <string>
#include <vector>

#include "istat/cli/checks.hpp"

namespace istat::cli {

/// Raw flag values shared by every command, as typed.
struct RunOptions {
  std::string ideal = "fin";
  std::optional<std::uint64_t> nmax;
  std::optional<double> tol;
  std::optional<std::string> grid;      // "N" or "lo,hi,N"
  std::optional<std::string> schedule;  // "start,ratio"
  std::string format = "json";
  std::uint64_t seed = 1;
};

struct Settings {
  AnalysisConfig cfg;
  Ideal ideal = Ideal::fin();
  std::optional<ValueGrid> grid;
  std::uint64_t seed = 1;
};

/// Throws ParseError or std::invalid_argument on malformed flags.
Settings resolve(const RunOptions& opts);

struct Report {
  Json doc;
  std::vector<Table> tables;
  int exit_code = 0;

  /// JSON or plain text, always newline-terminated.
  std::string render(const std::string& format) const;
};

/// Sequence argument: a corpus name, or a path to a document or `.csv` prefix.
struct SequenceInput {
  SequenceSpec x;
  Json description;
};
SequenceInput load_sequence_input(const std::string& arg);

Report cmd_density(const std::string& set, const RunOptions& opts);
Report cmd_analyze(const std::string& sequence, const RunOptions& opts);
/// `target` is "paper-core" or a sequence argument.
Report cmd_check(const std::string& target, const RunOptions& opts, bool inject_fault = false);
Report cmd_decompose(const std::string& sequence, std::optional<double> limit, const RunOptions& opts,
                     std::size_t depth = kDefaultLadderDepth);
Report cmd_apio(const std::vector<std::string>& sets, const RunOptions& opts);
Report cmd_monotone(const std::string& sequence, bool decreasing, bool shrink, const std::optional<std::string>& m,
                    const RunOptions& opts);
Report cmd_extract(const std::string& sequence, const RunOptions& opts);
Report cmd_corpus(const RunOptions& opts);

/// Report for a rejected input; exit code 3.
Report input_error(const std::string& command, const std::string& message);

}  // namespace istat::cli
