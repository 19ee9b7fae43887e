#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "istat/sequence.hpp"

namespace istat::cli {

struct CorpusSequence {
  std::string name;
  SequenceSpec x;
  /// I-statistically bounded under the shipped ideals.
  bool bounded = true;
  std::string about;
};

/// Built-in sequences, in a fixed order.
const std::vector<CorpusSequence>& sequence_corpus();
std::optional<CorpusSequence> find_sequence(const std::string& name);

struct CorpusSet {
  std::string name;
  IndexSet set;
  double density = 0.0;  // known natural density
};

/// Sets with a conclusive natural density.
const std::vector<CorpusSet>& density_corpus();

/// Thin index sets used to perturb sequences; the seed picks the parameters.
std::vector<IndexSet> thin_perturbations(std::uint64_t seed, std::size_t count);

}  // namespace istat::cli
