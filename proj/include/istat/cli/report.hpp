#pragma once

#include <string>
#include <vector>

#include "istat/constructions.hpp"
#include "json.hpp"

namespace istat::cli {

using Json = nlohmann::ordered_json;

/// Plot data: a named tab-separated table.
struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string tsv() const;
};

/// Shortest round-trip text of a double.
std::string fmt(double v);

/// 64-bit FNV-1a, as 16 hex digits.
std::string digest(const std::string& text);

Json to_json(const CheckpointSchedule& s);
Json to_json(const AnalysisConfig& cfg);
Json to_json(const MembershipVerdict& v);
Json to_json(const DensityEstimate& e);
Json to_json(const ThinAssessment& a);
Json to_json(const Boundedness& b);
Json to_json(const ConvergenceVerdict& c);
Json to_json(const SelectorLimit& s);
Json to_json(const ValueGrid& g);
Json to_json(const PointSetEstimate& p);
Json to_json(const PropertyResult& p);
Json to_json(const ApioWitness& w);
Json to_json(const DecompositionWitness& d);
Json to_json(const Companion& c);
Json to_json(const MonotoneResult& m);
Json to_json(const Extraction& e);

Table checkpoint_table(const std::string& name, const DensityEstimate& e);
Table cell_table(const std::string& name, const std::vector<const PointSetEstimate*>& estimates);

}  // namespace istat::cli
