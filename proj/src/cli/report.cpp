#include "istat/cli/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace istat::cli {

namespace {

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json optional_number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

Json exact_json(const std::optional<ExactDensity>& e) {
  if (!e) return nullptr;
  return Json{{"value", number(e->value)}, {"positive", e->positive}, {"full", e->full}};
}

Json strings(const std::vector<std::string>& v) {
  Json out = Json::array();
  for (const auto& s : v) out.push_back(s);
  return out;
}

}  // namespace

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string digest(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string Table::tsv() const {
  std::string out;
  const auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += '\t';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

Json to_json(const CheckpointSchedule& s) {
  return Json{{"start", s.start}, {"ratio", number(s.ratio)}, {"ceiling", s.ceiling}};
}

Json to_json(const AnalysisConfig& cfg) {
  Json eps = Json::array(), delta = Json::array();
  for (const double e : cfg.eps_ladder) eps.push_back(number(e));
  for (const double d : cfg.delta_ladder) delta.push_back(number(d));
  return Json{{"schedule", to_json(cfg.sched)},
              {"tol", number(cfg.tol)},
              {"grid_cells", cfg.grid_cells},
              {"refine_rounds", cfg.refine_rounds},
              {"eps_ladder", eps},
              {"delta_ladder", delta},
              {"exact_structure", cfg.density.use_exact},
              {"natural_shortcut", cfg.density.shortcut}};
}

Json to_json(const MembershipVerdict& v) {
  Json ev = Json::array();
  for (const auto& [n, x] : v.evidence) ev.push_back(Json::array({n, number(x)}));
  return Json{{"value", to_string(v.value)}, {"rule", v.rule}, {"evidence", ev}};
}

Json to_json(const DensityEstimate& e) {
  Json table = Json::array();
  for (std::size_t i = 0; i < e.checkpoints.size(); ++i) {
    table.push_back(Json::array({e.checkpoints[i], number(e.ratios[i])}));
  }
  Json j{{"set", e.set}};
  if (e.ideal) j["ideal"] = *e.ideal;
  j["verdict"] = to_string(e.verdict);
  j["value"] = e.verdict == DensityVerdict::Exists || e.verdict == DensityVerdict::Zero ? number(e.value)
                                                                                        : Json(nullptr);
  j["liminf"] = number(e.liminf);
  j["limsup"] = number(e.limsup);
  j["tol"] = number(e.tol);
  j["exact"] = exact_json(e.exact);
  j["note"] = e.note;
  j["checkpoints"] = table;
  return j;
}

Json to_json(const ThinAssessment& a) {
  return Json{{"verdict", to_string(a.value)}, {"density", to_json(a.estimate)}};
}

Json to_json(const Boundedness& b) {
  Json ladder = Json::array();
  for (const auto& [l, t] : b.ladder) ladder.push_back(Json{{"level", number(l)}, {"exceedance", to_string(t)}});
  Json j{{"kind", to_string(b.kind)}};
  j["bound"] = b.kind == Boundedness::Kind::Inconclusive || b.kind == Boundedness::Kind::Unbounded
                   ? Json(nullptr)
                   : number(b.bound);
  if (b.kind == Boundedness::Kind::Bounded) j["compact"] = b.compact.to_string();
  j["ladder"] = ladder;
  return j;
}

Json to_json(const ConvergenceVerdict& c) {
  Json steps = Json::array();
  for (const auto& s : c.steps) {
    Json st{{"eps", number(s.eps)}};
    if (s.delta > 0) st["delta"] = number(s.delta);
    st["verdict"] = to_string(s.verdict.value);
    st["rule"] = s.verdict.rule;
    steps.push_back(st);
  }
  return Json{{"xi", number(c.xi)}, {"status", to_string(c.status)}, {"witness", c.witness}, {"steps", steps}};
}

Json to_json(const SelectorLimit& s) {
  return Json{{"status", to_string(s.status)},
              {"value", optional_number(s.value)},
              {"selected", s.selected},
              {"diagnosis", s.diagnosis}};
}

Json to_json(const ValueGrid& g) {
  return Json{{"lower", number(g.lower)}, {"width", number(g.width)}, {"cells", g.cells}, {"upper", number(g.upper())}};
}

Json to_json(const PointSetEstimate& p) {
  Json cells = Json::array();
  for (std::size_t i = 0; i < p.cells.size(); ++i) {
    const auto& c = p.cells[i];
    Json cj{{"index", i}, {"range", c.range.to_string()}, {"label", to_string(c.label)}, {"evidence", c.evidence}};
    if (!c.witness.empty()) cj["witness"] = c.witness;
    cells.push_back(cj);
  }
  Json in = Json::array();
  for (const auto i : p.in_cells()) in.push_back(i);
  return Json{{"kind", to_string(p.kind)},
              {"ideal", p.ideal},
              {"grid", to_json(p.grid)},
              {"in_cells", in},
              {"in_region", p.in_region().to_string()},
              {"note", p.note},
              {"cells", cells}};
}

Json to_json(const PropertyResult& p) { return Json{{"status", to_string(p.status)}, {"details", strings(p.details)}}; }

Json to_json(const ApioWitness& w) {
  Json inputs = Json::array();
  for (std::size_t j = 0; j < w.inputs.size(); ++j) {
    inputs.push_back(Json{{"j", j + 1},
                          {"A", w.inputs[j].to_string()},
                          {"A_verdict", to_string(w.input_verdicts[j].value)},
                          {"splice_point", w.splice_points[j]},
                          {"B", w.outputs[j].to_string()},
                          {"head_bound", w.head_bounds[j]}});
  }
  return Json{{"family", inputs},
              {"union", w.union_set.to_string()},
              {"finite_differences", w.finite_differences},
              {"thin_union", w.thin_union},
              {"union_verdict", to_json(w.verdict)}};
}

Json to_json(const DecompositionWitness& d) {
  return Json{{"limit", number(d.limit)},
              {"B", d.set.to_string()},
              {"convergence", to_json(d.convergence)},
              {"complement", to_json(d.complement)},
              {"along_B", to_json(d.along)},
              {"max_deviation", Json{{"from", d.deviation_from}, {"value", number(d.max_deviation)}}},
              {"round_trip", d.round_trip},
              {"note", d.note},
              {"apio", to_json(d.apio)}};
}

Json to_json(const Companion& c) {
  return Json{{"y", c.sequence.to_string()},
              {"disagreement", c.disagreement.to_string()},
              {"disagreement_verdict", to_json(c.disagreement_verdict)},
              {"matches", c.matches},
              {"mismatches", strings(c.mismatches)},
              {"limit_points_y", to_json(c.limit_points)}};
}

Json to_json(const MonotoneResult& m) {
  Json sups = Json::array();
  for (const auto& [n, s] : m.window_sups) sups.push_back(Json::array({n, number(s)}));
  const auto& inc = m.inclusion;
  Json j{{"status", to_string(m.status)},
         {"limit", optional_number(m.limit)},
         {"M", m.m.to_string()},
         {"M_density", to_json(m.m_density)},
         {"boundedness", to_json(m.boundedness)}};
  if (m.shrink_bound) {
    j["shrink"] = Json{{"l0", number(*m.shrink_bound)}, {"discarded", to_json(*m.shrink_verdict)}};
  }
  j["window_sups"] = sups;
  j["stabilized"] = m.stabilized;
  j["convergence"] = to_json(m.convergence);
  j["inclusion"] = Json{{"eps", number(inc.eps)},
                        {"k0", inc.k0},
                        {"checked", inc.checked},
                        {"violations", inc.violations},
                        {"first_violation", inc.first_violation},
                        {"violations_verdict", to_string(inc.violation_verdict)},
                        {"literal", inc.literal}};
  j["note"] = m.note;
  return j;
}

Json to_json(const Extraction& e) {
  Json hits = Json::array();
  for (const auto i : e.hit_cells) hits.push_back(i);
  return Json{{"B", e.set.to_string()},
              {"verdict", to_json(e.verdict)},
              {"boundedness", to_json(e.boundedness)},
              {"hit_cells", hits},
              {"compact", e.compact},
              {"note", e.note}};
}

Table checkpoint_table(const std::string& name, const DensityEstimate& e) {
  Table t{name, {"n", "ratio"}, {}};
  for (std::size_t i = 0; i < e.checkpoints.size(); ++i) {
    t.rows.push_back({std::to_string(e.checkpoints[i]), fmt(e.ratios[i])});
  }
  return t;
}

Table cell_table(const std::string& name, const std::vector<const PointSetEstimate*>& estimates) {
  Table t{name, {"cell", "lo", "hi", "centre"}, {}};
  for (const auto* e : estimates) t.header.push_back(to_string(e->kind));
  if (estimates.empty()) return t;
  const auto& cells = estimates.front()->cells;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::vector<std::string> row{std::to_string(i), fmt(cells[i].range.lo), fmt(cells[i].range.hi),
                                 fmt(cells[i].centre)};
    for (const auto* e : estimates) row.push_back(to_string(e->cells[i].label));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace istat::cli
