#include "istat/cli/commands.hpp"

#include <charconv>
#include <sstream>

#include "istat/cli/corpus.hpp"
#include "istat/cli/parse.hpp"
#include "istat/cli/seqfile.hpp"
#include "istat/errors.hpp"

namespace istat::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t from = 0;
  while (true) {
    const auto at = s.find(sep, from);
    out.push_back(s.substr(from, at == std::string::npos ? std::string::npos : at - from));
    if (at == std::string::npos) return out;
    from = at + 1;
  }
}

template <typename T>
T number_flag(const std::string& flag, const std::string& text) {
  T v{};
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw ParseError("--" + flag + ": not a number: '" + text + "'", static_cast<std::size_t>(r.ptr - text.data()));
  }
  return v;
}

Json header(const std::string& command, const Settings& s, Json inputs) {
  Json cfg = to_json(s.cfg);
  cfg["ideal"] = s.ideal.name();
  cfg["grid"] = s.grid ? to_json(*s.grid) : Json("auto");
  cfg["seed"] = s.seed;
  cfg["ladder_depth"] = kDefaultLadderDepth;
  return Json{{"format_version", kFormatVersion}, {"command", command}, {"config", cfg}, {"inputs", inputs}};
}

void finish(Report& r, const std::string& status, int code) {
  r.exit_code = code;
  r.doc["summary"] = Json{{"status", status}, {"exit_code", code}};
}

bool conclusive(DensityVerdict v) { return v != DensityVerdict::Inconclusive; }

Json set_input(const std::string& text) {
  const auto set = parse_set(text);
  return Json{{"kind", "set"}, {"text", text}, {"canonical", set.to_string()}, {"digest", digest(set.to_string())}};
}

ValueGrid grid_for(const SequenceSpec& x, const Settings& s) {
  return s.grid ? *s.grid : default_grid(x, s.ideal, s.cfg);
}

void flatten(const Json& j, const std::string& path, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, out);
  } else if (j.is_array()) {
    bool scalars = true;
    for (const auto& v : j) scalars = scalars && !v.is_structured();
    if (scalars) {
      out << path << ": " << j.dump() << '\n';
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

}  // namespace

Settings resolve(const RunOptions& o) {
  Settings s;
  s.ideal = parse_ideal(o.ideal);
  s.seed = o.seed;
  if (o.schedule) {
    const auto parts = split(*o.schedule, ',');
    if (parts.size() != 2) throw ParseError("--schedule expects start,ratio", 0);
    s.cfg.sched.start = number_flag<std::uint64_t>("schedule", parts[0]);
    s.cfg.sched.ratio = number_flag<double>("schedule", parts[1]);
  }
  if (o.nmax) s.cfg.sched.ceiling = *o.nmax;
  if (o.tol) {
    if (!(*o.tol > 0.0 && *o.tol < 1.0)) throw std::invalid_argument("--tol must lie in (0, 1)");
    s.cfg.tol = *o.tol;
  }
  if (o.grid) {
    const auto parts = split(*o.grid, ',');
    if (parts.size() == 1) {
      s.cfg.grid_cells = number_flag<std::size_t>("grid", parts[0]);
      if (s.cfg.grid_cells < 4) throw std::invalid_argument("--grid needs at least 4 cells");
    } else if (parts.size() == 3) {
      const double lo = number_flag<double>("grid", parts[0]);
      const double hi = number_flag<double>("grid", parts[1]);
      const auto n = number_flag<std::size_t>("grid", parts[2]);
      s.grid = ValueGrid::span(lo, hi, n);
      s.cfg.grid_cells = n;
    } else {
      throw ParseError("--grid expects N or lo,hi,N", 0);
    }
  }
  s.cfg.sched.validate();
  return s;
}

std::string Report::render(const std::string& format) const {
  if (format == "json") return doc.dump(2) + "\n";
  std::ostringstream out;
  out << "command: " << doc.value("command", "") << '\n';
  if (doc.contains("checks")) {
    for (const auto& c : doc["checks"]) {
      out << c["status"].get<std::string>() << '\t' << c["name"].get<std::string>() << '\t'
          << c["subject"].get<std::string>() << '\t' << c["ideal"].get<std::string>() << '\n';
      for (const auto& d : c["details"]) out << "\t\t" << d.get<std::string>() << '\n';
    }
  } else if (doc.contains("sections")) {
    flatten(doc["sections"], "", out);
  } else if (doc.contains("error")) {
    out << "error: " << doc["error"].get<std::string>() << '\n';
  }
  if (doc.contains("summary")) flatten(doc["summary"], "summary", out);
  return out.str();
}

SequenceInput load_sequence_input(const std::string& arg) {
  if (const auto c = find_sequence(arg)) {
    const auto doc = sequence_document(c->x);
    return {c->x, Json{{"kind", "corpus"}, {"name", c->name}, {"about", c->about}, {"digest", digest(doc)}}};
  }
  const auto text = read_file(arg);
  auto x = load_sequence(arg);
  return {x, Json{{"kind", "file"}, {"path", arg}, {"digest", digest(text)}, {"sequence", x.to_string()}}};
}

Report input_error(const std::string& command, const std::string& message) {
  Report r;
  r.doc = Json{{"format_version", kFormatVersion}, {"command", command}, {"error", message}};
  finish(r, "input-error", 3);
  return r;
}

Report cmd_density(const std::string& text, const RunOptions& opts) {
  const auto s = resolve(opts);
  const auto set = parse_set(text);
  Report r;
  r.doc = header("density", s, Json::array({set_input(text)}));
  const auto nat = natural_density(set, s.cfg.sched, s.cfg.tol, s.cfg.density);
  const auto id = i_density(set, s.ideal, s.cfg.sched, s.cfg.tol, s.cfg.density);
  r.doc["sections"] = Json{{"natural_density", to_json(nat)}, {"i_density", to_json(id)}};
  r.tables.push_back(checkpoint_table("natural_density", nat));
  r.tables.push_back(checkpoint_table("i_density", id));
  const bool ok = conclusive(nat.verdict) && conclusive(id.verdict);
  finish(r, ok ? "conclusive" : "inconclusive", ok ? 0 : 2);
  return r;
}

Report cmd_analyze(const std::string& sequence, const RunOptions& opts) {
  const auto s = resolve(opts);
  const auto in = load_sequence_input(sequence);
  const auto& x = in.x;
  Report r;
  r.doc = header("analyze", s, Json::array({in.description}));
  Json sec = Json::object();
  const auto b = test_i_statistical_boundedness(x, s.ideal, s.cfg);
  sec["boundedness"] = to_json(b);

  const double xi = tail_candidate(x, s.cfg);
  sec["convergence"] = Json{{"candidate", xi},
                            {"statistical", to_json(test_statistical_convergence(x, xi, s.cfg))},
                            {"i_statistical", to_json(test_i_statistical_convergence(x, s.ideal, xi, s.cfg))}};
  Json sel = Json::array();
  for (const auto& g : guard_selectors(x)) {
    sel.push_back(Json{{"selector", g.to_string()}, {"limit", to_json(limit_along(x, g, s.cfg.tol, s.cfg))}});
  }
  sec["selectors"] = sel;

  ValueGrid grid;
  try {
    grid = grid_for(x, s);
  } catch (const UnboundedRange& e) {
    sec["limit_points"] = Json{{"error", e.what()},
                               {"guidance", "the sequence is not I-statistically bounded on this prefix; pass an "
                                            "explicit --grid lo,hi,N to estimate the point sets over a window"}};
    r.doc["sections"] = sec;
    finish(r, "inconclusive", 2);
    return r;
  }
  const auto l = estimate_ordinary_limit_points(x, grid, s.cfg);
  const auto g = estimate_gamma(x, s.ideal, grid, s.cfg);
  const auto lam = estimate_lambda(x, s.ideal, grid, s.cfg);
  sec["limit_points"] = Json{{"L", to_json(l)}, {"Gamma", to_json(g)}, {"Lambda", to_json(lam)}};
  const auto inc = check_inclusion(lam, g, l);
  sec["inclusion"] = to_json(inc);
  r.doc["sections"] = sec;
  r.tables.push_back(cell_table("cells", {&l, &g, &lam}));

  int code = 0;
  if (inc.status == Membership::NotInIdeal) {
    code = 1;
  } else if (b.kind == Boundedness::Kind::Inconclusive || inc.status == Membership::Inconclusive) {
    code = 2;
  }
  finish(r, code == 0 ? "conclusive" : code == 1 ? "violation" : "inconclusive", code);
  return r;
}

Report cmd_check(const std::string& target, const RunOptions& opts, bool inject_fault) {
  const auto s = resolve(opts);
  SuiteOptions so{s.cfg, s.seed, inject_fault};
  Report r;
  std::vector<CheckResult> results;
  if (target == "paper-core") {
    r.doc = header("check", s, Json::array({Json{{"kind", "suite"}, {"name", target}}}));
    results = paper_core(so);
  } else {
    const auto in = load_sequence_input(target);
    r.doc = header("check", s, Json::array({in.description}));
    results = sequence_checks(in.x, s.ideal, so);
  }
  r.doc["config"]["inject_fault"] = inject_fault;
  Json checks = Json::array();
  std::size_t pass = 0, fail = 0, inconclusive = 0;
  Table t{"checks", {"name", "subject", "ideal", "status"}, {}};
  for (const auto& c : results) {
    checks.push_back(to_json(c));
    t.rows.push_back({c.name, c.subject, c.ideal, to_string(c.status)});
    (c.status == CheckStatus::Pass ? pass : c.status == CheckStatus::Fail ? fail : inconclusive)++;
  }
  r.doc["checks"] = checks;
  r.tables.push_back(std::move(t));
  const int code = exit_code(results);
  finish(r, code == 0 ? "pass" : code == 1 ? "fail" : "inconclusive", code);
  r.doc["summary"]["counts"] = Json{{"pass", pass}, {"fail", fail}, {"inconclusive", inconclusive}};
  return r;
}

Report cmd_decompose(const std::string& sequence, std::optional<double> limit, const RunOptions& opts,
                     std::size_t depth) {
  const auto s = resolve(opts);
  const auto in = load_sequence_input(sequence);
  Report r;
  r.doc = header("decompose", s, Json::array({in.description}));
  const double l = limit ? *limit : tail_candidate(in.x, s.cfg);
  const auto d = decompose(in.x, s.ideal, l, s.cfg, depth);
  r.doc["sections"] = Json{{"limit_source", limit ? "flag" : "tail candidate"}, {"witness", to_json(d)}};
  r.tables.push_back(checkpoint_table("complement_density", d.complement.estimate));
  const bool ok = d.complement.value == Thinness::Thin && d.apio.finite_differences && d.apio.thin_union;
  const int code = !ok ? 1 : d.round_trip ? 0 : 2;
  finish(r, code == 0 ? "witness" : code == 1 ? "violation" : "inconclusive", code);
  return r;
}

Report cmd_apio(const std::vector<std::string>& texts, const RunOptions& opts) {
  const auto s = resolve(opts);
  std::vector<IndexSet> family;
  Json inputs = Json::array();
  for (const auto& t : texts) {
    family.push_back(parse_set(t));
    inputs.push_back(set_input(t));
  }
  Report r;
  r.doc = header("apio", s, inputs);
  const auto w = apio_witness(family, s.ideal, s.cfg);
  r.doc["sections"] = Json{{"witness", to_json(w)}};
  r.tables.push_back(checkpoint_table("union_density", w.verdict.estimate));
  const bool ok = w.finite_differences && w.thin_union;
  finish(r, ok ? "witness" : "violation", ok ? 0 : 1);
  return r;
}

Report cmd_monotone(const std::string& sequence, bool decreasing, bool shrink, const std::optional<std::string>& m,
                    const RunOptions& opts) {
  const auto s = resolve(opts);
  const auto in = load_sequence_input(sequence);
  Json inputs = Json::array({in.description});
  MonotoneOptions mo;
  mo.direction = decreasing ? Monotone::Decreasing : Monotone::Increasing;
  mo.shrink = shrink;
  if (m) {
    mo.m = parse_set(*m);
    inputs.push_back(set_input(*m));
  }
  Report r;
  r.doc = header("monotone", s, inputs);
  r.doc["config"]["direction"] = decreasing ? "decreasing" : "increasing";
  r.doc["config"]["shrink"] = shrink;
  const auto res = monotone_i_stat_limit(in.x, s.ideal, s.cfg, mo);
  r.doc["sections"] = Json{{"result", to_json(res)}};
  Table t{"window_sups", {"n", "sup"}, {}};
  for (const auto& [n, v] : res.window_sups) t.rows.push_back({std::to_string(n), fmt(v)});
  r.tables.push_back(std::move(t));
  int code = 2;
  if (res.status == Membership::NotInIdeal || res.inclusion.violation_verdict == Thinness::NonThin) {
    code = 1;
  } else if (res.status == Membership::InIdeal && res.stabilized) {
    code = 0;
  }
  finish(r, code == 0 ? "converges" : code == 1 ? "violation" : "inconclusive", code);
  return r;
}

Report cmd_extract(const std::string& sequence, const RunOptions& opts) {
  const auto s = resolve(opts);
  const auto in = load_sequence_input(sequence);
  Report r;
  r.doc = header("extract", s, Json::array({in.description}));
  const auto grid = grid_for(in.x, s);
  const auto gamma = estimate_gamma(in.x, s.ideal, grid, s.cfg);
  const auto ex = heine_borel_extract(in.x, s.ideal, gamma, s.cfg);
  r.doc["sections"] = Json{{"gamma", to_json(gamma)}, {"extraction", to_json(ex)}};
  r.tables.push_back(cell_table("cells", {&gamma}));
  const bool ok = ex.compact && ex.verdict.value == Thinness::Thin;
  finish(r, ok ? "witness" : "violation", ok ? 0 : 1);
  return r;
}

Report cmd_corpus(const RunOptions& opts) {
  const auto s = resolve(opts);
  Report r;
  r.doc = header("corpus", s, Json::array());
  Json seqs = Json::array();
  for (const auto& c : sequence_corpus()) {
    seqs.push_back(Json{{"name", c.name},
                        {"about", c.about},
                        {"bounded", c.bounded},
                        {"sequence", c.x.to_string()},
                        {"digest", digest(sequence_document(c.x))}});
  }
  Json sets = Json::array();
  for (const auto& c : density_corpus()) sets.push_back(Json{{"set", c.name}, {"density", c.density}});
  r.doc["sections"] = Json{{"sequences", seqs}, {"density_sets", sets}};
  finish(r, "ok", 0);
  return r;
}

}  // namespace istat::cli
