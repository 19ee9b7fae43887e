#include "istat/cli/checks.hpp"

#include <cmath>
#include <functional>

#include "istat/cli/corpus.hpp"
#include "istat/cli/parse.hpp"
#include "istat/errors.hpp"

namespace istat::cli {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

Json to_json(const CheckResult& r) {
  Json details = Json::array();
  for (const auto& d : r.details) details.push_back(d);
  return Json{{"name", r.name},   {"subject", r.subject},   {"ideal", r.ideal},
              {"status", to_string(r.status)}, {"details", details}, {"evidence", r.evidence}};
}

int exit_code(const std::vector<CheckResult>& results) {
  bool conclusive = false;
  for (const auto& r : results) {
    if (r.status == CheckStatus::Fail) return 1;
    conclusive = conclusive || r.status == CheckStatus::Pass;
  }
  return conclusive ? 0 : 2;
}

std::vector<Ideal> suite_ideals() { return {Ideal::fin(), Ideal::trace(IndexSet::powers(4))}; }

namespace {

CheckStatus from(Membership m) {
  switch (m) {
    case Membership::InIdeal: return CheckStatus::Pass;
    case Membership::NotInIdeal: return CheckStatus::Fail;
    case Membership::Inconclusive: return CheckStatus::Inconclusive;
  }
  return CheckStatus::Inconclusive;
}

CheckStatus worst(CheckStatus a, CheckStatus b) {
  if (a == CheckStatus::Fail || b == CheckStatus::Fail) return CheckStatus::Fail;
  if (a == CheckStatus::Inconclusive || b == CheckStatus::Inconclusive) return CheckStatus::Inconclusive;
  return CheckStatus::Pass;
}

CheckStatus thin_status(Thinness t) {
  switch (t) {
    case Thinness::Thin: return CheckStatus::Pass;
    case Thinness::NonThin: return CheckStatus::Fail;
    case Thinness::Inconclusive: return CheckStatus::Inconclusive;
  }
  return CheckStatus::Inconclusive;
}

std::string name_of(const SequenceSpec& x) { return x.name().empty() ? x.to_string() : x.name(); }

class Collector {
 public:
  explicit Collector(std::vector<CheckResult>& out) : out_(out) {}

  // Preconditions that do not hold make a check inapplicable; a failed
  // construction or any other error is a conclusive failure.
  void run(const std::string& name, const std::string& subject, const std::string& ideal,
           const std::function<void(CheckResult&)>& body) {
    CheckResult r{name, subject, ideal, CheckStatus::Pass, {}, Json::object()};
    try {
      body(r);
    } catch (const PreconditionFailed& e) {
      r.status = CheckStatus::Inconclusive;
      r.details.push_back(std::string("not applicable: ") + e.what());
    } catch (const ResourceLimit& e) {
      r.status = CheckStatus::Inconclusive;
      r.details.push_back(std::string("resource limit: ") + e.what());
    } catch (const std::exception& e) {
      r.status = CheckStatus::Fail;
      r.details.push_back(std::string("error: ") + e.what());
    }
    out_.push_back(std::move(r));
  }

 private:
  std::vector<CheckResult>& out_;
};

bool within(double v, double target, double tol) { return std::fabs(v - target) <= tol; }

// ------------------------------------------------------------- set checks

void density_exactness(Collector& c, const SuiteOptions& o) {
  c.run("density-exactness", "evens, squares", "", [&](CheckResult& r) {
    const auto ev = natural_density(IndexSet::evens(), o.cfg.sched, o.cfg.tol, o.cfg.density);
    const auto sq = natural_density(IndexSet::squares(), o.cfg.sched, o.cfg.tol, o.cfg.density);
    r.evidence = Json{{"evens", to_json(ev)}, {"squares", to_json(sq)}};
    if (!(ev.verdict == DensityVerdict::Exists && within(ev.value, 0.5, 0.001))) {
      r.status = CheckStatus::Fail;
      r.details.push_back("evens: " + to_string(ev.verdict) + " " + fmt(ev.value));
    }
    if (sq.verdict != DensityVerdict::Zero) {
      r.status = CheckStatus::Fail;
      r.details.push_back("squares: " + to_string(sq.verdict));
    }
  });
}

void density_oscillation(Collector& c, const SuiteOptions& o) {
  const IndexSet blocks = parse_set("blocks(4^i,2*4^i-1)");
  c.run("density-oscillation", blocks.to_string(), "fin, trace(powers(4))", [&](CheckResult& r) {
    const auto nat = natural_density(blocks, o.cfg.sched, o.cfg.tol, o.cfg.density);
    const auto tr = i_density(blocks, Ideal::trace(IndexSet::powers(4)), o.cfg.sched, o.cfg.tol, o.cfg.density);
    r.evidence = Json{{"natural", to_json(nat)}, {"trace", to_json(tr)}};
    if (nat.verdict != DensityVerdict::DoesNotExist) {
      r.status = CheckStatus::Fail;
      r.details.push_back("natural density verdict " + to_string(nat.verdict));
    }
    if (nat.liminf < 0.32 || nat.liminf > 0.35 || nat.limsup < 0.64 || nat.limsup > 0.68) {
      r.status = CheckStatus::Fail;
      r.details.push_back("liminf " + fmt(nat.liminf) + ", limsup " + fmt(nat.limsup));
    }
    if (!(tr.verdict == DensityVerdict::Exists && within(tr.value, 1.0 / 3, 0.01))) {
      r.status = CheckStatus::Fail;
      r.details.push_back("trace density " + to_string(tr.verdict) + " " + fmt(tr.value));
    }
  });
}

void ideal_density_agreement(Collector& c, const SuiteOptions& o) {
  // the numeric path only: structure would answer before the ideal is consulted
  const DensityOptions numeric{false, false};
  const std::vector<Ideal> ideals = {Ideal::fin(), Ideal::density_zero(), Ideal::summable(),
                                     Ideal::trace(IndexSet::powers(4))};
  for (const auto& s : density_corpus()) {
    c.run("ideal-density-agreement", s.name, "fin, density0, summable, trace(powers(4))", [&](CheckResult& r) {
      const auto nat = natural_density(s.set, o.cfg.sched, o.cfg.tol, numeric);
      r.evidence["natural"] = to_json(nat);
      if (nat.verdict != DensityVerdict::Exists && nat.verdict != DensityVerdict::Zero) {
        r.status = CheckStatus::Inconclusive;
        r.details.push_back("natural density not conclusive: " + to_string(nat.verdict));
        return;
      }
      const double d = nat.verdict == DensityVerdict::Zero ? 0.0 : nat.value;
      Json per = Json::object();
      for (const auto& ideal : ideals) {
        const auto est = i_density(s.set, ideal, o.cfg.sched, o.cfg.tol, numeric);
        per[ideal.name()] = Json{{"verdict", to_string(est.verdict)}, {"value", est.value}, {"note", est.note}};
        const bool conclusive = est.verdict == DensityVerdict::Exists || est.verdict == DensityVerdict::Zero;
        const double v = est.verdict == DensityVerdict::Zero ? 0.0 : est.value;
        if (!conclusive) {
          r.status = worst(r.status, est.verdict == DensityVerdict::DoesNotExist ? CheckStatus::Fail
                                                                                 : CheckStatus::Inconclusive);
          r.details.push_back(ideal.name() + ": " + to_string(est.verdict));
        } else if (!within(v, d, o.cfg.tol) || !within(v, s.density, o.cfg.tol)) {
          r.status = CheckStatus::Fail;
          r.details.push_back(ideal.name() + ": " + fmt(v) + " against " + fmt(d));
        }
      }
      r.evidence["ideal"] = per;
    });
  }
}

void ideal_axioms(Collector& c, const SuiteOptions& o) {
  const std::vector<IndexSet> universe = {IndexSet::finite({1, 2, 3}), IndexSet::squares(), IndexSet::powers(2),
                                          IndexSet::evens(), parse_set("blocks(4^i,2*4^i-1)"), IndexSet::odds()};
  const auto budget = CheckpointSchedule::for_budget(std::min<std::uint64_t>(o.cfg.sched.ceiling, 1u << 20));
  for (const auto& ideal : {Ideal::fin(), Ideal::density_zero(), Ideal::summable(),
                            Ideal::trace(IndexSet::powers(4))}) {
    c.run("ideal-axioms", "universe of 6 sets", ideal.name(), [&](CheckResult& r) {
      const auto rep = check_axioms(ideal, universe, budget);
      Json verdicts = Json::array();
      for (const auto& [s, m] : rep.verdicts) verdicts.push_back(Json{{"set", s}, {"membership", to_string(m)}});
      r.evidence["verdicts"] = verdicts;
      r.status = rep.pass ? CheckStatus::Pass : CheckStatus::Fail;
      r.details = rep.violations;
    });
  }
}

// -------------------------------------------------------- sequence checks

struct Estimates {
  ValueGrid grid;
  PointSetEstimate gamma, lambda, ordinary;
};

}  // namespace

std::vector<CheckResult> sequence_checks(const SequenceSpec& x, const Ideal& ideal, const SuiteOptions& o) {
  std::vector<CheckResult> out;
  Collector c(out);
  const auto& cfg = o.cfg;
  const std::string subject = name_of(x);
  const std::string in = ideal.name();

  Boundedness b;
  c.run("boundedness", subject, in, [&](CheckResult& r) {
    b = test_i_statistical_boundedness(x, ideal, cfg);
    r.evidence = to_json(b);
    r.status = b.kind == Boundedness::Kind::Inconclusive ? CheckStatus::Inconclusive : CheckStatus::Pass;
    r.details.push_back(to_string(b.kind));
  });
  if (b.kind != Boundedness::Kind::Bounded) return out;

  Estimates e;
  bool have = false;
  c.run("point-set-estimates", subject, in, [&](CheckResult& r) {
    e.grid = default_grid(x, ideal, cfg);
    e.gamma = estimate_gamma(x, ideal, e.grid, cfg);
    e.lambda = estimate_lambda(x, ideal, e.grid, cfg);
    e.ordinary = estimate_ordinary_limit_points(x, e.grid, cfg);
    have = true;
    r.evidence = Json{{"grid", to_json(e.grid)},
                      {"gamma", e.gamma.in_region().to_string()},
                      {"lambda", e.lambda.in_region().to_string()},
                      {"ordinary", e.ordinary.in_region().to_string()}};
  });
  if (!have) return out;

  c.run("inclusion-chain", subject, in, [&](CheckResult& r) {
    PointSetEstimate gamma = e.gamma;
    if (o.inject_fault) {
      const auto cells = gamma.in_cells();
      if (!cells.empty()) gamma.cells[cells.front()].label = CellLabel::Out;
      r.details.push_back("fault injected: first In cell of Gamma relabelled Out");
    }
    const auto p = check_inclusion(e.lambda, gamma, e.ordinary);
    r.status = from(p.status);
    r.details.insert(r.details.end(), p.details.begin(), p.details.end());
    r.evidence = to_json(p);
  });

  c.run("perturbation-invariance", subject, in, [&](CheckResult& r) {
    Json runs = Json::array();
    for (const auto& k : thin_perturbations(o.seed, 3)) {
      const auto thin = assess_thin(k, ideal, cfg.sched, cfg.tol, cfg.density);
      if (thin.value != Thinness::Thin) {
        r.status = worst(r.status, CheckStatus::Inconclusive);
        r.details.push_back(k.to_string() + " is not Thin here");
        continue;
      }
      const auto y = perturb(x, k, Formula::index()).sequence;
      const auto g = compare_labels(e.gamma, estimate_gamma(y, ideal, e.grid, cfg));
      const auto l = compare_labels(e.lambda, estimate_lambda(y, ideal, e.grid, cfg));
      r.status = worst(r.status, worst(from(g.status), from(l.status)));
      for (const auto& d : g.details) r.details.push_back("gamma under " + k.to_string() + ": " + d);
      for (const auto& d : l.details) r.details.push_back("lambda under " + k.to_string() + ": " + d);
      runs.push_back(Json{{"set", k.to_string()}, {"gamma", to_string(g.status)}, {"lambda", to_string(l.status)}});
    }
    r.evidence["perturbations"] = runs;
  });

  c.run("compact-exclusion", subject, in, [&](CheckResult& r) {
    const auto intervals = out_intervals(e.gamma, 3);
    if (intervals.empty()) {
      r.status = CheckStatus::Inconclusive;
      r.details.push_back("no interval of Out cells");
    }
    Json runs = Json::array();
    for (const auto& a : intervals) {
      const auto p = check_compact_exclusion(x, ideal, a, cfg);
      r.status = worst(r.status, from(p.status));
      for (const auto& d : p.details) r.details.push_back(a.to_string() + ": " + d);
      runs.push_back(Json{{"interval", a.to_string()}, {"status", to_string(p.status)}});
    }
    r.evidence["intervals"] = runs;
  });

  c.run("closedness", subject, in, [&](CheckResult& r) {
    const auto p = check_closedness(e.gamma);
    r.status = from(p.status);
    r.details = p.details;
  });

  c.run("cluster-existence", subject, in, [&](CheckResult& r) {
    r.status = e.gamma.in_cells().empty() ? CheckStatus::Fail : CheckStatus::Pass;
    r.evidence["gamma"] = e.gamma.in_region().to_string();
    if (r.status == CheckStatus::Fail) r.details.push_back("bounded sequence without an In cell of Gamma");
  });

  c.run("distance", subject, in, [&](CheckResult& r) {
    Json runs = Json::array();
    for (const double eps : {0.05, 0.1}) {
      const auto d = distance_tail_check(x, ideal, e.gamma, eps, cfg);
      r.status = worst(r.status, thin_status(d.verdict));
      if (d.verdict != Thinness::Thin) r.details.push_back("eps " + fmt(eps) + ": " + to_string(d.verdict));
      runs.push_back(Json{{"eps", eps}, {"set", d.set}, {"verdict", to_string(d.verdict)}});
    }
    r.evidence["runs"] = runs;
  });

  c.run("companion", subject, in, [&](CheckResult& r) {
    const auto comp = companion_sequence(x, ideal, e.gamma, cfg);
    r.status = comp.matches ? CheckStatus::Pass : CheckStatus::Fail;
    r.details = comp.mismatches;
    r.evidence = Json{{"y", comp.sequence.to_string()},
                      {"disagreement", comp.disagreement.to_string()},
                      {"disagreement_verdict", to_string(comp.disagreement_verdict.value)},
                      {"limit_points_y", comp.limit_points.in_region().to_string()}};
  });

  c.run("heine-borel", subject, in, [&](CheckResult& r) {
    const auto ex = heine_borel_extract(x, ideal, e.gamma, cfg);
    r.status = ex.compact && ex.verdict.value == Thinness::Thin ? CheckStatus::Pass : CheckStatus::Fail;
    r.evidence = Json{{"B", ex.set.to_string()}, {"verdict", to_string(ex.verdict.value)}, {"compact", ex.compact}};
  });
  return out;
}

namespace {

void separation(Collector& c, const SuiteOptions& o) {
  auto cfg = o.cfg;
  cfg.tol = 0.005;
  cfg.sched.ceiling = std::min<std::uint64_t>(cfg.sched.ceiling, 1u << 20);
  const auto x = *find_sequence("valuation");
  c.run("separation", x.name, "fin", [&](CheckResult& r) {
    const auto grid = ValueGrid::span(-0.01, 1.01, 64);
    const auto gamma = estimate_gamma(x.x, Ideal::fin(), grid, cfg);
    const auto lambda = estimate_lambda(x.x, Ideal::fin(), grid, cfg);
    const auto in = [](const PointSetEstimate& p, double v) {
      const auto at = p.grid.locate(v);
      return at && p.cells[*at].label == CellLabel::In;
    };
    for (int j = 1; j <= 6; ++j) {
      if (!in(gamma, 1.0 / j) || !in(lambda, 1.0 / j)) {
        r.status = CheckStatus::Fail;
        r.details.push_back("cell of 1/" + std::to_string(j) + " not In for both");
      }
    }
    if (!in(gamma, 0.0)) {
      r.status = CheckStatus::Fail;
      r.details.push_back("cell of 0 not In for Gamma");
    }
    if (in(lambda, 0.0)) {
      r.status = CheckStatus::Fail;
      r.details.push_back("cell of 0 In for Lambda");
    }
    const auto zero = *grid.locate(0.0);
    r.evidence = Json{{"grid", to_json(grid)},
                      {"gamma", gamma.in_region().to_string()},
                      {"lambda", lambda.in_region().to_string()},
                      {"lambda_at_0", lambda.cells[zero].evidence},
                      {"selectors_searched", guard_selectors(x.x).size()}};
  });
}

void decomposition(Collector& c, const SuiteOptions& o) {
  const auto x = *find_sequence("square-excursion");
  c.run("decomposition", x.name, "fin", [&](CheckResult& r) {
    const auto d = decompose(x.x, Ideal::fin(), 0.0, o.cfg);
    const std::uint64_t n = o.cfg.sched.points().back();
    const double dev = max_deviation_along(x.x, d.set, 0.0, 10000, n, o.cfg.sched.ceiling);
    r.evidence = to_json(d);
    r.evidence["max_deviation_from_10000"] = dev;
    if (d.complement.value != Thinness::Thin) {
      r.status = CheckStatus::Fail;
      r.details.push_back("complement of B is " + to_string(d.complement.value));
    }
    if (!(dev < o.cfg.tol)) {
      r.status = CheckStatus::Fail;
      r.details.push_back("max deviation along B beyond 10^4 is " + fmt(dev));
    }
    if (!d.apio.finite_differences || !d.apio.thin_union) {
      r.status = CheckStatus::Fail;
      r.details.push_back("APIO witness clauses not both satisfied");
    }
    if (!d.round_trip) {
      r.status = worst(r.status, CheckStatus::Inconclusive);
      r.details.push_back("round trip not confirmed");
    }
  });
  c.run("apio", "squares, powers(2)", "fin", [&](CheckResult& r) {
    const auto w = apio_witness({IndexSet::squares(), IndexSet::powers(2)}, Ideal::fin(), o.cfg);
    r.evidence = to_json(w);
    r.status = w.finite_differences && w.thin_union ? CheckStatus::Pass : CheckStatus::Fail;
  });
}

void monotone(Collector& c, const SuiteOptions& o) {
  const auto base = *find_sequence("monotone-off-thin-set");
  const auto judge = [&](CheckResult& r, const MonotoneResult& m, double expect) {
    r.evidence = to_json(m);
    if (!m.stabilized) {
      r.status = CheckStatus::Inconclusive;
      r.details.push_back(m.note);
      return;
    }
    const double sup = m.window_sups.back().second;
    if (m.status != Membership::InIdeal || !m.limit) {
      r.status = from(m.status) == CheckStatus::Pass ? CheckStatus::Inconclusive : from(m.status);
      r.details.push_back("I-statistical convergence to the supremum: " + to_string(m.status));
      return;
    }
    if (!within(*m.limit, sup, o.cfg.tol) || !within(*m.limit, expect, o.cfg.tol)) {
      r.status = CheckStatus::Fail;
      r.details.push_back("limit " + fmt(*m.limit) + ", supremum " + fmt(sup));
    }
    if (m.inclusion.violation_verdict == Thinness::NonThin) {
      r.status = CheckStatus::Fail;
      r.details.push_back("inclusion violations are not Thin");
    }
    if (!m.inclusion.literal) {
      r.details.push_back(std::to_string(m.inclusion.violations) + " indices of M beyond k0 = " +
                          std::to_string(m.inclusion.k0) + " fall outside the eps-band (" +
                          to_string(m.inclusion.violation_verdict) + ")");
    }
  };
  c.run("monotone-increasing", base.name, "fin", [&](CheckResult& r) {
    judge(r, monotone_i_stat_limit(base.x, Ideal::fin(), o.cfg), 1.0);
  });
  c.run("monotone-decreasing", "-" + base.name, "fin", [&](CheckResult& r) {
    MonotoneOptions opts;
    opts.direction = Monotone::Decreasing;
    judge(r, monotone_i_stat_limit(negate(base.x), Ideal::fin(), o.cfg, opts), -1.0);
  });
  const auto spiky = *find_sequence("spiky-monotone");
  c.run("monotone-bounded-in-density", spiky.name, "fin", [&](CheckResult& r) {
    MonotoneOptions opts;
    opts.shrink = true;
    judge(r, monotone_i_stat_limit(spiky.x, Ideal::fin(), o.cfg, opts), 1.0);
  });
  const auto unb = *find_sequence("unbounded");
  c.run("monotone-unbounded", unb.name, "fin", [&](CheckResult& r) {
    try {
      monotone_i_stat_limit(unb.x, Ideal::fin(), o.cfg);
      r.status = CheckStatus::Fail;
      r.details.push_back("expected PreconditionFailed");
    } catch (const PreconditionFailed& e) {
      r.details.push_back(std::string("PreconditionFailed: ") + e.what());
    }
  });
}

void statistical_wrappers(Collector& c, const SuiteOptions& o) {
  for (const char* name : {"parity", "valuation"}) {
    const auto x = *find_sequence(name);
    c.run("statistical-wrappers", x.name, "fin", [&](CheckResult& r) {
      const auto grid = default_grid(x.x, Ideal::fin(), o.cfg);
      const auto g = compare_labels(estimate_gamma(x.x, Ideal::fin(), grid, o.cfg),
                                    estimate_statistical_cluster_points(x.x, grid, o.cfg));
      const auto l = compare_labels(estimate_lambda(x.x, Ideal::fin(), grid, o.cfg),
                                    estimate_statistical_limit_points(x.x, grid, o.cfg));
      r.status = worst(from(g.status), from(l.status));
      r.details = g.details;
      r.details.insert(r.details.end(), l.details.begin(), l.details.end());
    });
  }
}

}  // namespace

std::vector<CheckResult> paper_core(const SuiteOptions& o) {
  std::vector<CheckResult> out;
  Collector c(out);
  density_exactness(c, o);
  density_oscillation(c, o);
  ideal_density_agreement(c, o);
  ideal_axioms(c, o);
  for (const auto& ideal : suite_ideals()) {
    for (const auto& s : sequence_corpus()) {
      auto part = sequence_checks(s.x, ideal, o);
      if (!s.bounded) {
        // the boundedness probe must see the divergence
        for (auto& r : part) {
          if (r.name == "boundedness" && r.details == std::vector<std::string>{"Bounded"}) {
            r.status = CheckStatus::Fail;
            r.details.push_back("corpus marks this sequence unbounded");
          }
        }
      } else if (!part.empty() && part.front().name == "boundedness" && part.size() == 1) {
        part.front().status = worst(part.front().status, CheckStatus::Inconclusive);
        part.front().details.push_back("corpus marks this sequence bounded; grid checks skipped");
      }
      out.insert(out.end(), part.begin(), part.end());
    }
  }
  separation(c, o);
  decomposition(c, o);
  monotone(c, o);
  statistical_wrappers(c, o);
  return out;
}

}  // namespace istat::cli
