#include "istat/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>

#include "istat/errors.hpp"

namespace istat {

struct SequenceSpec::Cache {
  std::mutex mu;
  std::shared_ptr<const std::vector<double>> values;
};

SequenceSpec::SequenceSpec() : SequenceSpec({}, Formula()) {}

SequenceSpec::SequenceSpec(std::vector<Piece> pieces, Formula fallback, std::string name)
    : pieces_(std::move(pieces)),
      fallback_(std::move(fallback)),
      name_(std::move(name)),
      cache_(std::make_shared<Cache>()) {}

SequenceSpec SequenceSpec::constant(double c, std::string name) {
  return SequenceSpec({}, Formula::constant(c), std::move(name));
}

SequenceSpec SequenceSpec::of(Formula f, std::string name) { return SequenceSpec({}, std::move(f), std::move(name)); }

SequenceSpec SequenceSpec::from_prefix(std::vector<double> values, std::string name) {
  SequenceSpec s({}, Formula(), std::move(name));
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("prefix data contains a non-finite value");
  }
  s.data_ = std::make_shared<const std::vector<double>>(std::move(values));
  return s;
}

SequenceSpec SequenceSpec::renamed(std::string name) const {
  SequenceSpec s = *this;
  s.name_ = std::move(name);
  return s;
}

std::optional<std::uint64_t> SequenceSpec::prefix_length() const {
  if (!data_) return std::nullopt;
  return data_->size();
}

double SequenceSpec::eval(std::uint64_t k) const {
  if (k == 0) throw std::invalid_argument("sequence index must be >= 1");
  if (data_) {
    if (k > data_->size()) {
      throw ResourceLimit("index " + std::to_string(k) + " is past the imported prefix of length " +
                          std::to_string(data_->size()));
    }
    return (*data_)[k - 1];
  }
  for (const auto& p : pieces_) {
    if (p.guard.contains(k)) return p.formula.eval(k);
  }
  return fallback_.eval(k);
}

std::vector<IndexSet> SequenceSpec::effective_guards() const {
  std::vector<IndexSet> out;
  IndexSet prior = IndexSet::empty();
  for (const auto& p : pieces_) {
    out.push_back(simplify(intersect(p.guard, complement(prior))));
    prior = simplify(unite(prior, p.guard));
  }
  out.push_back(simplify(complement(prior)));
  return out;
}

std::shared_ptr<const std::vector<double>> SequenceSpec::values(std::uint64_t n, std::uint64_t ceiling) const {
  if (n > ceiling) {
    throw ResourceLimit("sequence prefix of " + std::to_string(n) + " exceeds prefix ceiling " +
                        std::to_string(ceiling));
  }
  std::shared_ptr<const std::vector<double>> have;
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    have = cache_->values;
  }
  if (have && have->size() >= n) return have;

  if (data_) {
    if (n > data_->size()) {
      throw ResourceLimit("prefix of " + std::to_string(n) + " is past the imported data (" +
                          std::to_string(data_->size()) + " values)");
    }
    return data_;
  }

  std::uint64_t size = 4096;
  while (size < n) size <<= 1;
  size = std::max(n, std::min(size, ceiling));

  auto out = std::make_shared<std::vector<double>>();
  out->reserve(size);
  if (have) out->assign(have->begin(), have->end());
  const std::uint64_t from = out->size() + 1;

  std::vector<std::shared_ptr<const PrefixBitmap>> guards;
  for (const auto& p : pieces_) guards.push_back(p.guard.bitmap(size, std::max(size, ceiling)));
  for (std::uint64_t k = from; k <= size; ++k) {
    const Formula* f = &fallback_;
    for (std::size_t i = 0; i < guards.size(); ++i) {
      if (guards[i]->test(k)) {
        f = &pieces_[i].formula;
        break;
      }
    }
    out->push_back(f->eval(k));
  }

  std::lock_guard<std::mutex> lock(cache_->mu);
  if (!cache_->values || cache_->values->size() < out->size()) cache_->values = out;
  return cache_->values;
}

// ------------------------------------------------------------- preimages

namespace {

constexpr std::uint64_t kSearchLimit = std::uint64_t{1} << 53;

// first k in [1, kSearchLimit] with pred(k), or kSearchLimit + 1
template <class Pred>
std::uint64_t first_true(Pred pred) {
  std::uint64_t lo = 1;
  std::uint64_t hi = kSearchLimit + 1;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

IndexSet index_range(std::uint64_t first, std::uint64_t past) {
  if (first > kSearchLimit || first >= past) return IndexSet::empty();
  if (past > kSearchLimit) return IndexSet::progression(first, 1);
  return IndexSet::range(first, past - 1);
}

std::optional<IndexSet> monotone_preimage(const Formula& f, bool increasing, const Interval& part) {
  const auto value = [&](std::uint64_t k) {
    const double v = f.eval(k);
    return increasing ? v : -v;
  };
  double lo = part.lo, hi = part.hi;
  bool lo_closed = part.lo_closed, hi_closed = part.hi_closed;
  if (!increasing) {
    std::swap(lo, hi);
    std::swap(lo_closed, hi_closed);
    lo = -lo;
    hi = -hi;
  }
  try {
    const auto above_lo = [&](std::uint64_t k) {
      const double v = value(k);
      return lo_closed ? v >= lo : v > lo;
    };
    const auto past_hi = [&](std::uint64_t k) {
      const double v = value(k);
      return hi_closed ? v > hi : v >= hi;
    };
    return index_range(first_true(above_lo), first_true(past_hi));
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

IndexSet valuation_preimage(std::uint64_t base, const Interval& part) {
  // 1/(v+1) decreases in v; the matching levels form one run
  constexpr std::uint64_t kDeep = 256;
  std::optional<std::uint64_t> first;
  std::uint64_t last = 0;
  for (std::uint64_t v = 0; v <= kDeep; ++v) {
    if (part.contains(1.0 / static_cast<double>(v + 1))) {
      if (!first) first = v;
      last = v;
    } else if (first) {
      break;
    }
  }
  if (!first) return IndexSet::empty();
  return IndexSet::valuation(base, *first, last == kDeep ? kUnboundedLevel : last);
}

}  // namespace

std::optional<IndexSet> formula_preimage(const Formula& f, const IntervalSet& s) {
  const auto mono = f.monotonicity();
  if (mono == Formula::Monotonicity::Constant) {
    try {
      return s.contains(f.eval(1)) ? IndexSet::all() : IndexSet::empty();
    } catch (const std::domain_error&) {
      return std::nullopt;
    }
  }
  std::uint64_t base = 0;
  const bool invval = f.is_inverse_valuation(base);
  if (!invval && mono == Formula::Monotonicity::Unknown) {
    const auto fe = f.on_parity(true);
    const auto fo = f.on_parity(false);
    if (!fe || !fo) return std::nullopt;
    const auto pe = formula_preimage(*fe, s);
    const auto po = formula_preimage(*fo, s);
    if (!pe || !po) return std::nullopt;
    return simplify(unite(intersect(IndexSet::evens(), *pe), intersect(IndexSet::odds(), *po)));
  }
  IndexSet out = IndexSet::empty();
  for (const auto& part : s.parts()) {
    if (invval) {
      out = unite(out, valuation_preimage(base, part));
      continue;
    }
    auto p = monotone_preimage(f, mono == Formula::Monotonicity::NonDecreasing, part);
    if (!p) return std::nullopt;
    out = unite(out, *p);
  }
  return simplify(out);
}

IndexSet SequenceSpec::preimage(const IntervalSet& s) const {
  if (!data_) {
    const auto guards = effective_guards();
    IndexSet out = IndexSet::empty();
    bool symbolic = true;
    for (std::size_t i = 0; i <= pieces_.size() && symbolic; ++i) {
      const Formula& f = i < pieces_.size() ? pieces_[i].formula : fallback_;
      if (guards[i].kind() == IndexSet::Kind::Empty) continue;
      const auto p = formula_preimage(f, s);
      if (!p) {
        symbolic = false;
        break;
      }
      out = unite(out, intersect(guards[i], *p));
    }
    if (symbolic) return simplify(out);
  }

  const SequenceSpec self = *this;
  CustomPredicate pred;
  pred.name = "preimage(" + (name_.empty() ? std::string("x") : name_) + "," + s.to_string() + ")";
  pred.member = [self, s](std::uint64_t k) { return s.contains(self.eval(k)); };
  pred.fill = [self, s](PrefixBitmap& bm) {
    const std::uint64_t n = bm.size();
    const auto vals = self.values(n, std::max(n, kDefaultPrefixCeiling));
    for (std::uint64_t k = 1; k <= n; ++k) {
      if (s.contains((*vals)[k - 1])) bm.set(k);
    }
  };
  return IndexSet::custom(std::move(pred));
}

std::string SequenceSpec::to_string() const {
  if (data_) return "prefix[" + std::to_string(data_->size()) + "]";
  std::string out = "[";
  for (const auto& p : pieces_) out += p.guard.to_string() + " -> " + p.formula.to_string() + "; ";
  out += "default -> " + fallback_.to_string() + "]";
  return out;
}

// ---------------------------------------------------------- perturbations

Perturbed perturb(const SequenceSpec& x, const IndexSet& k, const Formula& g) {
  std::vector<Piece> pieces;
  pieces.push_back({k, g});
  pieces.insert(pieces.end(), x.pieces().begin(), x.pieces().end());
  return {SequenceSpec(std::move(pieces), x.fallback(), x.name()), k};
}

Perturbed perturb(const SequenceSpec& x, const IndexSet& k, const SequenceSpec& source) {
  if (source.prefix_length()) throw PreconditionFailed("cannot splice an imported data prefix into a sequence");
  const auto guards = source.effective_guards();
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < guards.size(); ++i) {
    const Formula& f = i < source.pieces().size() ? source.pieces()[i].formula : source.fallback();
    pieces.push_back({simplify(intersect(k, guards[i])), f});
  }
  pieces.insert(pieces.end(), x.pieces().begin(), x.pieces().end());
  return {SequenceSpec(std::move(pieces), x.fallback(), x.name()), k};
}

// ------------------------------------------------------------ subsequences

SubsequenceView::SubsequenceView(SequenceSpec base, IndexSet selector, Tri infinite)
    : base_(std::move(base)), selector_(std::move(selector)), infinite_(infinite) {}

std::vector<std::uint64_t> SubsequenceView::indices(std::uint64_t n, std::uint64_t ceiling) const {
  std::vector<std::uint64_t> out;
  if (n == 0) return out;
  selector_.bitmap(n, ceiling)->for_each(n, [&](std::uint64_t j) { out.push_back(j); });
  return out;
}

std::vector<std::pair<std::uint64_t, double>> SubsequenceView::values(std::uint64_t n, std::uint64_t ceiling) const {
  std::vector<std::pair<std::uint64_t, double>> out;
  if (n == 0) return out;
  const auto vals = base_.values(n, ceiling);
  selector_.bitmap(n, ceiling)->for_each(n, [&](std::uint64_t j) { out.emplace_back(j, (*vals)[j - 1]); });
  return out;
}

SubsequenceView restrict(const SequenceSpec& x, const IndexSet& a) {
  const Tri fin = a.finite();
  if (fin == Tri::True) throw FiniteSelector("selector " + a.to_string() + " is finite");
  return SubsequenceView(x, a, fin == Tri::False ? Tri::True : Tri::Unknown);
}

SequenceSpec import_csv_prefix(const std::string& text, std::string name) {
  std::vector<double> vals;
  std::istringstream in(text);
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::size_t pos = 0;
    while (pos < line.size()) {
      const std::size_t end = std::min(line.find(',', pos), line.size());
      std::string cell = line.substr(pos, end - pos);
      const auto b = cell.find_first_not_of(" \t\r");
      if (b != std::string::npos) {
        cell = cell.substr(b, cell.find_last_not_of(" \t\r") - b + 1);
        char* stop = nullptr;
        const double v = std::strtod(cell.c_str(), &stop);
        if (stop != cell.c_str() + cell.size() || !std::isfinite(v)) {
          throw ParseError("bad number '" + cell + "'", line_start + pos);
        }
        vals.push_back(v);
      }
      pos = end + 1;
    }
  }
  if (vals.empty()) throw ParseError("no values in prefix data", 0);
  return SequenceSpec::from_prefix(std::move(vals), std::move(name));
}

}  // namespace istat
