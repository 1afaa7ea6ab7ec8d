#include "ergolab/step_function.hpp"

#include <algorithm>
#include <stdexcept>

namespace ergolab {

namespace {

// Walks the merged breakpoint grid of f and g and combines interval values.
template <class Op>
StepFunction zip_with(const StepFunction& f, const StepFunction& g, Op&& op) {
  const auto& fb = f.breakpoints();
  const auto& gb = g.breakpoints();
  std::vector<Rational> breaks;
  std::vector<Rational> values;
  breaks.reserve(fb.size() + gb.size());
  values.reserve(fb.size() + gb.size());
  std::size_t i = 0, j = 0;
  while (i < fb.size() || j < gb.size()) {
    const Rational fv = i < fb.size() ? f.values()[i] : f.tail_value();
    const Rational gv = j < gb.size() ? g.values()[j] : g.tail_value();
    Rational x;
    if (j >= gb.size() || (i < fb.size() && fb[i] <= gb[j])) {
      x = fb[i];
      if (j < gb.size() && gb[j] == fb[i]) ++j;
      ++i;
    } else {
      x = gb[j];
      ++j;
    }
    breaks.push_back(x);
    values.push_back(op(fv, gv));
  }
  return StepFunction(std::move(breaks), std::move(values), op(f.tail_value(), g.tail_value()));
}

}  // namespace

StepFunction::StepFunction(std::vector<Rational> breakpoints, std::vector<Rational> values, Rational tail)
    : breaks_(std::move(breakpoints)), values_(std::move(values)), tail_(std::move(tail)) {
  if (breaks_.size() != values_.size())
    throw std::invalid_argument("step function: breakpoint/value count mismatch");
  Rational prev(0);
  for (const auto& x : breaks_) {
    if (x <= prev) throw std::invalid_argument("step function: breakpoints must be positive and strictly increasing");
    prev = x;
  }
  canonicalize();
}

void StepFunction::canonicalize() {
  std::size_t out = 0;
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (out > 0 && values_[i] == values_[out - 1]) {
      breaks_[out - 1] = breaks_[i];  // extend previous run
    } else {
      breaks_[out] = breaks_[i];
      values_[out] = values_[i];
      ++out;
    }
  }
  breaks_.resize(out);
  values_.resize(out);
  while (!values_.empty() && values_.back() == tail_) {
    breaks_.pop_back();
    values_.pop_back();
  }
}

StepFunction StepFunction::constant(const Rational& c) {
  StepFunction f;
  f.tail_ = c;
  return f;
}

StepFunction StepFunction::indicator(const Rational& a, const Rational& b, const Rational& v) {
  if (a < 0 || b <= a) throw std::invalid_argument("indicator: need 0 <= a < b");
  std::vector<std::tuple<Rational, Rational, Rational>> piece{{a, b, v}};
  return from_pieces(piece, Rational(0));
}

StepFunction StepFunction::from_pieces(const std::vector<std::tuple<Rational, Rational, Rational>>& pieces,
                                       const Rational& tail) {
  std::vector<Rational> breaks;
  std::vector<Rational> values;
  Rational cursor(0);
  for (const auto& [a, b, v] : pieces) {
    if (a < 0 || b <= a) throw std::invalid_argument("step function piece with empty or negative interval");
    if (a < cursor) throw std::invalid_argument("step function pieces must be sorted and disjoint");
    if (a > cursor) {  // gap carries value 0
      breaks.push_back(a);
      values.push_back(Rational(0));
    }
    breaks.push_back(b);
    values.push_back(v);
    cursor = b;
  }
  return StepFunction(std::move(breaks), std::move(values), tail);
}

Rational StepFunction::value_at(const Rational& t) const {
  if (t <= 0) throw std::domain_error("step function evaluated at t <= 0");
  auto it = std::lower_bound(breaks_.begin(), breaks_.end(), t);
  if (it == breaks_.end()) return tail_;
  return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

StepFunction add(const StepFunction& f, const StepFunction& g) {
  return zip_with(f, g, [](const Rational& a, const Rational& b) { return Rational(a + b); });
}

StepFunction subtract(const StepFunction& f, const StepFunction& g) {
  return zip_with(f, g, [](const Rational& a, const Rational& b) { return Rational(a - b); });
}

StepFunction scale(const StepFunction& f, const Rational& c) {
  std::vector<Rational> values;
  values.reserve(f.values().size());
  for (const auto& v : f.values()) values.push_back(v * c);
  return StepFunction(f.breakpoints(), std::move(values), f.tail_value() * c);
}

StepFunction abs(const StepFunction& f) {
  std::vector<Rational> values;
  values.reserve(f.values().size());
  for (const auto& v : f.values()) values.push_back(rational_abs(v));
  return StepFunction(f.breakpoints(), std::move(values), rational_abs(f.tail_value()));
}

StepFunction pointwise_max(const StepFunction& f, const StepFunction& g) {
  return zip_with(f, g, [](const Rational& a, const Rational& b) { return rational_max(a, b); });
}

StepFunction pointwise_min(const StepFunction& f, const StepFunction& g) {
  return zip_with(f, g, [](const Rational& a, const Rational& b) { return rational_min(a, b); });
}

Rational partial_integral(const StepFunction& f, const Rational& s) {
  if (s < 0) throw std::domain_error("partial integral over (0, s] needs s >= 0");
  Rational acc(0);
  Rational prev(0);
  const auto& breaks = f.breakpoints();
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (s <= prev) return acc;
    const Rational hi = rational_min(breaks[i], s);
    acc += f.values()[i] * (hi - prev);
    prev = breaks[i];
  }
  if (s > prev) acc += f.tail_value() * (s - prev);
  return acc;
}

Rational sup_norm(const StepFunction& f) {
  Rational m = rational_abs(f.tail_value());
  for (const auto& v : f.values()) m = rational_max(m, rational_abs(v));
  return m;
}

ExtendedRational l1_norm(const StepFunction& f) {
  if (f.tail_value() != 0) return ExtendedRational::infinity();
  Rational acc(0);
  Rational prev(0);
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    acc += rational_abs(f.values()[i]) * (f.breakpoints()[i] - prev);
    prev = f.breakpoints()[i];
  }
  return ExtendedRational(acc);
}

ExtendedRational distribution(const StepFunction& f, const Rational& lambda) {
  if (lambda < 0) throw std::domain_error("distribution threshold must be nonnegative");
  if (rational_abs(f.tail_value()) > lambda) return ExtendedRational::infinity();
  Rational acc(0);
  Rational prev(0);
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    if (rational_abs(f.values()[i]) > lambda) acc += f.breakpoints()[i] - prev;
    prev = f.breakpoints()[i];
  }
  return ExtendedRational(acc);
}

StepFunction rearrangement(const StepFunction& f) {
  const Rational c = rational_abs(f.tail_value());
  std::vector<std::pair<Rational, Rational>> runs;  // (|value|, length), |value| > c
  runs.reserve(f.piece_count());
  Rational prev(0);
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    const Rational av = rational_abs(f.values()[i]);
    if (av > c) runs.emplace_back(av, f.breakpoints()[i] - prev);
    prev = f.breakpoints()[i];
  }
  std::sort(runs.begin(), runs.end(),
            [](const auto& a, const auto& b) { return b.first < a.first; });
  std::vector<Rational> breaks;
  std::vector<Rational> values;
  breaks.reserve(runs.size());
  values.reserve(runs.size());
  Rational cum(0);
  for (auto& [v, len] : runs) {
    cum += len;
    breaks.push_back(cum);
    values.push_back(std::move(v));
  }
  return StepFunction(std::move(breaks), std::move(values), c);
}

bool submajorize(const StepFunction& g, const StepFunction& f) {
  const StepFunction gr = rearrangement(g);
  const StepFunction fr = rearrangement(f);
  // Merge breakpoints; compare exact prefix integrals there. Both prefix
  // integrals are piecewise linear with kinks only at their own breakpoints,
  // so this plus the tail-slope comparison is a complete check.
  std::vector<Rational> grid = gr.breakpoints();
  grid.insert(grid.end(), fr.breakpoints().begin(), fr.breakpoints().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (const auto& s : grid) {
    if (partial_integral(gr, s) > partial_integral(fr, s)) return false;
  }
  return gr.tail_value() <= fr.tail_value();
}

bool in_R_mu(const StepFunction& f) { return f.tail_value() == 0; }

std::pair<StepFunction, StepFunction> truncation_split(const StepFunction& f, const Rational& eps) {
  if (eps <= 0) throw std::domain_error("truncation level must be positive");
  if (!in_R_mu(f))
    throw std::invalid_argument("truncation split requires membership in R_mu (rearrangement vanishing at infinity)");
  std::vector<Rational> g_values;
  g_values.reserve(f.piece_count());
  for (const auto& v : f.values()) g_values.push_back(rational_abs(v) > eps ? v : Rational(0));
  StepFunction g(f.breakpoints(), std::move(g_values), Rational(0));
  StepFunction h = subtract(f, g);
  return {std::move(g), std::move(h)};
}

ExtendedRational measure_distance(const StepFunction& f, const StepFunction& g, const Rational& delta) {
  if (delta < 0) throw std::domain_error("measure distance gauge must be nonnegative");
  return distribution(subtract(f, g), delta);
}

ExtendedRational LevelSet::measure() const {
  if (unbounded_tail) return ExtendedRational::infinity();
  Rational acc(0);
  for (const auto& [a, b] : intervals) acc += b - a;
  return ExtendedRational(acc);
}

LevelSet super_level_set(const StepFunction& f, const Rational& lambda) {
  if (lambda < 0) throw std::domain_error("level must be nonnegative");
  LevelSet out;
  out.unbounded_tail = rational_abs(f.tail_value()) > lambda;
  Rational prev(0);
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    if (rational_abs(f.values()[i]) > lambda) {
      if (!out.intervals.empty() && out.intervals.back().second == prev) {
        out.intervals.back().second = f.breakpoints()[i];
      } else {
        out.intervals.emplace_back(prev, f.breakpoints()[i]);
      }
    }
    prev = f.breakpoints()[i];
  }
  return out;
}

DiscreteVector::DiscreteVector(Rational weight, std::vector<Rational> entries, Rational tail)
    : weight_(std::move(weight)), entries_(std::move(entries)), tail_(std::move(tail)) {
  if (weight_ <= 0) throw std::invalid_argument("atom weight must be positive");
  canonicalize();
}

void DiscreteVector::canonicalize() {
  while (!entries_.empty() && entries_.back() == tail_) entries_.pop_back();
}

DiscreteVector DiscreteVector::basis(std::size_t k, const Rational& weight) {
  if (k == 0) throw std::invalid_argument("basis index is 1-based");
  std::vector<Rational> e(k, Rational(0));
  e[k - 1] = 1;
  return DiscreteVector(weight, std::move(e));
}

const Rational& DiscreteVector::entry(std::size_t k) const {
  if (k == 0) throw std::invalid_argument("entry index is 1-based");
  return k <= entries_.size() ? entries_[k - 1] : tail_;
}

StepFunction DiscreteVector::to_step() const {
  std::vector<Rational> breaks;
  std::vector<Rational> values;
  breaks.reserve(entries_.size());
  values.reserve(entries_.size());
  Rational cum(0);
  for (const auto& e : entries_) {
    cum += weight_;
    breaks.push_back(cum);
    values.push_back(e);
  }
  return StepFunction(std::move(breaks), std::move(values), tail_);
}

namespace {

template <class Op>
DiscreteVector zip_discrete(const DiscreteVector& f, const DiscreteVector& g, Op&& op) {
  if (f.weight() != g.weight()) throw std::invalid_argument("discrete vectors live on different atom weights");
  const std::size_t n = std::max(f.size(), g.size());
  std::vector<Rational> out;
  out.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) out.push_back(op(f.entry(k), g.entry(k)));
  return DiscreteVector(f.weight(), std::move(out), op(f.tail_value(), g.tail_value()));
}

}  // namespace

DiscreteVector add(const DiscreteVector& f, const DiscreteVector& g) {
  return zip_discrete(f, g, [](const Rational& a, const Rational& b) { return Rational(a + b); });
}

DiscreteVector subtract(const DiscreteVector& f, const DiscreteVector& g) {
  return zip_discrete(f, g, [](const Rational& a, const Rational& b) { return Rational(a - b); });
}

DiscreteVector scale(const DiscreteVector& f, const Rational& c) {
  std::vector<Rational> out;
  out.reserve(f.size());
  for (const auto& e : f.entries()) out.push_back(e * c);
  return DiscreteVector(f.weight(), std::move(out), f.tail_value() * c);
}

DiscreteVector abs(const DiscreteVector& f) {
  std::vector<Rational> out;
  out.reserve(f.size());
  for (const auto& e : f.entries()) out.push_back(rational_abs(e));
  return DiscreteVector(f.weight(), std::move(out), rational_abs(f.tail_value()));
}

DiscreteVector pointwise_max(const DiscreteVector& f, const DiscreteVector& g) {
  return zip_discrete(f, g, [](const Rational& a, const Rational& b) { return rational_max(a, b); });
}

ExtendedRational distribution(const DiscreteVector& f, const Rational& lambda) {
  if (lambda < 0) throw std::domain_error("distribution threshold must be nonnegative");
  if (rational_abs(f.tail_value()) > lambda) return ExtendedRational::infinity();
  Rational acc(0);
  for (const auto& e : f.entries())
    if (rational_abs(e) > lambda) acc += f.weight();
  return ExtendedRational(acc);
}

StepFunction rearrangement(const DiscreteVector& f) { return rearrangement(f.to_step()); }

bool in_R_mu(const DiscreteVector& f) { return f.tail_value() == 0; }

Rational sup_norm(const DiscreteVector& f) {
  Rational m = rational_abs(f.tail_value());
  for (const auto& e : f.entries()) m = rational_max(m, rational_abs(e));
  return m;
}

ExtendedRational l1_norm(const DiscreteVector& f) {
  if (f.tail_value() != 0) return ExtendedRational::infinity();
  Rational acc(0);
  for (const auto& e : f.entries()) acc += rational_abs(e);
  return ExtendedRational(acc * f.weight());
}

StepFunction step_from_weighted(const std::vector<Rational>& values, const std::vector<Rational>& weights) {
  if (values.size() != weights.size()) throw std::invalid_argument("weighted step: size mismatch");
  std::vector<Rational> breaks;
  std::vector<Rational> vals;
  breaks.reserve(values.size());
  vals.reserve(values.size());
  Rational cum(0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] <= 0) throw std::invalid_argument("weighted step: weights must be positive");
    cum += weights[i];
    breaks.push_back(cum);
    vals.push_back(values[i]);
  }
  return StepFunction(std::move(breaks), std::move(vals), Rational(0));
}

DistributionFunction DistributionFunction::of(const StepFunction& f) {
  DistributionFunction d;
  d.inf_level_ = rational_abs(f.tail_value());
  std::vector<std::pair<Rational, Rational>> runs;
  Rational prev(0);
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    const Rational av = rational_abs(f.values()[i]);
    if (av > d.inf_level_) runs.emplace_back(av, f.breakpoints()[i] - prev);
    prev = f.breakpoints()[i];
  }
  std::sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) { return b.first < a.first; });
  Rational cum(0);
  for (auto& [v, len] : runs) {
    cum += len;
    if (!d.levels_.empty() && d.levels_.back() == v) {
      d.measures_.back() = cum;
    } else {
      d.levels_.push_back(std::move(v));
      d.measures_.push_back(cum);
    }
  }
  return d;
}

DistributionFunction DistributionFunction::of(const DiscreteVector& f) { return of(f.to_step()); }

ExtendedRational DistributionFunction::eval(const Rational& lambda) const {
  if (lambda < 0) throw std::domain_error("distribution threshold must be nonnegative");
  if (lambda < inf_level_) return ExtendedRational::infinity();
  // measure of {|f| > lambda} = cumulative length of levels strictly above lambda
  Rational acc(0);
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i] > lambda) {
      acc = measures_[i];
    } else {
      break;
    }
  }
  return ExtendedRational(acc);
}

}  // namespace ergolab
