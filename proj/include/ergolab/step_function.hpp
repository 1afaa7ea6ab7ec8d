#pragma once

#include <cstddef>
#include <tuple>
#include <utility>
#include <vector>

#include "ergolab/rational.hpp"

namespace ergolab {

/// A finitely-piecewise-constant function on (0, infinity).
///
/// The function equals values()[i] on the half-open interval
/// (x_{i-1}, x_i] where x_0 = 0 and x_1 < x_2 < ... are breakpoints(),
/// and equals tail_value() on (x_m, infinity). All intervals are (a, b];
/// the boundary convention is fixed once and never affects a computed
/// measure. Canonical form: adjacent equal values merged, trailing values
/// equal to the tail dropped, no zero-length pieces.
class StepFunction {
 public:
  StepFunction() : tail_(0) {}
  StepFunction(std::vector<Rational> breakpoints, std::vector<Rational> values, Rational tail);

  static StepFunction constant(const Rational& c);
  /// chi_(a,b] scaled by v (v defaults to 1). Requires 0 <= a < b.
  static StepFunction indicator(const Rational& a, const Rational& b, const Rational& v = Rational(1));
  /// Builds from explicit (left, right, value) pieces; gaps are filled with
  /// zero. Pieces must be sorted and disjoint. The tail applies beyond the
  /// last right endpoint.
  static StepFunction from_pieces(const std::vector<std::tuple<Rational, Rational, Rational>>& pieces,
                                  const Rational& tail);

  const std::vector<Rational>& breakpoints() const { return breaks_; }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& tail_value() const { return tail_; }
  std::size_t piece_count() const { return breaks_.size(); }
  bool is_zero() const { return breaks_.empty() && tail_ == 0; }

  /// Value at t > 0 (throws std::domain_error for t <= 0).
  Rational value_at(const Rational& t) const;

  friend bool operator==(const StepFunction& a, const StepFunction& b) {
    return a.breaks_ == b.breaks_ && a.values_ == b.values_ && a.tail_ == b.tail_;
  }
  friend bool operator!=(const StepFunction& a, const StepFunction& b) { return !(a == b); }

 private:
  void canonicalize();

  std::vector<Rational> breaks_;
  std::vector<Rational> values_;
  Rational tail_;
};

StepFunction add(const StepFunction& f, const StepFunction& g);
StepFunction subtract(const StepFunction& f, const StepFunction& g);
StepFunction scale(const StepFunction& f, const Rational& c);
StepFunction abs(const StepFunction& f);
StepFunction pointwise_max(const StepFunction& f, const StepFunction& g);
StepFunction pointwise_min(const StepFunction& f, const StepFunction& g);

/// Exact signed integral over (0, s], s >= 0.
Rational partial_integral(const StepFunction& f, const Rational& s);

/// ess sup |f| (exact).
Rational sup_norm(const StepFunction& f);

/// integral of |f|; infinite iff the tail value is nonzero.
ExtendedRational l1_norm(const StepFunction& f);

/// mu{ |f| > lambda }, exact; infinite iff lambda < |tail|. lambda >= 0.
ExtendedRational distribution(const StepFunction& f, const Rational& lambda);

/// The non-increasing rearrangement f*. Equimeasurable with |f|; the output
/// tail equals |tail of f| (values below it are absorbed).
StepFunction rearrangement(const StepFunction& f);

/// Hardy-Littlewood submajorization: int_0^s g* <= int_0^s f* for all s > 0.
/// Exact: both prefix integrals are piecewise linear, so comparison at the
/// merged breakpoints plus the tail-slope comparison decides.
bool submajorize(const StepFunction& g, const StepFunction& f);

/// f* vanishes at infinity, i.e. every super-level set has finite measure.
bool in_R_mu(const StepFunction& f);

/// Splits f = g + h with g = f on {|f| > eps} and |h| <= eps everywhere.
/// Requires eps > 0 and in_R_mu(f); then g has finite support and finite
/// L1 norm.
std::pair<StepFunction, StepFunction> truncation_split(const StepFunction& f, const Rational& eps);

/// mu{ |f - g| > delta }, the measure-topology gauge. delta >= 0.
ExtendedRational measure_distance(const StepFunction& f, const StepFunction& g, const Rational& delta);

/// The super-level set {|f| > lambda} as a union of disjoint intervals.
struct LevelSet {
  std::vector<std::pair<Rational, Rational>> intervals;  // (a, b] pieces, disjoint, sorted
  bool unbounded_tail = false;                           // |tail| > lambda

  ExtendedRational measure() const;
};

LevelSet super_level_set(const StepFunction& f, const Rational& lambda);

/// A finitely supported sequence (plus constant tail) on equal-measure atoms.
/// Atom k occupies measure `weight`; the k-th entry is the value on atom k.
class DiscreteVector {
 public:
  DiscreteVector() : weight_(1), tail_(0) {}
  DiscreteVector(Rational weight, std::vector<Rational> entries, Rational tail = Rational(0));

  static DiscreteVector basis(std::size_t k, const Rational& weight = Rational(1));  // e_k (1-based)

  const Rational& weight() const { return weight_; }
  const std::vector<Rational>& entries() const { return entries_; }
  const Rational& tail_value() const { return tail_; }
  std::size_t size() const { return entries_.size(); }

  /// Entry at 1-based index k; entries beyond the stored prefix equal the tail.
  const Rational& entry(std::size_t k) const;

  /// The standard identification with a step function on (0, infinity):
  /// atom k maps to ((k-1) w, k w].
  StepFunction to_step() const;

  friend bool operator==(const DiscreteVector& a, const DiscreteVector& b) {
    return a.weight_ == b.weight_ && a.entries_ == b.entries_ && a.tail_ == b.tail_;
  }
  friend bool operator!=(const DiscreteVector& a, const DiscreteVector& b) { return !(a == b); }

 private:
  void canonicalize();  // drop trailing entries equal to the tail

  Rational weight_;
  std::vector<Rational> entries_;
  Rational tail_;
};

DiscreteVector add(const DiscreteVector& f, const DiscreteVector& g);
DiscreteVector subtract(const DiscreteVector& f, const DiscreteVector& g);
DiscreteVector scale(const DiscreteVector& f, const Rational& c);
DiscreteVector abs(const DiscreteVector& f);
DiscreteVector pointwise_max(const DiscreteVector& f, const DiscreteVector& g);

ExtendedRational distribution(const DiscreteVector& f, const Rational& lambda);
StepFunction rearrangement(const DiscreteVector& f);
bool in_R_mu(const DiscreteVector& f);
Rational sup_norm(const DiscreteVector& f);
ExtendedRational l1_norm(const DiscreteVector& f);

/// Step function for a finite vector on atoms of individual weights w_i > 0
/// (atom i maps to an interval of length w_i). Used by kernel operators,
/// where the weights define the measure.
StepFunction step_from_weighted(const std::vector<Rational>& values, const std::vector<Rational>& weights);

/// A distribution function lambda -> mu{|f| > lambda}: non-increasing,
/// right-continuous, infinite exactly below |tail|.
class DistributionFunction {
 public:
  static DistributionFunction of(const StepFunction& f);
  static DistributionFunction of(const DiscreteVector& f);

  ExtendedRational eval(const Rational& lambda) const;

  /// Distinct jump levels in decreasing order (all > infinite_below()).
  const std::vector<Rational>& levels() const { return levels_; }
  /// measure_at(i) = mu{|f| >= levels()[i]} = value on [levels_[i+1], levels_[i]).
  const std::vector<Rational>& measures() const { return measures_; }
  const Rational& infinite_below() const { return inf_level_; }

 private:
  Rational inf_level_;  // |tail|
  std::vector<Rational> levels_;
  std::vector<Rational> measures_;
};

}  // namespace ergolab
