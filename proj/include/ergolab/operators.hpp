#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ergolab/rational.hpp"
#include "ergolab/step_function.hpp"

namespace ergolab::ops {

/// Right translation by h on (0, infinity): (Tf)(t) = f(t - h) for t > h,
/// zero on (0, h]. Measure preserving, hence a Dunford-Schwartz operator.
struct TranslationShift {
  Rational h;  // > 0
};

/// Coordinate shift on sequences: T(x1, x2, ...) = (0, x1, x2, ...).
struct SequenceShift {};

/// A finite substochastic kernel on weighted atoms. Entries may be signed.
/// Dunford-Schwartz iff every weighted column sum of |A| is at most the
/// column weight and every row sum of |A| is at most one.
class KernelOperator {
 public:
  KernelOperator(std::vector<std::vector<Rational>> matrix, std::vector<Rational> weights);

  static KernelOperator identity(std::size_t n);
  static KernelOperator permutation(const std::vector<std::size_t>& sigma, std::vector<Rational> weights);

  std::size_t size() const { return weights_.size(); }
  const std::vector<std::vector<Rational>>& matrix() const { return matrix_; }
  const std::vector<Rational>& weights() const { return weights_; }

  std::vector<Rational> apply(const std::vector<Rational>& x) const;
  KernelOperator compose(const KernelOperator& other) const;  // this * other
  KernelOperator modulus() const;                             // entrywise |A|
  bool nonnegative() const;

  friend bool operator==(const KernelOperator& a, const KernelOperator& b) {
    return a.matrix_ == b.matrix_ && a.weights_ == b.weights_;
  }

 private:
  std::vector<std::vector<Rational>> matrix_;
  std::vector<Rational> weights_;
};

/// Composition with a map on atoms: (Tf)(i) = f(sigma(i)), 0-based sigma.
struct CompositionOperator {
  std::vector<std::size_t> map;
  std::vector<Rational> weights;

  KernelOperator to_kernel() const;
};

using DSOperator = std::variant<TranslationShift, SequenceShift, KernelOperator, CompositionOperator>;

std::string operator_kind(const DSOperator& op);

StepFunction apply(const DSOperator& op, const StepFunction& f);
DiscreteVector apply(const DSOperator& op, const DiscreteVector& f);

/// Contraction certificate: exact column/row sum checks for kernels and
/// compositions; shifts are certified analytically. Margins are the minimal
/// slacks (negative on failure).
struct DsCertificate {
  bool passed = false;
  bool analytic = false;
  Rational l1_margin;
  Rational linf_margin;
  std::string witness;  // failing row/column when not passed
};

DsCertificate verify_ds(const DSOperator& op);

/// M_n(T) f = (1/n) (f + Tf + ... + T^{n-1} f), exact.
StepFunction cesaro_average(const DSOperator& op, const StepFunction& f, int n);
DiscreteVector cesaro_average(const DSOperator& op, const DiscreteVector& f, int n);
std::vector<Rational> cesaro_average(const KernelOperator& op, const std::vector<Rational>& f, int n);

/// Incremental Cesaro averages M_1, M_2, ... for a fixed (T, f); keeps only
/// the running orbit sum, so n steps cost n applications of T. Owns its copy
/// of the operator.
template <class F>
class CesaroSequence {
 public:
  CesaroSequence(DSOperator op, F f)
      : op_(std::move(op)), power_(f), sum_(std::move(f)), n_(1) {}

  int n() const { return n_; }
  F average() const;
  void advance();  // n -> n + 1

 private:
  DSOperator op_;
  F power_;  // T^{n-1} f
  F sum_;    // f + ... + T^{n-1} f
  int n_;
};

/// sup_{1 <= n <= max_n} |M_n(T) f| pointwise; non-decreasing in max_n.
StepFunction maximal_function(const DSOperator& op, const StepFunction& f, int max_n);
DiscreteVector maximal_function(const DSOperator& op, const DiscreteVector& f, int max_n);
std::vector<Rational> maximal_function(const KernelOperator& op, const std::vector<Rational>& f, int max_n);

/// Signed truncated maximal function sup_{1 <= n <= max_n} M_n(T) f (no
/// absolute value); this is the object whose positivity set enters the
/// maximal ergodic inequality of Hopf type.
std::vector<Rational> maximal_function_signed(const KernelOperator& op, const std::vector<Rational>& f,
                                              int max_n);

/// Entrywise absolute value of a kernel. Kernels only; shifts are already
/// positive and are rejected.
DSOperator linear_modulus(const DSOperator& op);

/// Limit of the Cesaro averages. Exact when available: shifts project
/// everything in R_mu to zero; kernels whose power sequence becomes periodic
/// are averaged over one period. Otherwise the residual-doubling estimate is
/// returned and flagged, never silently promoted to a limit.
template <class F>
struct ProjectionEstimate {
  F value{};
  int n_used = 0;
  double residual = 0.0;      // reference-norm residual ||M_{2n} f - M_n f||
  bool exact = false;
  bool converged = false;
  std::string norm_tag = "l1+linf";
};

ProjectionEstimate<StepFunction> projection(const DSOperator& op, const StepFunction& f, double tol,
                                            int n_cap);
ProjectionEstimate<DiscreteVector> projection(const DSOperator& op, const DiscreteVector& f, double tol,
                                              int n_cap);
ProjectionEstimate<std::vector<Rational>> projection(const KernelOperator& op,
                                                     const std::vector<Rational>& f, double tol,
                                                     int n_cap);

/// The exact Cesaro-limit matrix of a kernel whose powers are eventually
/// periodic (average over one period); nullopt when no period shows up
/// within the power cap.
std::optional<KernelOperator> periodic_cesaro_limit(const KernelOperator& op, int power_cap = 256);

}  // namespace ergolab::ops
