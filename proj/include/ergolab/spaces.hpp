#pragma once

#include <optional>
#include <string>

#include "ergolab/rational.hpp"
#include "ergolab/step_function.hpp"

namespace ergolab::spaces {

/// Three-valued predicate outcome. "unknown" is an ordinary value reserved
/// for families whose criterion is not settled analytically; none of the
/// shipped families currently need it, but the plumbing keeps guesses out.
enum class Tri { yes, no, unknown };

std::string to_string(Tri t);

/// An Orlicz function from a closed parametric family. Every analytic query
/// (vanishing near zero, Delta_2 conditions, the slope limit at zero) is
/// answered exactly from the parameters, never by sampling.
class OrliczFunction {
 public:
  enum class Family { power, shifted_power, piecewise_power };

  /// Phi(u) = u^p, p >= 1.
  static OrliczFunction power(const Rational& p);
  /// Phi(u) = ((u - u0)_+)^p, u0 > 0, p >= 1. Vanishes on [0, u0].
  static OrliczFunction shifted_power(const Rational& u0, const Rational& p);
  /// Phi(u) = u^{p0} for u <= b, continued past b with matched first
  /// derivative and u^{pinf} growth. Convex for any p0, pinf >= 1.
  static OrliczFunction piecewise_power(const Rational& p0, const Rational& pinf, const Rational& b);

  Family family() const { return family_; }
  double value(double u) const;
  double inverse(double x) const;  // Phi^{-1} on [0, inf), right inverse

  /// Largest u0 with Phi == 0 on [0, u0]; zero iff Phi > 0 on (0, inf).
  Rational vanishes_below() const;
  bool delta2_at_zero() const;
  bool delta2_at_infinity() const;
  /// lim_{u -> 0+} Phi(u)/u (the limit exists by convexity; rational here).
  Rational slope_limit_at_zero() const;

  // parameter accessors for serialization
  const Rational& param_p() const { return p_; }
  const Rational& param_u0() const { return u0_; }
  const Rational& param_p0() const { return p0_; }
  const Rational& param_pinf() const { return pinf_; }
  const Rational& param_breakpoint() const { return b_; }

 private:
  OrliczFunction() = default;
  Family family_ = Family::power;
  Rational p_, u0_, p0_, pinf_, b_;
};

/// A concave phi: [0, inf) -> [0, inf) with phi(0) = 0, phi > 0 on (0, inf),
/// from a closed parametric family; limits are analytic.
class ConcavePhi {
 public:
  enum class Family { power, log1p, bounded, affine };

  /// phi(t) = t^gamma, 0 < gamma <= 1.
  static ConcavePhi power(const Rational& gamma);
  /// phi(t) = ln(1 + t).
  static ConcavePhi log1p();
  /// phi(t) = c t / (c + t); bounded with phi(inf) = c > 0.
  static ConcavePhi bounded(const Rational& c);
  /// phi(0) = 0 and phi(t) = a + b t for t > 0; a, b >= 0, not both zero.
  static ConcavePhi affine(const Rational& a, const Rational& b);

  Family family() const { return family_; }
  double value(double t) const;
  double derivative(double t) const;  // t > 0
  /// Exact value when the family is rational-valued (bounded, affine,
  /// power with gamma = 1).
  std::optional<Rational> value_exact(const Rational& t) const;

  Rational value_at_zero_plus() const;               // phi(+0)
  bool finite_at_infinity() const;                   // phi(inf) < inf
  std::optional<Rational> value_at_infinity() const; // set iff finite
  Rational slope_at_infinity() const;                // lim phi(t)/t
  bool slope_at_zero_infinite() const;               // lim_{t->0+} phi(t)/t = inf
  Rational slope_at_zero() const;                    // finite cases only

  const Rational& param_gamma() const { return gamma_; }
  const Rational& param_c() const { return c_; }
  const Rational& param_a() const { return a_; }
  const Rational& param_b() const { return b_; }

 private:
  ConcavePhi() = default;
  Family family_ = Family::power;
  Rational gamma_, c_, a_, b_;
};

/// Norm outcome: +infinity is an ordinary value; the exact rational is
/// carried alongside whenever the engine computed one.
struct NormValue {
  double value = 0.0;
  std::optional<Rational> exact;

  bool finite() const;
  static NormValue from_exact(Rational r);
  static NormValue from_double(double v);
  static NormValue from_extended(const ExtendedRational& e);
  static NormValue infinity();
  std::string str() const;  // decimal (12 digits), or "inf"
};

/// A tagged fully symmetric space with a norm engine and analytic
/// predicates: L^p, L^1+L^inf, L^1 cap L^inf, Orlicz, Lorentz, Marcinkiewicz.
class SpaceSpec {
 public:
  enum class Tag { lp, l1_plus_linf, l1_cap_linf, orlicz, lorentz, marcinkiewicz };

  static SpaceSpec lp(const Rational& p);  // 1 <= p < inf
  static SpaceSpec lp_infinity();
  static SpaceSpec l1_plus_linf();
  static SpaceSpec l1_cap_linf();
  static SpaceSpec orlicz(OrliczFunction phi);
  static SpaceSpec lorentz(ConcavePhi phi);
  static SpaceSpec marcinkiewicz(ConcavePhi phi);

  Tag tag() const { return tag_; }
  bool lp_is_infinity() const { return lp_infinite_; }
  const Rational& lp_exponent() const { return p_; }  // valid when tag == lp and finite
  const OrliczFunction& orlicz_function() const { return *orlicz_; }
  const ConcavePhi& concave_phi() const { return *phi_; }

  std::string describe() const;

 private:
  SpaceSpec() = default;
  Tag tag_ = Tag::l1_plus_linf;
  bool lp_infinite_ = false;
  Rational p_;
  std::optional<OrliczFunction> orlicz_;
  std::optional<ConcavePhi> phi_;
};

NormValue norm(const SpaceSpec& space, const StepFunction& f);
NormValue norm(const SpaceSpec& space, const DiscreteVector& f);

/// ||chi_(0,t]||_X, t > 0; quasi-concave in t.
NormValue fundamental_function(const SpaceSpec& space, const Rational& t);

/// Closed-form fundamental function (reference for the norm-engine route).
double fundamental_function_analytic(const SpaceSpec& space, double t);

/// alpha(X) = lim_{t->inf} phi_X(t)/t and beta(X) = phi_X(+0), evaluated
/// analytically from the family parameters (rational for every family here).
Rational alpha_limit(const SpaceSpec& space);
Rational beta_limit(const SpaceSpec& space);

/// Whether the indicator of an infinite-measure set belongs to X.
bool contains_indicator_of_infinity(const SpaceSpec& space);

/// X is contained in R_mu iff the indicator of infinity is not in X.
bool embeds_in_R_mu(const SpaceSpec& space);

bool embeds_in_L1(const SpaceSpec& space);    // alpha(X) > 0
bool embeds_in_Linf(const SpaceSpec& space);  // beta(X) > 0

Tri has_order_continuous_norm(const SpaceSpec& space);

/// Mean-ergodic-theorem predicate: yes iff the norm is order continuous and
/// alpha(X) = 0; no when either criterion definitively fails.
Tri met_predicate(const SpaceSpec& space);

/// Predicate with the supporting limits, for reporting.
struct MetReport {
  Tri met = Tri::unknown;
  Tri order_continuous = Tri::unknown;
  Rational alpha;
  Rational beta;
  bool contains_indicator = false;
};

MetReport met_report(const SpaceSpec& space);

}  // namespace ergolab::spaces
