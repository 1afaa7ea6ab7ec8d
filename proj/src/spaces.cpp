#include "ergolab/spaces.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ergolab::spaces {

std::string to_string(Tri t) {
  switch (t) {
    case Tri::yes: return "true";
    case Tri::no: return "false";
    default: return "unknown";
  }
}

// ---------------------------------------------------------------------------
// OrliczFunction

OrliczFunction OrliczFunction::power(const Rational& p) {
  if (p < 1) throw std::invalid_argument("Orlicz power exponent must be >= 1");
  OrliczFunction f;
  f.family_ = Family::power;
  f.p_ = p;
  return f;
}

OrliczFunction OrliczFunction::shifted_power(const Rational& u0, const Rational& p) {
  if (u0 <= 0) throw std::invalid_argument("shifted power offset must be positive");
  if (p < 1) throw std::invalid_argument("shifted power exponent must be >= 1");
  OrliczFunction f;
  f.family_ = Family::shifted_power;
  f.u0_ = u0;
  f.p_ = p;
  return f;
}

OrliczFunction OrliczFunction::piecewise_power(const Rational& p0, const Rational& pinf, const Rational& b) {
  if (p0 < 1 || pinf < 1) throw std::invalid_argument("piecewise power exponents must be >= 1");
  if (b <= 0) throw std::invalid_argument("piecewise power breakpoint must be positive");
  OrliczFunction f;
  f.family_ = Family::piecewise_power;
  f.p0_ = p0;
  f.pinf_ = pinf;
  f.b_ = b;
  return f;
}

double OrliczFunction::value(double u) const {
  if (u <= 0) return 0.0;
  switch (family_) {
    case Family::power:
      return std::pow(u, to_double(p_));
    case Family::shifted_power: {
      const double s = u - to_double(u0_);
      return s <= 0 ? 0.0 : std::pow(s, to_double(p_));
    }
    case Family::piecewise_power: {
      const double b = to_double(b_);
      const double p0 = to_double(p0_);
      const double pinf = to_double(pinf_);
      if (u <= b) return std::pow(u, p0);
      // first derivative matched at b, then u^{pinf} growth
      return std::pow(b, p0) +
             (p0 / pinf) * std::pow(b, p0 - pinf) * (std::pow(u, pinf) - std::pow(b, pinf));
    }
  }
  return 0.0;
}

double OrliczFunction::inverse(double x) const {
  if (x <= 0) return to_double(vanishes_below());
  switch (family_) {
    case Family::power:
      return std::pow(x, 1.0 / to_double(p_));
    case Family::shifted_power:
      return to_double(u0_) + std::pow(x, 1.0 / to_double(p_));
    case Family::piecewise_power: {
      const double b = to_double(b_);
      const double p0 = to_double(p0_);
      const double pinf = to_double(pinf_);
      const double xb = std::pow(b, p0);
      if (x <= xb) return std::pow(x, 1.0 / p0);
      return std::pow(std::pow(b, pinf) + (x - xb) * (pinf / p0) * std::pow(b, pinf - p0), 1.0 / pinf);
    }
  }
  return 0.0;
}

Rational OrliczFunction::vanishes_below() const {
  return family_ == Family::shifted_power ? u0_ : Rational(0);
}

bool OrliczFunction::delta2_at_zero() const {
  // Power growth always doubles within a constant. A function vanishing on a
  // neighborhood of zero fails: Phi(2u) > 0 = k Phi(u) just below the kink.
  return family_ != Family::shifted_power;
}

bool OrliczFunction::delta2_at_infinity() const { return true; }

Rational OrliczFunction::slope_limit_at_zero() const {
  switch (family_) {
    case Family::power:
      return p_ == 1 ? Rational(1) : Rational(0);
    case Family::shifted_power:
      return Rational(0);
    case Family::piecewise_power:
      return p0_ == 1 ? Rational(1) : Rational(0);
  }
  return Rational(0);
}

// ---------------------------------------------------------------------------
// ConcavePhi

ConcavePhi ConcavePhi::power(const Rational& gamma) {
  if (gamma <= 0 || gamma > 1) throw std::invalid_argument("concave power exponent must lie in (0, 1]");
  ConcavePhi f;
  f.family_ = Family::power;
  f.gamma_ = gamma;
  return f;
}

ConcavePhi ConcavePhi::log1p() {
  ConcavePhi f;
  f.family_ = Family::log1p;
  return f;
}

ConcavePhi ConcavePhi::bounded(const Rational& c) {
  if (c <= 0) throw std::invalid_argument("bounded phi level must be positive");
  ConcavePhi f;
  f.family_ = Family::bounded;
  f.c_ = c;
  return f;
}

ConcavePhi ConcavePhi::affine(const Rational& a, const Rational& b) {
  if (a < 0 || b < 0 || (a == 0 && b == 0))
    throw std::invalid_argument("affine phi needs a, b >= 0, not both zero");
  ConcavePhi f;
  f.family_ = Family::affine;
  f.a_ = a;
  f.b_ = b;
  return f;
}

double ConcavePhi::value(double t) const {
  if (t <= 0) return 0.0;
  switch (family_) {
    case Family::power: return std::pow(t, to_double(gamma_));
    case Family::log1p: return std::log1p(t);
    case Family::bounded: {
      const double c = to_double(c_);
      return c * t / (c + t);
    }
    case Family::affine: return to_double(a_) + to_double(b_) * t;
  }
  return 0.0;
}

double ConcavePhi::derivative(double t) const {
  switch (family_) {
    case Family::power: return to_double(gamma_) * std::pow(t, to_double(gamma_) - 1.0);
    case Family::log1p: return 1.0 / (1.0 + t);
    case Family::bounded: {
      const double c = to_double(c_);
      return c * c / ((c + t) * (c + t));
    }
    case Family::affine: return to_double(b_);
  }
  return 0.0;
}

std::optional<Rational> ConcavePhi::value_exact(const Rational& t) const {
  if (t <= 0) return Rational(0);
  switch (family_) {
    case Family::power:
      if (gamma_ == 1) return t;
      return std::nullopt;
    case Family::log1p: return std::nullopt;
    case Family::bounded: return Rational(c_ * t / (c_ + t));
    case Family::affine: return Rational(a_ + b_ * t);
  }
  return std::nullopt;
}

Rational ConcavePhi::value_at_zero_plus() const {
  return family_ == Family::affine ? a_ : Rational(0);
}

bool ConcavePhi::finite_at_infinity() const {
  if (family_ == Family::bounded) return true;
  return family_ == Family::affine && b_ == 0;
}

std::optional<Rational> ConcavePhi::value_at_infinity() const {
  if (family_ == Family::bounded) return c_;
  if (family_ == Family::affine && b_ == 0) return a_;
  return std::nullopt;
}

Rational ConcavePhi::slope_at_infinity() const {
  switch (family_) {
    case Family::power: return gamma_ == 1 ? Rational(1) : Rational(0);
    case Family::log1p: return Rational(0);
    case Family::bounded: return Rational(0);
    case Family::affine: return b_;
  }
  return Rational(0);
}

bool ConcavePhi::slope_at_zero_infinite() const {
  if (family_ == Family::power) return gamma_ < 1;
  return family_ == Family::affine && a_ > 0;
}

Rational ConcavePhi::slope_at_zero() const {
  if (slope_at_zero_infinite()) throw std::logic_error("slope at zero is infinite for this family");
  switch (family_) {
    case Family::power: return Rational(1);  // gamma == 1 here
    case Family::log1p: return Rational(1);
    case Family::bounded: return Rational(1);
    case Family::affine: return b_;  // a == 0 here
  }
  return Rational(1);
}

// ---------------------------------------------------------------------------
// NormValue

bool NormValue::finite() const { return std::isfinite(value); }

NormValue NormValue::from_exact(Rational r) {
  NormValue v;
  v.value = to_double(r);
  v.exact = std::move(r);
  return v;
}

NormValue NormValue::from_double(double x) {
  NormValue v;
  v.value = x;
  return v;
}

NormValue NormValue::from_extended(const ExtendedRational& e) {
  return e.is_infinite() ? infinity() : from_exact(e.value());
}

NormValue NormValue::infinity() {
  NormValue v;
  v.value = std::numeric_limits<double>::infinity();
  return v;
}

std::string NormValue::str() const { return format_double(value); }

// ---------------------------------------------------------------------------
// SpaceSpec

SpaceSpec SpaceSpec::lp(const Rational& p) {
  if (p < 1) throw std::invalid_argument("L^p exponent must be >= 1");
  SpaceSpec s;
  s.tag_ = Tag::lp;
  s.p_ = p;
  return s;
}

SpaceSpec SpaceSpec::lp_infinity() {
  SpaceSpec s;
  s.tag_ = Tag::lp;
  s.lp_infinite_ = true;
  return s;
}

SpaceSpec SpaceSpec::l1_plus_linf() {
  SpaceSpec s;
  s.tag_ = Tag::l1_plus_linf;
  return s;
}

SpaceSpec SpaceSpec::l1_cap_linf() {
  SpaceSpec s;
  s.tag_ = Tag::l1_cap_linf;
  return s;
}

SpaceSpec SpaceSpec::orlicz(OrliczFunction phi) {
  SpaceSpec s;
  s.tag_ = Tag::orlicz;
  s.orlicz_ = std::move(phi);
  return s;
}

SpaceSpec SpaceSpec::lorentz(ConcavePhi phi) {
  SpaceSpec s;
  s.tag_ = Tag::lorentz;
  s.phi_ = std::move(phi);
  return s;
}

SpaceSpec SpaceSpec::marcinkiewicz(ConcavePhi phi) {
  SpaceSpec s;
  s.tag_ = Tag::marcinkiewicz;
  s.phi_ = std::move(phi);
  return s;
}

std::string SpaceSpec::describe() const {
  switch (tag_) {
    case Tag::lp: return lp_infinite_ ? "Linf" : "L^" + format_rational(p_);
    case Tag::l1_plus_linf: return "L1+Linf";
    case Tag::l1_cap_linf: return "L1&Linf";
    case Tag::orlicz: return "Orlicz";
    case Tag::lorentz: return "Lorentz";
    case Tag::marcinkiewicz: return "Marcinkiewicz";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Norm engines. All evaluate on the rearrangement, so rearrangement
// invariance holds by construction.

namespace {

NormValue lp_norm(const SpaceSpec& space, const StepFunction& f) {
  if (space.lp_is_infinity()) return NormValue::from_exact(sup_norm(f));
  const Rational& p = space.lp_exponent();
  if (p == 1) return NormValue::from_extended(l1_norm(f));
  if (f.tail_value() != 0) return NormValue::infinity();
  const double pd = to_double(p);
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    const double x = to_double(f.breakpoints()[i]);
    const double v = std::fabs(to_double(f.values()[i]));
    if (v > 0) acc += std::pow(v, pd) * (x - prev);
    prev = x;
  }
  return NormValue::from_double(std::pow(acc, 1.0 / pd));
}

NormValue l1_plus_linf_norm(const StepFunction& f) {
  return NormValue::from_exact(partial_integral(rearrangement(f), Rational(1)));
}

NormValue l1_cap_linf_norm(const StepFunction& f) {
  const ExtendedRational one = l1_norm(f);
  if (one.is_infinite()) return NormValue::infinity();
  return NormValue::from_exact(rational_max(one.value(), sup_norm(f)));
}

double orlicz_modular(const OrliczFunction& phi, const StepFunction& r, double a) {
  // tail term handled by the caller (zero or infinite)
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < r.piece_count(); ++i) {
    const double x = to_double(r.breakpoints()[i]);
    const double v = to_double(r.values()[i]);
    acc += (x - prev) * phi.value(v / a);
    prev = x;
  }
  return acc;
}

// Luxemburg norm by bisection on the monotone modular map.
NormValue orlicz_norm(const OrliczFunction& phi, const StepFunction& f) {
  const StepFunction r = rearrangement(f);
  if (r.is_zero()) return NormValue::from_exact(Rational(0));
  const Rational tail = r.tail_value();
  double lo = 0.0;
  if (tail > 0) {
    const Rational u0 = phi.vanishes_below();
    if (u0 == 0) return NormValue::infinity();  // positive Phi meets an infinite-measure level set
    const Rational a_min = tail / u0;
    if (orlicz_modular(phi, r, to_double(a_min)) <= 1.0)
      return NormValue::from_double(to_double(a_min));  // infimum at the feasibility edge
    lo = to_double(a_min);
  }
  double hi = std::max(to_double(sup_norm(r)), lo);
  if (hi <= 0) hi = 1.0;
  for (int guard = 0; orlicz_modular(phi, r, hi) > 1.0; ++guard) {
    hi *= 2.0;
    if (guard > 2000) return NormValue::infinity();
  }
  if (lo == 0.0) {
    lo = hi;
    while (orlicz_modular(phi, r, lo) <= 1.0) {
      lo *= 0.5;
      if (lo < 1e-300) return NormValue::from_double(0.0);
    }
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (orlicz_modular(phi, r, mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return NormValue::from_double(hi);
}

NormValue lorentz_norm(const ConcavePhi& phi, const StepFunction& f) {
  const StepFunction r = rearrangement(f);
  const Rational tail = r.tail_value();
  if (tail > 0 && !phi.finite_at_infinity()) return NormValue::infinity();
  const bool exact = phi.value_exact(Rational(1)).has_value();
  if (exact) {
    Rational acc(0);
    Rational prev_phi(0);
    for (std::size_t i = 0; i < r.piece_count(); ++i) {
      const Rational cur = *phi.value_exact(r.breakpoints()[i]);
      acc += r.values()[i] * (cur - prev_phi);
      prev_phi = cur;
    }
    if (tail > 0) acc += tail * (*phi.value_at_infinity() - prev_phi);
    return NormValue::from_exact(std::move(acc));
  }
  double acc = 0.0;
  double prev_phi = 0.0;
  for (std::size_t i = 0; i < r.piece_count(); ++i) {
    const double cur = phi.value(to_double(r.breakpoints()[i]));
    acc += to_double(r.values()[i]) * (cur - prev_phi);
    prev_phi = cur;
  }
  if (tail > 0) acc += to_double(tail) * (to_double(*phi.value_at_infinity()) - prev_phi);
  return NormValue::from_double(acc);
}

// sup_{s > 0} F(s)/phi(s) with F(s) = int_0^s f*. On each linear piece of F
// the ratio is quasi-convex (phi concave), so the supremum sits at piece
// endpoints or at the s -> 0+ / s -> infinity limits. The per-piece root of
// v phi(s) - F(s) phi'(s) is still evaluated as a numerical guard.
NormValue marcinkiewicz_norm(const ConcavePhi& phi, const StepFunction& f) {
  const StepFunction r = rearrangement(f);
  if (r.is_zero()) return NormValue::from_exact(Rational(0));
  const Rational tail = r.tail_value();
  if (tail > 0 && phi.slope_at_infinity() == 0) return NormValue::infinity();

  double best = 0.0;
  const double v1 = r.piece_count() ? to_double(r.values()[0]) : to_double(tail);
  if (!phi.slope_at_zero_infinite()) best = v1 / to_double(phi.slope_at_zero());

  Rational prefix(0);
  Rational prev(0);
  for (std::size_t i = 0; i < r.piece_count(); ++i) {
    const Rational& x = r.breakpoints()[i];
    const double v = to_double(r.values()[i]);
    const double f_prev = to_double(prefix);
    const double a = to_double(prev);
    const double b = to_double(x);
    prefix += r.values()[i] * (x - prev);
    best = std::max(best, to_double(prefix) / phi.value(b));
    // interior stationary point (a minimum in theory; evaluated as a guard)
    auto psi = [&](double s) { return v * phi.value(s) - (f_prev + v * (s - a)) * phi.derivative(s); };
    if (b > a) {
      double pa = psi(std::nextafter(a, b));
      double pb = psi(b);
      if (pa < 0.0 && pb > 0.0) {
        double lo = a, hi = b;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          (psi(mid) < 0.0 ? lo : hi) = mid;
        }
        const double s = 0.5 * (lo + hi);
        if (s > 0) best = std::max(best, (f_prev + v * (s - a)) / phi.value(s));
      }
    }
    prev = x;
  }
  if (tail > 0) {
    best = std::max(best, to_double(tail) / to_double(phi.slope_at_infinity()));
  } else if (phi.finite_at_infinity()) {
    best = std::max(best, to_double(prefix) / to_double(*phi.value_at_infinity()));
  }
  return NormValue::from_double(best);
}

}  // namespace

NormValue norm(const SpaceSpec& space, const StepFunction& f) {
  switch (space.tag()) {
    case SpaceSpec::Tag::lp: return lp_norm(space, f);
    case SpaceSpec::Tag::l1_plus_linf: return l1_plus_linf_norm(f);
    case SpaceSpec::Tag::l1_cap_linf: return l1_cap_linf_norm(f);
    case SpaceSpec::Tag::orlicz: return orlicz_norm(space.orlicz_function(), f);
    case SpaceSpec::Tag::lorentz: return lorentz_norm(space.concave_phi(), f);
    case SpaceSpec::Tag::marcinkiewicz: return marcinkiewicz_norm(space.concave_phi(), f);
  }
  throw std::logic_error("unreachable space tag");
}

NormValue norm(const SpaceSpec& space, const DiscreteVector& f) { return norm(space, f.to_step()); }

NormValue fundamental_function(const SpaceSpec& space, const Rational& t) {
  if (t <= 0) throw std::domain_error("fundamental function needs t > 0");
  return norm(space, StepFunction::indicator(Rational(0), t));
}

double fundamental_function_analytic(const SpaceSpec& space, double t) {
  switch (space.tag()) {
    case SpaceSpec::Tag::lp:
      return space.lp_is_infinity() ? 1.0 : std::pow(t, 1.0 / to_double(space.lp_exponent()));
    case SpaceSpec::Tag::l1_plus_linf: return std::min(t, 1.0);
    case SpaceSpec::Tag::l1_cap_linf: return std::max(t, 1.0);
    case SpaceSpec::Tag::orlicz: return 1.0 / space.orlicz_function().inverse(1.0 / t);
    case SpaceSpec::Tag::lorentz: return space.concave_phi().value(t);
    case SpaceSpec::Tag::marcinkiewicz: return t / space.concave_phi().value(t);
  }
  throw std::logic_error("unreachable space tag");
}

Rational alpha_limit(const SpaceSpec& space) {
  switch (space.tag()) {
    case SpaceSpec::Tag::lp:
      return (!space.lp_is_infinity() && space.lp_exponent() == 1) ? Rational(1) : Rational(0);
    case SpaceSpec::Tag::l1_plus_linf: return Rational(0);
    case SpaceSpec::Tag::l1_cap_linf: return Rational(1);
    case SpaceSpec::Tag::orlicz: return space.orlicz_function().slope_limit_at_zero();
    case SpaceSpec::Tag::lorentz: return space.concave_phi().slope_at_infinity();
    case SpaceSpec::Tag::marcinkiewicz: {
      const auto inf_val = space.concave_phi().value_at_infinity();
      return inf_val ? Rational(1 / *inf_val) : Rational(0);
    }
  }
  throw std::logic_error("unreachable space tag");
}

Rational beta_limit(const SpaceSpec& space) {
  switch (space.tag()) {
    case SpaceSpec::Tag::lp: return space.lp_is_infinity() ? Rational(1) : Rational(0);
    case SpaceSpec::Tag::l1_plus_linf: return Rational(0);
    case SpaceSpec::Tag::l1_cap_linf: return Rational(1);
    case SpaceSpec::Tag::orlicz: return Rational(0);
    case SpaceSpec::Tag::lorentz: return space.concave_phi().value_at_zero_plus();
    case SpaceSpec::Tag::marcinkiewicz: {
      const auto& phi = space.concave_phi();
      if (phi.slope_at_zero_infinite()) return Rational(0);
      return Rational(1 / phi.slope_at_zero());
    }
  }
  throw std::logic_error("unreachable space tag");
}

bool contains_indicator_of_infinity(const SpaceSpec& space) {
  switch (space.tag()) {
    case SpaceSpec::Tag::lp: return space.lp_is_infinity();
    case SpaceSpec::Tag::l1_plus_linf: return true;
    case SpaceSpec::Tag::l1_cap_linf: return false;
    case SpaceSpec::Tag::orlicz: return space.orlicz_function().vanishes_below() > 0;
    case SpaceSpec::Tag::lorentz: return space.concave_phi().finite_at_infinity();
    case SpaceSpec::Tag::marcinkiewicz: return space.concave_phi().slope_at_infinity() > 0;
  }
  throw std::logic_error("unreachable space tag");
}

bool embeds_in_R_mu(const SpaceSpec& space) { return !contains_indicator_of_infinity(space); }

bool embeds_in_L1(const SpaceSpec& space) { return alpha_limit(space) > 0; }

bool embeds_in_Linf(const SpaceSpec& space) { return beta_limit(space) > 0; }

Tri has_order_continuous_norm(const SpaceSpec& space) {
  switch (space.tag()) {
    case SpaceSpec::Tag::lp: return space.lp_is_infinity() ? Tri::no : Tri::yes;
    case SpaceSpec::Tag::l1_plus_linf: return Tri::no;
    case SpaceSpec::Tag::l1_cap_linf: return Tri::no;
    case SpaceSpec::Tag::orlicz: {
      const auto& phi = space.orlicz_function();
      return (phi.delta2_at_zero() && phi.delta2_at_infinity()) ? Tri::yes : Tri::no;
    }
    case SpaceSpec::Tag::lorentz: {
      const auto& phi = space.concave_phi();
      return (phi.value_at_zero_plus() == 0 && !phi.finite_at_infinity()) ? Tri::yes : Tri::no;
    }
    case SpaceSpec::Tag::marcinkiewicz: {
      const auto& phi = space.concave_phi();
      if (phi.value_at_zero_plus() > 0) {
        // phi(inf) < inf collapses the space onto L^1 (order continuous);
        // otherwise the norm is equivalent to L^1+L^inf.
        return phi.finite_at_infinity() ? Tri::yes : Tri::no;
      }
      // phi(+0) = 0: slope infinite at zero gives a non-separable space;
      // finite slope gives beta > 0, so small indicators keep unit norm.
      return Tri::no;
    }
  }
  throw std::logic_error("unreachable space tag");
}

Tri met_predicate(const SpaceSpec& space) {
  if (alpha_limit(space) > 0) return Tri::no;
  return has_order_continuous_norm(space);
}

MetReport met_report(const SpaceSpec& space) {
  MetReport r;
  r.alpha = alpha_limit(space);
  r.beta = beta_limit(space);
  r.order_continuous = has_order_continuous_norm(space);
  r.contains_indicator = contains_indicator_of_infinity(space);
  r.met = met_predicate(space);
  return r;
}

}  // namespace ergolab::spaces
