#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ergolab/experiments.hpp"
#include "ergolab/spaces.hpp"
#include "oracles.hpp"

using namespace ergolab;
using spaces::ConcavePhi;
using spaces::OrliczFunction;
using spaces::SpaceSpec;
using spaces::Tri;

namespace {

const StepFunction one = StepFunction::constant(Rational(1));

// 2 chi_(0,1] + 1 chi_(1,3]; reference norms below were computed externally
// with 30-digit arithmetic before the engines existed.
StepFunction reference_f() {
  return StepFunction::from_pieces(
      {{Rational(0), Rational(1), Rational(2)}, {Rational(1), Rational(3), Rational(1)}}, Rational(0));
}

constexpr double kMarcLogRef = 2.8853900817779268;     // 2 / ln 2
constexpr double kLorentzLogRef = 2.0794415416798359;  // 3 ln 2
constexpr double kOrliczPwRef = 2.4494897427831781;    // sqrt(6)
constexpr double kOrliczSpRef = 1.3808315196468591;
constexpr double kLorentzPow23Ref = 3.0800838230519041;  // 1 + 3^(2/3)
constexpr double kMarcPowHalfRef = 2.3094010767585031;   // 4 / sqrt(3)

bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

double norm_d(const SpaceSpec& space, const StepFunction& f) { return spaces::norm(space, f).value; }

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(SpaceSpec::lp(Rational(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(OrliczFunction::power(Rational(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(OrliczFunction::shifted_power(Rational(0), Rational(2)), std::invalid_argument);
  CHECK_THROWS_AS(ConcavePhi::power(Rational(2)), std::invalid_argument);
  CHECK_THROWS_AS(ConcavePhi::bounded(Rational(0)), std::invalid_argument);
  CHECK_THROWS_AS(ConcavePhi::affine(Rational(0), Rational(0)), std::invalid_argument);
}

TEST_CASE("L1+Linf norm") {
  for (int n : {1, 2, 7, 64}) {
    const StepFunction f = StepFunction::indicator(Rational(0), Rational(n), Rational(1, n));
    const auto v = spaces::norm(SpaceSpec::l1_plus_linf(), f);
    REQUIRE(v.exact.has_value());
    CHECK(*v.exact == Rational(1, n));
  }
  // the indicator of infinity has norm 1
  const auto v1 = spaces::norm(SpaceSpec::l1_plus_linf(), one);
  REQUIRE(v1.exact.has_value());
  CHECK(*v1.exact == 1);

  // variational identity: int_0^1 f* = inf_c ( ||(|f|-c)_+||_1 + c ), exact
  experiments::Rng rng(31);
  for (int trial = 0; trial < 120; ++trial) {
    const StepFunction f = experiments::random_step_function(rng, 8, 12, 6);
    const auto v = spaces::norm(SpaceSpec::l1_plus_linf(), f);
    REQUIRE(v.exact.has_value());
    CHECK(*v.exact == oracles::variational_l1_plus_linf(f));
  }
}

TEST_CASE("Lp and L1 cap Linf norms") {
  const StepFunction f = reference_f();
  const auto l1 = spaces::norm(SpaceSpec::lp(Rational(1)), f);
  REQUIRE(l1.exact.has_value());
  CHECK(*l1.exact == 4);
  const auto linf = spaces::norm(SpaceSpec::lp_infinity(), f);
  REQUIRE(linf.exact.has_value());
  CHECK(*linf.exact == 2);
  const auto cap = spaces::norm(SpaceSpec::l1_cap_linf(), f);
  REQUIRE(cap.exact.has_value());
  CHECK(*cap.exact == 4);

  CHECK(close_rel(norm_d(SpaceSpec::lp(Rational(2)), f), std::sqrt(6.0), 1e-12));
  CHECK_FALSE(spaces::norm(SpaceSpec::lp(Rational(2)), one).finite());
  CHECK_FALSE(spaces::norm(SpaceSpec::lp(Rational(1)), one).finite());
  CHECK_FALSE(spaces::norm(SpaceSpec::l1_cap_linf(), one).finite());
}

TEST_CASE("Orlicz norm: power family reproduces Lp through the bisection route") {
  experiments::Rng rng(47);
  for (const Rational& p : {Rational(1), Rational(3, 2), Rational(2), Rational(3)}) {
    const SpaceSpec orlicz = SpaceSpec::orlicz(OrliczFunction::power(p));
    const SpaceSpec lp = p == 1 ? SpaceSpec::lp(Rational(1)) : SpaceSpec::lp(p);
    for (int trial = 0; trial < 30; ++trial) {
      const StepFunction f = experiments::random_step_function(rng, 6, 10, 4);
      CHECK(close_rel(norm_d(orlicz, f), norm_d(lp, f), 1e-10));
    }
  }
}

TEST_CASE("Orlicz norm: frozen references and membership of the flat function") {
  const StepFunction f = reference_f();
  CHECK(close_rel(
      norm_d(SpaceSpec::orlicz(OrliczFunction::piecewise_power(Rational(2), Rational(3), Rational(1))), f),
      kOrliczPwRef, 1e-11));
  CHECK(close_rel(norm_d(SpaceSpec::orlicz(OrliczFunction::shifted_power(Rational(1, 2), Rational(2))), f),
                  kOrliczSpRef, 1e-11));

  // Phi positive near zero excludes the indicator of infinity; a vanishing
  // stretch admits it with norm tail/u0
  CHECK_FALSE(spaces::norm(SpaceSpec::orlicz(OrliczFunction::power(Rational(2))), one).finite());
  const auto v =
      spaces::norm(SpaceSpec::orlicz(OrliczFunction::shifted_power(Rational(1, 2), Rational(2))), one);
  CHECK(close_rel(v.value, 2.0, 1e-12));  // 1 / u0

  // modular at the returned scaling sits at the boundary
  experiments::Rng rng(53);
  const OrliczFunction phi = OrliczFunction::piecewise_power(Rational(2), Rational(3), Rational(1));
  for (int trial = 0; trial < 50; ++trial) {
    const StepFunction g = experiments::random_step_function(rng, 6, 10, 4);
    if (g.is_zero()) continue;
    const double a = norm_d(SpaceSpec::orlicz(phi), g);
    const double modular = oracles::orlicz_modular_at(phi, g, a);
    CHECK(modular <= 1.0 + 1e-12);
    CHECK(modular >= 1.0 - 1e-9);
  }
}

TEST_CASE("Lorentz norm") {
  const StepFunction f = reference_f();

  // affine phi: a ||f||_inf + b ||f||_1, exact
  for (const auto& [a, b] : std::vector<std::pair<int, int>>{{1, 2}, {3, 1}, {0, 2}, {2, 0}}) {
    const auto v = spaces::norm(SpaceSpec::lorentz(ConcavePhi::affine(Rational(a), Rational(b))), f);
    REQUIRE(v.exact.has_value());
    CHECK(*v.exact == Rational(a) * 2 + Rational(b) * 4);
  }

  CHECK(close_rel(norm_d(SpaceSpec::lorentz(ConcavePhi::log1p()), f), kLorentzLogRef, 1e-12));
  CHECK(
      close_rel(norm_d(SpaceSpec::lorentz(ConcavePhi::power(Rational(2, 3))), f), kLorentzPow23Ref, 1e-12));

  // phi(inf) = inf excludes the indicator of infinity; bounded phi admits it
  CHECK_FALSE(spaces::norm(SpaceSpec::lorentz(ConcavePhi::power(Rational(2, 3))), one).finite());
  const auto v = spaces::norm(SpaceSpec::lorentz(ConcavePhi::bounded(Rational(5))), one);
  REQUIRE(v.exact.has_value());
  CHECK(*v.exact == 5);  // phi(inf)
}

TEST_CASE("Marcinkiewicz norm") {
  const StepFunction f = reference_f();

  // phi(s) = s: the running average of f* peaks at 0+, giving the sup norm
  experiments::Rng rng(61);
  const SpaceSpec msup = SpaceSpec::marcinkiewicz(ConcavePhi::power(Rational(1)));
  for (int trial = 0; trial < 50; ++trial) {
    const StepFunction g = experiments::random_step_function(rng, 6, 10, 4);
    CHECK(close_rel(norm_d(msup, g), to_double(sup_norm(g)), 1e-10));
  }

  CHECK(close_rel(norm_d(SpaceSpec::marcinkiewicz(ConcavePhi::log1p()), f), kMarcLogRef, 1e-12));
  CHECK(close_rel(norm_d(SpaceSpec::marcinkiewicz(ConcavePhi::power(Rational(1, 2))), f), kMarcPowHalfRef,
                  1e-12));

  // grid cross-check: the geometric grid never beats the engine and lands close
  for (const auto& phi : {ConcavePhi::log1p(), ConcavePhi::power(Rational(1, 2)),
                          ConcavePhi::bounded(Rational(2)), ConcavePhi::affine(Rational(1), Rational(1))}) {
    const SpaceSpec space = SpaceSpec::marcinkiewicz(phi);
    for (int trial = 0; trial < 10; ++trial) {
      const StepFunction g = experiments::random_step_function(rng, 6, 10, 4);
      if (g.is_zero()) continue;
      const double engine = norm_d(space, g);
      const double grid = oracles::marcinkiewicz_grid(phi, g, 10000);
      CHECK(engine >= grid - 1e-9);
      CHECK(close_rel(engine, grid, 1e-3));
    }
  }

  // the indicator of infinity: finite norm exactly when phi(t)/t keeps a slope
  CHECK_FALSE(spaces::norm(SpaceSpec::marcinkiewicz(ConcavePhi::log1p()), one).finite());
  CHECK(close_rel(norm_d(msup, one), 1.0, 1e-12));
}

TEST_CASE("norm finiteness of the flat function matches the membership predicate") {
  const std::vector<SpaceSpec> spaces_list = {
      SpaceSpec::lp(Rational(1)),
      SpaceSpec::lp(Rational(2)),
      SpaceSpec::lp_infinity(),
      SpaceSpec::l1_plus_linf(),
      SpaceSpec::l1_cap_linf(),
      SpaceSpec::orlicz(OrliczFunction::power(Rational(2))),
      SpaceSpec::orlicz(OrliczFunction::shifted_power(Rational(1, 2), Rational(2))),
      SpaceSpec::orlicz(OrliczFunction::piecewise_power(Rational(2), Rational(3), Rational(1))),
      SpaceSpec::lorentz(ConcavePhi::power(Rational(2, 3))),
      SpaceSpec::lorentz(ConcavePhi::log1p()),
      SpaceSpec::lorentz(ConcavePhi::bounded(Rational(2))),
      SpaceSpec::lorentz(ConcavePhi::affine(Rational(1), Rational(1))),
      SpaceSpec::lorentz(ConcavePhi::affine(Rational(1), Rational(0))),
      SpaceSpec::marcinkiewicz(ConcavePhi::power(Rational(1))),
      SpaceSpec::marcinkiewicz(ConcavePhi::power(Rational(1, 2))),
      SpaceSpec::marcinkiewicz(ConcavePhi::log1p()),
      SpaceSpec::marcinkiewicz(ConcavePhi::bounded(Rational(2))),
      SpaceSpec::marcinkiewicz(ConcavePhi::affine(Rational(2), Rational(0))),
      SpaceSpec::marcinkiewicz(ConcavePhi::affine(Rational(2), Rational(1))),
  };
  for (const auto& space : spaces_list) {
    CAPTURE(space.describe());
    CHECK(spaces::norm(space, one).finite() == spaces::contains_indicator_of_infinity(space));
    CHECK(spaces::embeds_in_R_mu(space) == !spaces::contains_indicator_of_infinity(space));
    // order continuity forces the space inside R_mu
    if (spaces::has_order_continuous_norm(space) == Tri::yes)
      CHECK_FALSE(spaces::contains_indicator_of_infinity(space));
  }
}

TEST_CASE("fundamental function closed forms and engine agreement") {
  // closed forms
  const auto phi = ConcavePhi::power(Rational(2, 3));
  for (int k : {1, 2, 5, 30}) {
    const Rational t = Rational(k) / 3;
    const auto lor = spaces::fundamental_function(SpaceSpec::lorentz(phi), t);
    CHECK(close_rel(lor.value, phi.value(to_double(t)), 1e-12));
    const auto plus = spaces::fundamental_function(SpaceSpec::l1_plus_linf(), t);
    REQUIRE(plus.exact.has_value());
    CHECK(*plus.exact == rational_min(t, Rational(1)));
    CHECK(close_rel(spaces::fundamental_function(SpaceSpec::lp(Rational(2)), t).value,
                    std::sqrt(to_double(t)), 1e-12));
  }

  const std::vector<SpaceSpec> spaces_list = {
      SpaceSpec::lp(Rational(1)),
      SpaceSpec::lp(Rational(3, 2)),
      SpaceSpec::lp(Rational(4)),
      SpaceSpec::lp_infinity(),
      SpaceSpec::l1_plus_linf(),
      SpaceSpec::l1_cap_linf(),
      SpaceSpec::orlicz(OrliczFunction::power(Rational(2))),
      SpaceSpec::orlicz(OrliczFunction::shifted_power(Rational(1, 2), Rational(2))),
      SpaceSpec::orlicz(OrliczFunction::piecewise_power(Rational(2), Rational(3), Rational(1))),
      SpaceSpec::lorentz(ConcavePhi::power(Rational(2, 3))),
      SpaceSpec::lorentz(ConcavePhi::log1p()),
      SpaceSpec::lorentz(ConcavePhi::affine(Rational(1), Rational(2))),
      SpaceSpec::marcinkiewicz(ConcavePhi::power(Rational(1, 2))),
      SpaceSpec::marcinkiewicz(ConcavePhi::log1p()),
      SpaceSpec::marcinkiewicz(ConcavePhi::bounded(Rational(2))),
  };

  for (const auto& space : spaces_list) {
    CAPTURE(space.describe());
    // engine vs closed form at extreme scales
    for (int e : {-20, -10, 10, 20}) {
      const Rational t = e > 0 ? Rational(1 << e) : Rational(1, 1 << (-e));
      const double engine = spaces::fundamental_function(space, t).value;
      const double analytic = spaces::fundamental_function_analytic(space, to_double(t));
      CHECK(close_rel(engine, analytic, 1e-6));
    }
    // quasi-concavity on a geometric grid: increasing, and ratio decreasing
    double prev_val = 0.0;
    double prev_ratio = 0.0;
    bool first = true;
    for (int e = -12; e <= 12; ++e) {
      const Rational t = e >= 0 ? Rational(1 << e) : Rational(1, 1 << (-e));
      const double val = spaces::fundamental_function(space, t).value;
      const double ratio = val / to_double(t);
      if (!first) {
        CHECK(val >= prev_val * (1.0 - 1e-10));
        CHECK(ratio <= prev_ratio * (1.0 + 1e-10));
      }
      prev_val = val;
      prev_ratio = ratio;
      first = false;
    }
  }
}

TEST_CASE("alpha and beta limits") {
  CHECK(spaces::alpha_limit(SpaceSpec::lp(Rational(1))) == 1);
  CHECK(spaces::beta_limit(SpaceSpec::lp_infinity()) == 1);
  for (const Rational& p : {Rational(3, 2), Rational(2), Rational(4)}) {
    CHECK(spaces::alpha_limit(SpaceSpec::lp(p)) == 0);
    CHECK(spaces::beta_limit(SpaceSpec::lp(p)) == 0);
  }
  CHECK(spaces::alpha_limit(SpaceSpec::lp_infinity()) == 0);

  CHECK(spaces::alpha_limit(SpaceSpec::lorentz(ConcavePhi::power(Rational(2, 3)))) == 0);
  CHECK(spaces::alpha_limit(SpaceSpec::lorentz(ConcavePhi::power(Rational(1)))) == 1);
  CHECK(spaces::alpha_limit(SpaceSpec::lorentz(ConcavePhi::affine(Rational(1), Rational(3)))) == 3);
  CHECK(spaces::beta_limit(SpaceSpec::lorentz(ConcavePhi::affine(Rational(2), Rational(1)))) == 2);

  // the Marcinkiewicz fundamental function is t / phi(t)
  CHECK(spaces::alpha_limit(SpaceSpec::marcinkiewicz(ConcavePhi::log1p())) == 0);
  CHECK(spaces::beta_limit(SpaceSpec::marcinkiewicz(ConcavePhi::log1p())) == 1);
  CHECK(spaces::alpha_limit(SpaceSpec::marcinkiewicz(ConcavePhi::bounded(Rational(4)))) == Rational(1, 4));
  CHECK(spaces::alpha_limit(SpaceSpec::marcinkiewicz(ConcavePhi::affine(Rational(2), Rational(0)))) ==
        Rational(1, 2));

  CHECK(spaces::alpha_limit(SpaceSpec::orlicz(OrliczFunction::power(Rational(1)))) == 1);
  CHECK(spaces::alpha_limit(SpaceSpec::orlicz(OrliczFunction::power(Rational(2)))) == 0);
  CHECK(spaces::alpha_limit(SpaceSpec::orlicz(OrliczFunction::shifted_power(Rational(1, 2), Rational(2)))) ==
        0);

  CHECK(spaces::alpha_limit(SpaceSpec::l1_cap_linf()) == 1);
  CHECK(spaces::beta_limit(SpaceSpec::l1_cap_linf()) == 1);
  CHECK(spaces::alpha_limit(SpaceSpec::l1_plus_linf()) == 0);
  CHECK(spaces::beta_limit(SpaceSpec::l1_plus_linf()) == 0);
}

TEST_CASE("embedding predicates") {
  CHECK(spaces::embeds_in_L1(SpaceSpec::lp(Rational(1))));
  CHECK(spaces::embeds_in_Linf(SpaceSpec::lp_infinity()));
  for (const Rational& p : {Rational(3, 2), Rational(2), Rational(4)}) {
    CHECK_FALSE(spaces::embeds_in_L1(SpaceSpec::lp(p)));
    CHECK_FALSE(spaces::embeds_in_Linf(SpaceSpec::lp(p)));
  }
  // beta = phi(+0) > 0 puts the Lorentz space inside Linf; the engine
  // fundamental function approaches that value at small t
  const SpaceSpec lor = SpaceSpec::lorentz(ConcavePhi::affine(Rational(3), Rational(1)));
  CHECK(spaces::embeds_in_Linf(lor));
  const double small = spaces::fundamental_function(lor, Rational(1, 1 << 20)).value;
  CHECK(close_rel(small, 3.0, 1e-6));
  CHECK(spaces::embeds_in_L1(SpaceSpec::marcinkiewicz(ConcavePhi::affine(Rational(2), Rational(0)))));
}

TEST_CASE("order continuity") {
  CHECK(spaces::has_order_continuous_norm(SpaceSpec::lp(Rational(2))) == Tri::yes);
  CHECK(spaces::has_order_continuous_norm(SpaceSpec::lp_infinity()) == Tri::no);
  CHECK(spaces::has_order_continuous_norm(SpaceSpec::l1_plus_linf()) == Tri::no);
  CHECK(spaces::has_order_continuous_norm(SpaceSpec::l1_cap_linf()) == Tri::no);

  CHECK(spaces::has_order_continuous_norm(SpaceSpec::orlicz(OrliczFunction::power(Rational(2)))) ==
        Tri::yes);
  CHECK(spaces::has_order_continuous_norm(
            SpaceSpec::orlicz(OrliczFunction::piecewise_power(Rational(2), Rational(3), Rational(1)))) ==
        Tri::yes);
  // vanishing near zero admits the flat function, killing order continuity
  CHECK(spaces::has_order_continuous_norm(
            SpaceSpec::orlicz(OrliczFunction::shifted_power(Rational(1, 2), Rational(2)))) == Tri::no);

  CHECK(spaces::has_order_continuous_norm(SpaceSpec::lorentz(ConcavePhi::power(Rational(2, 3)))) ==
        Tri::yes);
  CHECK(spaces::has_order_continuous_norm(SpaceSpec::lorentz(ConcavePhi::log1p())) == Tri::yes);
  CHECK(spaces::has_order_continuous_norm(SpaceSpec::lorentz(ConcavePhi::bounded(Rational(2)))) == Tri::no);
  CHECK(spaces::has_order_continuous_norm(SpaceSpec::lorentz(ConcavePhi::affine(Rational(1), Rational(1)))) ==
        Tri::no);

  // Marcinkiewicz: only the degenerate L^1 case keeps order continuity
  CHECK(spaces::has_order_continuous_norm(
            SpaceSpec::marcinkiewicz(ConcavePhi::affine(Rational(2), Rational(0)))) == Tri::yes);
  CHECK(spaces::has_order_continuous_norm(
            SpaceSpec::marcinkiewicz(ConcavePhi::affine(Rational(2), Rational(1)))) == Tri::no);
  CHECK(spaces::has_order_continuous_norm(SpaceSpec::marcinkiewicz(ConcavePhi::power(Rational(1, 2)))) ==
        Tri::no);
  CHECK(spaces::has_order_continuous_norm(SpaceSpec::marcinkiewicz(ConcavePhi::log1p())) == Tri::no);
}

TEST_CASE("mean ergodic theorem predicate") {
  for (const Rational& p : {Rational(3, 2), Rational(2), Rational(4)})
    CHECK(spaces::met_predicate(SpaceSpec::lp(p)) == Tri::yes);
  CHECK(spaces::met_predicate(SpaceSpec::lp(Rational(1))) == Tri::no);
  CHECK(spaces::met_predicate(SpaceSpec::lp_infinity()) == Tri::no);
  CHECK(spaces::met_predicate(SpaceSpec::lorentz(ConcavePhi::power(Rational(2, 3)))) == Tri::yes);
  CHECK(spaces::met_predicate(SpaceSpec::lorentz(ConcavePhi::power(Rational(1)))) == Tri::no);
  CHECK(spaces::met_predicate(SpaceSpec::lorentz(ConcavePhi::log1p())) == Tri::yes);
  CHECK(spaces::met_predicate(SpaceSpec::orlicz(OrliczFunction::power(Rational(2)))) == Tri::yes);
  CHECK(spaces::met_predicate(SpaceSpec::orlicz(OrliczFunction::power(Rational(1)))) == Tri::no);

  // the shifted power admits the flat function and fails order continuity
  const SpaceSpec sp = SpaceSpec::orlicz(OrliczFunction::shifted_power(Rational(1, 2), Rational(2)));
  CHECK(spaces::met_predicate(sp) == Tri::no);
  CHECK(spaces::contains_indicator_of_infinity(sp));

  // every Marcinkiewicz family here fails (order continuity or alpha > 0)
  CHECK(spaces::met_predicate(SpaceSpec::marcinkiewicz(ConcavePhi::power(Rational(1, 2)))) == Tri::no);
  CHECK(spaces::met_predicate(SpaceSpec::marcinkiewicz(ConcavePhi::affine(Rational(2), Rational(0)))) ==
        Tri::no);
  CHECK(spaces::met_predicate(SpaceSpec::l1_plus_linf()) == Tri::no);
  CHECK(spaces::met_predicate(SpaceSpec::l1_cap_linf()) == Tri::no);

  const auto report = spaces::met_report(SpaceSpec::lp(Rational(3, 2)));
  CHECK(report.met == Tri::yes);
  CHECK(report.alpha == 0);
  CHECK(report.order_continuous == Tri::yes);
  CHECK_FALSE(report.contains_indicator);
}

TEST_CASE("norm axioms and symmetry properties on random data") {
  const std::vector<SpaceSpec> spaces_list = {
      SpaceSpec::lp(Rational(1)),
      SpaceSpec::lp(Rational(2)),
      SpaceSpec::lp_infinity(),
      SpaceSpec::l1_plus_linf(),
      SpaceSpec::l1_cap_linf(),
      SpaceSpec::orlicz(OrliczFunction::power(Rational(2))),
      SpaceSpec::orlicz(OrliczFunction::piecewise_power(Rational(2), Rational(3), Rational(1))),
      SpaceSpec::lorentz(ConcavePhi::power(Rational(2, 3))),
      SpaceSpec::lorentz(ConcavePhi::log1p()),
      SpaceSpec::marcinkiewicz(ConcavePhi::log1p()),
      SpaceSpec::marcinkiewicz(ConcavePhi::power(Rational(1, 2))),
  };
  experiments::Rng rng(71);
  for (const auto& space : spaces_list) {
    CAPTURE(space.describe());
    for (int trial = 0; trial < 25; ++trial) {
      const StepFunction f = experiments::random_step_function(rng, 6, 8, 4);
      const StepFunction g = experiments::random_step_function(rng, 6, 8, 4);

      // rearrangement invariance
      CHECK(close_rel(norm_d(space, f), norm_d(space, rearrangement(f)), 1e-12));

      // absolute homogeneity
      const Rational c = rng.rational(6, 3);
      CHECK(close_rel(norm_d(space, scale(f, c)), std::fabs(to_double(c)) * norm_d(space, f), 1e-10));

      // triangle inequality
      CHECK(norm_d(space, add(f, g)) <= norm_d(space, f) + norm_d(space, g) + 1e-10);

      // full symmetry under pointwise domination (hence submajorization)
      std::vector<Rational> shrunk;
      for (const auto& v : f.values()) shrunk.push_back(v / rng.uniform_int(1, 4));
      const StepFunction h(f.breakpoints(), std::move(shrunk), Rational(0));
      REQUIRE(submajorize(h, f));
      CHECK(norm_d(space, h) <= norm_d(space, f) * (1 + 1e-10) + 1e-15);

      // embedding chain: the L1+Linf norm never beats the L1 cap Linf norm
      const auto plus = spaces::norm(SpaceSpec::l1_plus_linf(), f);
      const auto cap = spaces::norm(SpaceSpec::l1_cap_linf(), f);
      REQUIRE(plus.exact.has_value());
      REQUIRE(cap.exact.has_value());
      CHECK(*plus.exact <= *cap.exact);
    }
  }
}
