#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ergolab/experiments.hpp"
#include "ergolab/operators.hpp"

using namespace ergolab;
using ops::CompositionOperator;
using ops::DSOperator;
using ops::KernelOperator;
using ops::SequenceShift;
using ops::TranslationShift;

namespace {

KernelOperator swap_kernel() {
  return KernelOperator({{Rational(0), Rational(1)}, {Rational(1), Rational(0)}},
                        {Rational(1), Rational(1)});
}

std::vector<Rational> vec(std::initializer_list<int> xs) {
  std::vector<Rational> v;
  for (int x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST_CASE("apply") {
  const DSOperator shift = TranslationShift{Rational(1)};
  const StepFunction chi = StepFunction::indicator(Rational(0), Rational(1));
  CHECK(ops::apply(shift, chi) == StepFunction::indicator(Rational(1), Rational(2)));

  const DSOperator seq = SequenceShift{};
  const DiscreteVector e1 = DiscreteVector::basis(1);
  CHECK(ops::apply(seq, e1) == DiscreteVector::basis(2));

  const DSOperator id = KernelOperator::identity(3);
  const DiscreteVector v(Rational(1), vec({3, -1, 2}));
  CHECK(ops::apply(id, v) == v);

  // domain mismatches are rejected
  CHECK_THROWS_AS(ops::apply(seq, chi), std::domain_error);
  CHECK_THROWS_AS(ops::apply(shift, e1), std::domain_error);
  CHECK_THROWS_AS(ops::apply(id, DiscreteVector(Rational(2), vec({1}))), std::invalid_argument);
  CHECK_THROWS_AS(ops::apply(id, DiscreteVector(Rational(1), vec({1}), Rational(1))), std::invalid_argument);
  CHECK_THROWS_AS(ops::apply(id, DiscreteVector(Rational(1), vec({1, 2, 3, 4}))), std::invalid_argument);
}

TEST_CASE("verify_ds") {
  // doubly substochastic rational matrix on unit weights
  const KernelOperator ok({{Rational(1, 2), Rational(1, 4), Rational(0)},
                           {Rational(1, 4), Rational(1, 4), Rational(1, 4)},
                           {Rational(0), Rational(1, 4), Rational(1, 2)}},
                          {Rational(1), Rational(1), Rational(1)});
  const auto cert_ok = verify_ds(DSOperator(ok));
  CHECK(cert_ok.passed);
  CHECK(cert_ok.l1_margin == Rational(1, 4));
  CHECK(cert_ok.linf_margin == Rational(1, 4));

  // a row summing to 3/2 fails with a witness
  const KernelOperator bad({{Rational(3, 4), Rational(3, 4)}, {Rational(0), Rational(0)}},
                           {Rational(1), Rational(1)});
  const auto cert_bad = verify_ds(DSOperator(bad));
  CHECK_FALSE(cert_bad.passed);
  CHECK(cert_bad.linf_margin == Rational(-1, 2));
  CHECK(cert_bad.witness.find("row 0") != std::string::npos);

  // shifts are certified analytically
  const auto cert_shift = verify_ds(DSOperator(TranslationShift{Rational(2)}));
  CHECK(cert_shift.passed);
  CHECK(cert_shift.analytic);
  CHECK(verify_ds(DSOperator(SequenceShift{})).passed);

  // compositions: measure preservation decides
  const CompositionOperator rot{{1, 2, 0}, {Rational(1), Rational(1), Rational(1)}};
  CHECK(verify_ds(DSOperator(rot)).passed);
  const CompositionOperator squash{{0, 0, 1}, {Rational(1), Rational(1), Rational(1)}};
  const auto cert_squash = verify_ds(DSOperator(squash));
  CHECK_FALSE(cert_squash.passed);
  CHECK(cert_squash.l1_margin == Rational(-1));
}

TEST_CASE("cesaro averages") {
  const DSOperator shift = TranslationShift{Rational(1)};
  const StepFunction chi = StepFunction::indicator(Rational(0), Rational(1));
  CHECK(cesaro_average(shift, chi, 1) == chi);
  for (int n : {2, 5, 16, 64}) {
    CHECK(cesaro_average(shift, chi, n) ==
          StepFunction::indicator(Rational(0), Rational(n), Rational(1, n)));
  }

  // swap orbit has period two
  CHECK(cesaro_average(swap_kernel(), vec({1, 0}), 2) == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  CHECK(cesaro_average(swap_kernel(), vec({1, 0}), 5) == std::vector<Rational>{Rational(3, 5), Rational(2, 5)});
}

TEST_CASE("maximal function") {
  const KernelOperator id = KernelOperator::identity(2);
  const std::vector<Rational> f = vec({-3, 2});
  for (int n : {1, 4, 16}) CHECK(maximal_function(id, f, n) == vec({3, 2}));

  const DSOperator shift = TranslationShift{Rational(1)};
  const StepFunction chi = StepFunction::indicator(Rational(0), Rational(1));
  CHECK(maximal_function(shift, chi, 2) ==
        StepFunction::from_pieces(
            {{Rational(0), Rational(1), Rational(1)}, {Rational(1), Rational(2), Rational(1, 2)}},
            Rational(0)));

  // monotone in the truncation depth
  experiments::Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const KernelOperator T = experiments::random_substochastic_kernel(rng, 5, 3, false);
    const auto f5 = experiments::random_vector(rng, 5, 6, 4);
    std::vector<Rational> prev;
    for (int n = 1; n <= 16; ++n) {
      const auto cur = maximal_function(T, f5, n);
      if (!prev.empty())
        for (std::size_t i = 0; i < cur.size(); ++i) CHECK(prev[i] <= cur[i]);
      prev = cur;
    }
    // and dominated by ||f||_inf for substochastic kernels
    Rational sup(0);
    for (const auto& x : f5) sup = rational_max(sup, rational_abs(x));
    for (const auto& x : prev) CHECK(x <= sup);
  }
}

TEST_CASE("linear modulus") {
  const KernelOperator mixed({{Rational(-1, 2), Rational(1, 4)}, {Rational(1, 4), Rational(-1, 4)}},
                             {Rational(1), Rational(1)});
  const auto mod = std::get<KernelOperator>(linear_modulus(DSOperator(mixed)));
  CHECK(mod.matrix()[0][0] == Rational(1, 2));
  CHECK(mod.matrix()[1][1] == Rational(1, 4));
  CHECK(mod.nonnegative());
  CHECK(verify_ds(DSOperator(mod)).passed);

  const KernelOperator pos = swap_kernel();
  CHECK(std::get<KernelOperator>(linear_modulus(DSOperator(pos))) == pos);

  CHECK_THROWS_AS(linear_modulus(DSOperator(TranslationShift{Rational(1)})), std::domain_error);

  // |T^k f| <= |T|^k |f| componentwise, exact
  experiments::Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const KernelOperator T = experiments::random_substochastic_kernel(rng, 4, 3, false);
    const KernelOperator M = T.modulus();
    std::vector<Rational> x = experiments::random_vector(rng, 4, 6, 4);
    std::vector<Rational> ax(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) ax[i] = rational_abs(x[i]);
    for (int k = 1; k <= 8; ++k) {
      x = T.apply(x);
      ax = M.apply(ax);
      for (std::size_t i = 0; i < x.size(); ++i) CHECK(rational_abs(x[i]) <= ax[i]);
    }
  }
}

TEST_CASE("contractivity of generated operators") {
  experiments::Rng rng(29);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = rng.uniform_int(2, 6);
    const KernelOperator T = experiments::random_substochastic_kernel(rng, n, 3, trial % 2 == 0);
    REQUIRE(verify_ds(DSOperator(T)).passed);
    const auto f = experiments::random_vector(rng, n, 8, 4);
    const auto tf = T.apply(f);
    Rational l1_before(0), l1_after(0), sup_before(0), sup_after(0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      l1_before += rational_abs(f[i]);
      l1_after += rational_abs(tf[i]);
      sup_before = rational_max(sup_before, rational_abs(f[i]));
      sup_after = rational_max(sup_after, rational_abs(tf[i]));
    }
    CHECK(l1_after <= l1_before);
    CHECK(sup_after <= sup_before);
  }

  // shifts preserve both norms exactly
  experiments::Rng rng2(31);
  for (int trial = 0; trial < 50; ++trial) {
    const StepFunction f = experiments::random_step_function(rng2, 6, 8, 4);
    const StepFunction tf = ops::apply(DSOperator(TranslationShift{rng2.positive_rational(4, 2)}), f);
    CHECK(l1_norm(tf) == l1_norm(f));
    CHECK(sup_norm(tf) == sup_norm(f));
  }
}

TEST_CASE("averages are submajorized by the input") {
  experiments::Rng rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    const StepFunction f = experiments::random_step_function(rng, 5, 6, 3);
    const DSOperator shift = TranslationShift{rng.positive_rational(3, 2)};
    const int n = rng.uniform_int(1, 16);
    CHECK(submajorize(cesaro_average(shift, f, n), f));
  }
  for (int trial = 0; trial < 60; ++trial) {
    const int size = rng.uniform_int(2, 6);
    const KernelOperator T = experiments::random_substochastic_kernel(rng, size, 3, trial % 2 == 0);
    const auto f = experiments::random_vector(rng, size, 6, 3);
    const auto avg = cesaro_average(T, f, rng.uniform_int(1, 16));
    CHECK(submajorize(step_from_weighted(avg, T.weights()), step_from_weighted(f, T.weights())));
  }
}

TEST_CASE("telescoping identity") {
  // (I - T) M_n f = (f - T^n f) / n, exact
  experiments::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int size = rng.uniform_int(2, 5);
    const KernelOperator T = experiments::random_substochastic_kernel(rng, size, 2, false);
    const auto f = experiments::random_vector(rng, size, 6, 3);
    for (int n : {1, 2, 7, 64}) {
      const auto mn = cesaro_average(T, f, n);
      const auto tmn = T.apply(mn);
      std::vector<Rational> tn = f;
      for (int k = 0; k < n; ++k) tn = T.apply(tn);
      for (std::size_t i = 0; i < f.size(); ++i) CHECK(mn[i] - tmn[i] == (f[i] - tn[i]) / n);
    }
  }
  // and for the translation shift on step functions
  const DSOperator shift = TranslationShift{Rational(1)};
  const StepFunction f = StepFunction::from_pieces(
      {{Rational(0), Rational(1), Rational(2)}, {Rational(1), Rational(2), Rational(-1)}}, Rational(0));
  for (int n : {1, 3, 8, 64}) {
    const StepFunction mn = cesaro_average(shift, f, n);
    StepFunction tn = f;
    for (int k = 0; k < n; ++k) tn = ops::apply(shift, tn);
    CHECK(subtract(mn, ops::apply(shift, mn)) == scale(subtract(f, tn), Rational(1, n)));
  }
}

TEST_CASE("projection") {
  // swap kernel: the invariant vector is the average over the two atoms
  const auto est = projection(swap_kernel(), vec({1, 0}), 1e-9, 1024);
  CHECK(est.exact);
  CHECK(est.converged);
  CHECK(est.value == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});

  // identity: projection is the identity
  const auto est_id = projection(KernelOperator::identity(3), vec({2, -1, 5}), 1e-9, 1024);
  CHECK(est_id.exact);
  CHECK(est_id.value == vec({2, -1, 5}));

  // translation shift: everything in R_mu projects to zero
  const DSOperator shift = TranslationShift{Rational(1)};
  const StepFunction chi = StepFunction::indicator(Rational(0), Rational(1));
  const auto est_shift = projection(shift, chi, 1e-9, 1024);
  CHECK(est_shift.exact);
  CHECK(est_shift.value.is_zero());
  CHECK_THROWS_AS(projection(shift, StepFunction::constant(Rational(1)), 1e-9, 16),
                  std::invalid_argument);

  // sequence shift on a vanishing tail
  const auto est_seq = projection(DSOperator(SequenceShift{}), DiscreteVector::basis(1), 1e-9, 1024);
  CHECK(est_seq.exact);
  CHECK(est_seq.value.size() == 0);

  // strictly substochastic non-periodic kernel: the averages decay like
  // C / n, so the doubling path converges at moderate tolerances
  const KernelOperator shrink({{Rational(1, 2), Rational(1, 4)}, {Rational(1, 4), Rational(1, 2)}},
                              {Rational(1), Rational(1)});
  CHECK_FALSE(ops::periodic_cesaro_limit(shrink).has_value());
  const auto est_num = projection(shrink, vec({1, 1}), 1e-4, 1 << 16);
  CHECK_FALSE(est_num.exact);
  CHECK(est_num.converged);
  for (const auto& x : est_num.value) CHECK(rational_abs(x) < Rational(1, 1000));

  // a starved cap is reported, never silently accepted
  const auto est_starved = projection(shrink, vec({1, 1}), 1e-30, 8);
  CHECK_FALSE(est_starved.converged);
}

TEST_CASE("periodic power detection") {
  experiments::Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.uniform_int(2, 8);
    const KernelOperator T = experiments::random_permutation_kernel(rng, n);
    REQUIRE(verify_ds(DSOperator(T)).passed);
    const auto limit = ops::periodic_cesaro_limit(T);
    REQUIRE(limit.has_value());
    // the limit is invariant: T Q = Q = Q T and Q^2 = Q
    CHECK(T.compose(*limit) == *limit);
    CHECK(limit->compose(T) == *limit);
    CHECK(limit->compose(*limit) == *limit);
  }
}
