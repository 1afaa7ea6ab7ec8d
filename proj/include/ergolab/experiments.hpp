#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ergolab/operators.hpp"
#include "ergolab/rational.hpp"
#include "ergolab/spaces.hpp"
#include "ergolab/step_function.hpp"

namespace ergolab::experiments {

/// Deterministic random source. Draws map the raw mt19937_64 stream through
/// explicit arithmetic only, so a seed fixes every generated instance.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  int uniform_int(int lo, int hi);  // inclusive bounds
  Rational rational(int max_abs_num, int max_den);           // num in [-max, max], den in [1, max_den]
  Rational positive_rational(int max_num, int max_den);      // num in [1, max]
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 eng_;
};

/// Substochastic kernel on unit weights: an average of random permutation
/// matrices scaled by a random factor <= 1, hence Dunford-Schwartz by
/// construction; optionally with random entry signs.
ops::KernelOperator random_substochastic_kernel(Rng& rng, int n, int num_permutations, bool positive);

/// Measure-preserving permutation kernel with random weights constant on
/// each cycle (the projection is the exact cycle average).
ops::KernelOperator random_permutation_kernel(Rng& rng, int n);

StepFunction random_step_function(Rng& rng, int max_pieces, int max_abs_num, int max_den);
std::vector<Rational> random_vector(Rng& rng, int n, int max_abs_num, int max_den);

/// (1, 1/2, 1/3, ..., 1/count, 0, 0, ...) on unit atoms.
DiscreteVector harmonic_vector(std::size_t count);

std::vector<int> doubling_schedule(int max_n);  // 1, 2, 4, ..., max_n (max included)

/// One measured quantity with its bound and outcome.
struct Measurement {
  std::string name;
  std::string value;
  std::string bound;  // empty for informational records
  bool ok = true;
};

/// Outcome record of one experiment. The verdict is pass exactly when every
/// bound-carrying measurement holds; unconverged marks an inconclusive run
/// and is never silently promoted.
struct Certificate {
  std::string experiment;
  std::string verdict = "pass";  // pass | fail | unconverged
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::string inputs_digest;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<Measurement> measurements;

  bool passed() const { return verdict == "pass"; }
  void check(std::string name, std::string value, std::string bound, bool ok);
  void note(std::string name, std::string value);
  void mark_unconverged();
  void param(std::string key, std::string value);
  void finalize();  // fills inputs_digest from experiment + params
};

/// Maximal ergodic positivity check: integrates f over the positivity set of
/// the signed truncated maximal function, at every stage of a doubling
/// schedule up to max_n. Exact rational arithmetic throughout; the kernel
/// must be entrywise nonnegative and Dunford-Schwartz.
Certificate hopf_check(const ops::KernelOperator& T, const std::vector<Rational>& f, int max_n);

/// Weak-type maximal bounds mu{M* > lambda} <= (2 ||f||_p / lambda)^p for
/// p in {1, 2}, with the sharper ||f||_1 / lambda bound added for positive
/// operators at p = 1. Comparisons are exact at rational lambda.
Certificate maximal_inequality_check(const ops::KernelOperator& T, const std::vector<Rational>& f, int p,
                                     const std::vector<Rational>& lambdas, int max_n);
Certificate maximal_inequality_check(const ops::DSOperator& T, const StepFunction& f, int p,
                                     const std::vector<Rational>& lambdas, int max_n);

struct EgorovStage {
  int stage = 0;
  double delta = 0.0;
  Rational budget;
  int n0 = -1;  // first schedule index that fits the budget; -1 when none
  Rational excluded;
};

/// Almost-uniform convergence bookkeeping: per stage j the deviation
/// threshold halves and the exceptional-measure budget eps 2^{-j} must
/// absorb where the suffix maxima still exceed it.
struct EgorovReport {
  Rational eps;
  bool converged = true;     // reference limit available
  bool proxy_limit = false;  // limit came from residual doubling, not a closed form
  Rational excluded_measure;
  std::vector<EgorovStage> stages;
  std::vector<std::pair<int, double>> sup_deviation_by_n;  // sup over the retained set
  std::vector<std::pair<Rational, Rational>> exceptional_intervals;
  bool pass = false;
};

EgorovReport egorov_search(const ops::DSOperator& T, const StepFunction& f, const Rational& eps,
                           int stages);
EgorovReport egorov_search(const ops::KernelOperator& T, const std::vector<Rational>& f,
                           const Rational& eps, int stages);

/// The translation-shift divergence identity: || M_2n chi - M_n chi ||_1 is
/// exactly one for every n, while the L1+Linf norm of M_n chi is exactly 1/n.
Certificate divergence_demo_continuous(const std::vector<int>& ns);

/// The sequence-shift mirror of the divergence identity on e_1.
Certificate divergence_demo_sequence(const std::vector<int>& ns);

/// Norm non-convergence with coordinatewise decay under the sequence shift:
/// averages dominate the tail vectors exactly, discrete Marcinkiewicz norms
/// stay above alpha_lower - tol, yet every fixed coordinate vanishes.
Certificate nonseparable_demo(const spaces::ConcavePhi& phi, const DiscreteVector& xi,
                              const std::vector<int>& ns, double alpha_lower, double tol);

struct DecayRow {
  int n = 0;
  spaces::NormValue d;
};

struct DecayTable {
  std::vector<DecayRow> rows;
};

/// Mean-ergodic decay table d_n = || M_n f - P f ||_X along a schedule;
/// passes when the doubling subsequence is eventually non-increasing and the
/// final value is below tol.
Certificate mean_ergodic_decay(const ops::DSOperator& T, const StepFunction& f,
                               const spaces::SpaceSpec& space, const std::vector<int>& schedule,
                               double tol, DecayTable* table = nullptr);
Certificate mean_ergodic_decay(const ops::KernelOperator& T, const std::vector<Rational>& f,
                               const spaces::SpaceSpec& space, const std::vector<int>& schedule,
                               double tol, DecayTable* table = nullptr);

/// P^2 = P and TP = P = PT, exact on the periodic-power path; within
/// 10 * tol and flagged approximate otherwise.
Certificate projection_identities(const ops::KernelOperator& T,
                                  const std::vector<std::vector<Rational>>& fs, double tol);

}  // namespace ergolab::experiments
