#include "ergolab/operators.hpp"

#include <algorithm>
#include <stdexcept>

namespace ergolab::ops {

// ---------------------------------------------------------------------------
// KernelOperator

KernelOperator::KernelOperator(std::vector<std::vector<Rational>> matrix, std::vector<Rational> weights)
    : matrix_(std::move(matrix)), weights_(std::move(weights)) {
  const std::size_t n = weights_.size();
  if (n == 0) throw std::invalid_argument("kernel must act on at least one atom");
  if (matrix_.size() != n) throw std::invalid_argument("kernel matrix must be square over the atom set");
  for (const auto& row : matrix_)
    if (row.size() != n) throw std::invalid_argument("kernel matrix must be square over the atom set");
  for (const auto& w : weights_)
    if (w <= 0) throw std::invalid_argument("atom weights must be positive");
}

KernelOperator KernelOperator::identity(std::size_t n) {
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return KernelOperator(std::move(m), std::vector<Rational>(n, Rational(1)));
}

KernelOperator KernelOperator::permutation(const std::vector<std::size_t>& sigma,
                                           std::vector<Rational> weights) {
  const std::size_t n = sigma.size();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (sigma[i] >= n) throw std::invalid_argument("permutation index out of range");
    m[i][sigma[i]] = 1;  // (Tf)(i) = f(sigma(i))
  }
  return KernelOperator(std::move(m), std::move(weights));
}

std::vector<Rational> KernelOperator::apply(const std::vector<Rational>& x) const {
  const std::size_t n = size();
  if (x.size() != n) throw std::invalid_argument("kernel applied to a vector of mismatched length");
  std::vector<Rational> y(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    Rational s(0);
    for (std::size_t j = 0; j < n; ++j) s += matrix_[i][j] * x[j];
    y[i] = std::move(s);
  }
  return y;
}

KernelOperator KernelOperator::compose(const KernelOperator& other) const {
  const std::size_t n = size();
  if (other.size() != n) throw std::invalid_argument("kernel composition size mismatch");
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (matrix_[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) m[i][j] += matrix_[i][k] * other.matrix_[k][j];
    }
  return KernelOperator(std::move(m), weights_);
}

KernelOperator KernelOperator::modulus() const {
  std::vector<std::vector<Rational>> m = matrix_;
  for (auto& row : m)
    for (auto& e : row) e = rational_abs(e);
  return KernelOperator(std::move(m), weights_);
}

bool KernelOperator::nonnegative() const {
  for (const auto& row : matrix_)
    for (const auto& e : row)
      if (e < 0) return false;
  return true;
}

KernelOperator CompositionOperator::to_kernel() const {
  return KernelOperator::permutation(map, weights);
}

std::string operator_kind(const DSOperator& op) {
  return std::visit(
      [](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, TranslationShift>) return "shift";
        if constexpr (std::is_same_v<T, SequenceShift>) return "seqshift";
        if constexpr (std::is_same_v<T, KernelOperator>) return "kernel";
        if constexpr (std::is_same_v<T, CompositionOperator>) return "composition";
      },
      op);
}

// ---------------------------------------------------------------------------
// apply

namespace {

StepFunction apply_shift(const TranslationShift& shift, const StepFunction& f) {
  if (shift.h <= 0) throw std::invalid_argument("translation step must be positive");
  std::vector<Rational> breaks;
  std::vector<Rational> values;
  breaks.reserve(f.piece_count() + 1);
  values.reserve(f.piece_count() + 1);
  breaks.push_back(shift.h);
  values.push_back(Rational(0));
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    breaks.push_back(f.breakpoints()[i] + shift.h);
    values.push_back(f.values()[i]);
  }
  return StepFunction(std::move(breaks), std::move(values), f.tail_value());
}

DiscreteVector pad_to(const DiscreteVector& f, std::size_t n) {
  if (f.tail_value() != 0)
    throw std::invalid_argument("finite kernels act on finitely supported vectors (zero tail)");
  if (f.size() > n) throw std::invalid_argument("vector support exceeds the kernel's atom count");
  std::vector<Rational> x(f.entries());
  x.resize(n, Rational(0));
  return DiscreteVector(f.weight(), std::move(x));
}

}  // namespace

StepFunction apply(const DSOperator& op, const StepFunction& f) {
  if (const auto* shift = std::get_if<TranslationShift>(&op)) return apply_shift(*shift, f);
  throw std::domain_error("operator '" + operator_kind(op) + "' does not act on functions on (0, infinity)");
}

DiscreteVector apply(const DSOperator& op, const DiscreteVector& f) {
  if (std::holds_alternative<SequenceShift>(op)) {
    std::vector<Rational> x;
    x.reserve(f.size() + 1);
    x.push_back(Rational(0));
    x.insert(x.end(), f.entries().begin(), f.entries().end());
    return DiscreteVector(f.weight(), std::move(x), f.tail_value());
  }
  const KernelOperator* kernel = std::get_if<KernelOperator>(&op);
  KernelOperator lowered = KernelOperator::identity(1);
  if (!kernel) {
    const auto* comp = std::get_if<CompositionOperator>(&op);
    if (!comp) throw std::domain_error("translation shift does not act on sequences");
    lowered = comp->to_kernel();
    kernel = &lowered;
  }
  for (const auto& w : kernel->weights())
    if (w != f.weight())
      throw std::invalid_argument("kernel weights disagree with the vector's atom weight");
  std::vector<Rational> x = pad_to(f, kernel->size()).entries();
  x.resize(kernel->size(), Rational(0));  // canonicalization may drop zero entries
  return DiscreteVector(f.weight(), kernel->apply(x));
}

// ---------------------------------------------------------------------------
// verify_ds

DsCertificate verify_ds(const DSOperator& op) {
  DsCertificate cert;
  if (std::holds_alternative<TranslationShift>(op) || std::holds_alternative<SequenceShift>(op)) {
    // measure-preserving injections: isometries into L^1, contractions on L^inf
    cert.passed = true;
    cert.analytic = true;
    cert.l1_margin = 0;
    cert.linf_margin = 0;
    return cert;
  }
  const KernelOperator kernel = std::holds_alternative<KernelOperator>(op)
                                    ? std::get<KernelOperator>(op)
                                    : std::get<CompositionOperator>(op).to_kernel();
  const std::size_t n = kernel.size();
  const auto& a = kernel.matrix();
  const auto& w = kernel.weights();
  bool first = true;
  std::size_t bad_col = n, bad_row = n;
  for (std::size_t j = 0; j < n; ++j) {
    Rational col(0);
    for (std::size_t i = 0; i < n; ++i) col += w[i] * rational_abs(a[i][j]);
    const Rational margin = w[j] - col;
    if (first || margin < cert.l1_margin) cert.l1_margin = margin;
    if (margin < 0 && bad_col == n) bad_col = j;
    first = false;
  }
  first = true;
  for (std::size_t i = 0; i < n; ++i) {
    Rational row(0);
    for (std::size_t j = 0; j < n; ++j) row += rational_abs(a[i][j]);
    const Rational margin = Rational(1) - row;
    if (first || margin < cert.linf_margin) cert.linf_margin = margin;
    if (margin < 0 && bad_row == n) bad_row = i;
    first = false;
  }
  cert.passed = cert.l1_margin >= 0 && cert.linf_margin >= 0;
  if (bad_col < n) cert.witness = "column " + std::to_string(bad_col);
  if (bad_row < n) cert.witness += (cert.witness.empty() ? "" : "; ") + std::string("row ") + std::to_string(bad_row);
  return cert;
}

// ---------------------------------------------------------------------------
// Cesaro machinery

template <class F>
F CesaroSequence<F>::average() const {
  return scale(sum_, Rational(1, n_));
}

template <>
std::vector<Rational> CesaroSequence<std::vector<Rational>>::average() const {
  std::vector<Rational> out(sum_.size());
  const Rational inv(1, n_);
  for (std::size_t i = 0; i < sum_.size(); ++i) out[i] = sum_[i] * inv;
  return out;
}

template <class F>
void CesaroSequence<F>::advance() {
  power_ = ergolab::ops::apply(op_, power_);
  sum_ = add(sum_, power_);
  ++n_;
}

template <>
void CesaroSequence<std::vector<Rational>>::advance() {
  const auto& kernel = std::get<KernelOperator>(op_);
  power_ = kernel.apply(power_);
  for (std::size_t i = 0; i < sum_.size(); ++i) sum_[i] += power_[i];
  ++n_;
}

template class CesaroSequence<StepFunction>;
template class CesaroSequence<DiscreteVector>;
template class CesaroSequence<std::vector<Rational>>;

namespace {

template <class F>
F cesaro_average_impl(const DSOperator& op, const F& f, int n) {
  if (n < 1) throw std::invalid_argument("Cesaro average needs n >= 1");
  CesaroSequence<F> seq(op, f);
  while (seq.n() < n) seq.advance();
  return seq.average();
}

}  // namespace

StepFunction cesaro_average(const DSOperator& op, const StepFunction& f, int n) {
  return cesaro_average_impl(op, f, n);
}

DiscreteVector cesaro_average(const DSOperator& op, const DiscreteVector& f, int n) {
  return cesaro_average_impl(op, f, n);
}

std::vector<Rational> cesaro_average(const KernelOperator& op, const std::vector<Rational>& f, int n) {
  return cesaro_average_impl(DSOperator(op), f, n);
}

namespace {

std::vector<Rational> vec_abs(const std::vector<Rational>& x) {
  std::vector<Rational> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = rational_abs(x[i]);
  return y;
}

std::vector<Rational> vec_max(std::vector<Rational> x, const std::vector<Rational>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rational_max(x[i], y[i]);
  return x;
}

template <class F, class AbsOp, class MaxOp>
F maximal_impl(const DSOperator& op, const F& f, int max_n, AbsOp&& abs_op, MaxOp&& max_op) {
  if (max_n < 1) throw std::invalid_argument("maximal function needs at least one average");
  CesaroSequence<F> seq(op, f);
  F out = abs_op(seq.average());
  while (seq.n() < max_n) {
    seq.advance();
    out = max_op(std::move(out), abs_op(seq.average()));
  }
  return out;
}

}  // namespace

StepFunction maximal_function(const DSOperator& op, const StepFunction& f, int max_n) {
  return maximal_impl(
      op, f, max_n, [](const StepFunction& g) { return abs(g); },
      [](StepFunction a, const StepFunction& b) { return pointwise_max(a, b); });
}

DiscreteVector maximal_function(const DSOperator& op, const DiscreteVector& f, int max_n) {
  return maximal_impl(
      op, f, max_n, [](const DiscreteVector& g) { return abs(g); },
      [](DiscreteVector a, const DiscreteVector& b) { return pointwise_max(a, b); });
}

std::vector<Rational> maximal_function(const KernelOperator& op, const std::vector<Rational>& f,
                                       int max_n) {
  return maximal_impl(
      DSOperator(op), f, max_n, [](const std::vector<Rational>& g) { return vec_abs(g); },
      [](std::vector<Rational> a, const std::vector<Rational>& b) { return vec_max(std::move(a), b); });
}

std::vector<Rational> maximal_function_signed(const KernelOperator& op, const std::vector<Rational>& f,
                                              int max_n) {
  return maximal_impl(
      DSOperator(op), f, max_n, [](const std::vector<Rational>& g) { return g; },
      [](std::vector<Rational> a, const std::vector<Rational>& b) { return vec_max(std::move(a), b); });
}

DSOperator linear_modulus(const DSOperator& op) {
  if (const auto* kernel = std::get_if<KernelOperator>(&op)) return DSOperator(kernel->modulus());
  throw std::domain_error("linear modulus is computed for kernel operators only");
}

// ---------------------------------------------------------------------------
// projection

std::optional<KernelOperator> periodic_cesaro_limit(const KernelOperator& op, int power_cap) {
  std::vector<KernelOperator> powers;  // powers[k] = A^{k+1}
  powers.push_back(op);
  for (int k = 1; k < power_cap; ++k) {
    KernelOperator next = op.compose(powers.back());
    for (std::size_t j = 0; j < powers.size(); ++j) {
      if (powers[j] == next) {
        // A^{j+1} == A^{k+1}: powers cycle with period k - j from exponent j+1 on.
        const std::size_t k0 = j;
        const std::size_t period = powers.size() - j;
        const std::size_t n = op.size();
        std::vector<std::vector<Rational>> q(n, std::vector<Rational>(n, Rational(0)));
        for (std::size_t t = k0; t < k0 + period; ++t)
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) q[r][c] += powers[t].matrix()[r][c];
        const Rational inv(1, static_cast<unsigned long>(period));
        for (auto& row : q)
          for (auto& e : row) e *= inv;
        return KernelOperator(std::move(q), op.weights());
      }
    }
    powers.push_back(std::move(next));
  }
  return std::nullopt;
}

namespace {

double reference_residual(const std::vector<Rational>& a, const std::vector<Rational>& b,
                          const std::vector<Rational>& weights) {
  std::vector<Rational> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const StepFunction step = step_from_weighted(d, weights);
  return to_double(partial_integral(rearrangement(step), Rational(1)));
}

template <class F>
ProjectionEstimate<F> zero_projection(const F& like) {
  ProjectionEstimate<F> est;
  est.value = scale(like, Rational(0));
  est.exact = true;
  est.converged = true;
  est.n_used = 0;
  return est;
}

}  // namespace

ProjectionEstimate<StepFunction> projection(const DSOperator& op, const StepFunction& f, double /*tol*/,
                                            int /*n_cap*/) {
  if (!std::holds_alternative<TranslationShift>(op))
    throw std::domain_error("operator '" + operator_kind(op) + "' does not act on functions on (0, infinity)");
  if (!in_R_mu(f))
    throw std::invalid_argument("projection under a translation shift requires membership in R_mu");
  // the shift has no nonzero invariant functions in R_mu
  return zero_projection(f);
}

ProjectionEstimate<DiscreteVector> projection(const DSOperator& op, const DiscreteVector& f, double tol,
                                              int n_cap) {
  if (std::holds_alternative<SequenceShift>(op)) {
    if (!in_R_mu(f))
      throw std::invalid_argument("projection under the sequence shift requires a vanishing tail");
    return zero_projection(f);
  }
  const KernelOperator kernel = std::holds_alternative<KernelOperator>(op)
                                    ? std::get<KernelOperator>(op)
                                    : std::get<CompositionOperator>(op).to_kernel();
  for (const auto& w : kernel.weights())
    if (w != f.weight())
      throw std::invalid_argument("kernel weights disagree with the vector's atom weight");
  if (f.tail_value() != 0)
    throw std::invalid_argument("finite kernels act on finitely supported vectors (zero tail)");
  if (f.size() > kernel.size())
    throw std::invalid_argument("vector support exceeds the kernel's atom count");
  std::vector<Rational> x(f.entries());
  x.resize(kernel.size(), Rational(0));
  auto est = projection(kernel, x, tol, n_cap);
  ProjectionEstimate<DiscreteVector> out;
  out.value = DiscreteVector(f.weight(), std::move(est.value));
  out.n_used = est.n_used;
  out.residual = est.residual;
  out.exact = est.exact;
  out.converged = est.converged;
  return out;
}

ProjectionEstimate<std::vector<Rational>> projection(const KernelOperator& op,
                                                     const std::vector<Rational>& f, double tol,
                                                     int n_cap) {
  ProjectionEstimate<std::vector<Rational>> est;
  if (auto limit = periodic_cesaro_limit(op)) {
    est.value = limit->apply(f);
    est.exact = true;
    est.converged = true;
    return est;
  }
  // residual doubling; an estimate, never claimed exact
  CesaroSequence<std::vector<Rational>> seq(DSOperator(op), f);
  std::vector<Rational> prev = seq.average();
  int n = 1;
  while (n < n_cap) {
    const int target = std::min(2 * n, n_cap);
    while (seq.n() < target) seq.advance();
    std::vector<Rational> cur = seq.average();
    est.residual = reference_residual(cur, prev, op.weights());
    est.n_used = target;
    if (est.residual < tol) {
      est.value = std::move(cur);
      est.converged = true;
      return est;
    }
    prev = std::move(cur);
    n = target;
  }
  est.value = std::move(prev);
  est.converged = false;  // explicit unconverged outcome
  return est;
}

}  // namespace ergolab::ops
