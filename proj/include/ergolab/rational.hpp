#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>

namespace ergolab {

/// Exact rational scalar used throughout the library.
using Rational = mpq_class;

/// Parses "p/q", "p" or "-p/q" (whitespace-free). Throws std::invalid_argument
/// on malformed input or a zero denominator.
Rational parse_rational(const std::string& text);

/// Canonical textual form: "p/q", or just "p" when the denominator is 1.
std::string format_rational(const Rational& r);

/// Decimal with 12 significant digits (used for human-readable output).
std::string format_double(double x);

double to_double(const Rational& r);

Rational rational_abs(const Rational& r);

Rational rational_min(const Rational& a, const Rational& b);
Rational rational_max(const Rational& a, const Rational& b);

/// A nonnegative extended rational: finite value or +infinity.
/// Infinity is an ordinary outcome of measure queries, never an error.
class ExtendedRational {
 public:
  ExtendedRational() : finite_(true), value_(0) {}
  ExtendedRational(Rational v) : finite_(true), value_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  ExtendedRational(int v) : finite_(true), value_(v) {}                  // NOLINT(google-explicit-constructor)

  static ExtendedRational infinity() {
    ExtendedRational e;
    e.finite_ = false;
    return e;
  }

  bool is_infinite() const { return !finite_; }
  bool is_finite() const { return finite_; }

  const Rational& value() const {
    if (!finite_) throw std::logic_error("value() on infinite ExtendedRational");
    return value_;
  }

  double to_double() const;
  std::string str() const;  // "inf" or canonical rational

  ExtendedRational operator+(const ExtendedRational& o) const;

  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.value_ == b.value_;
  }
  friend bool operator!=(const ExtendedRational& a, const ExtendedRational& b) { return !(a == b); }
  friend bool operator<(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.finite_ && b.finite_) return a.value_ < b.value_;
    return a.finite_ && !b.finite_;
  }
  friend bool operator<=(const ExtendedRational& a, const ExtendedRational& b) {
    return a == b || a < b;
  }

 private:
  bool finite_;
  Rational value_;
};

}  // namespace ergolab
