#include "ergolab/rational.hpp"

#include <cctype>
#include <cstdio>
#include <limits>

namespace ergolab {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t slash = text.find('/');
  auto check_int = [&](const std::string& s) {
    if (s.empty()) throw std::invalid_argument("malformed rational: '" + text + "'");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) throw std::invalid_argument("malformed rational: '" + text + "'");
    for (std::size_t i = start; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i])))
        throw std::invalid_argument("malformed rational: '" + text + "'");
  };
  if (slash == std::string::npos) {
    check_int(text);
    return Rational(text);
  }
  std::string num = text.substr(0, slash);
  std::string den = text.substr(slash + 1);
  check_int(num);
  check_int(den);
  Rational r;
  try {
    r = Rational(text);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed rational: '" + text + "'");
  }
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in rational: '" + text + "'");
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& r) { return r.get_str(); }

std::string format_double(double x) {
  if (x == std::numeric_limits<double>::infinity()) return "inf";
  if (x == -std::numeric_limits<double>::infinity()) return "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

double to_double(const Rational& r) { return r.get_d(); }

Rational rational_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

Rational rational_min(const Rational& a, const Rational& b) { return a < b ? a : b; }
Rational rational_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

double ExtendedRational::to_double() const {
  return finite_ ? value_.get_d() : std::numeric_limits<double>::infinity();
}

std::string ExtendedRational::str() const { return finite_ ? format_rational(value_) : "inf"; }

ExtendedRational ExtendedRational::operator+(const ExtendedRational& o) const {
  if (!finite_ || !o.finite_) return infinity();
  return ExtendedRational(value_ + o.value_);
}

}  // namespace ergolab
