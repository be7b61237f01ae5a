#include "qmlab/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qmlab/errors.hpp"

namespace qmlab {

namespace {

using i128 = __int128;

long long checked_narrow(i128 v) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min()) {
    throw std::overflow_error("Rational: intermediate value exceeds 64-bit range");
  }
  return static_cast<long long>(v);
}

Rational make_reduced(i128 num, i128 den) {
  if (den == 0) throw DomainError("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 g = den;
  while (a != 0) {
    i128 t = g % a;
    g = a;
    a = t;
  }
  if (g == 0) g = 1;
  return Rational(checked_narrow(num / g), checked_narrow(den / g));
}

}  // namespace

Rational::Rational(long long num, long long den) {
  if (den == 0) throw DomainError("Rational: zero denominator");
  i128 n = num;
  i128 d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 a = n < 0 ? -n : n;
  i128 g = d;
  while (a != 0) {
    i128 t = g % a;
    g = a;
    a = t;
  }
  if (g == 0) g = 1;
  num_ = checked_narrow(n / g);
  den_ = checked_narrow(d / g);
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("Rational::from_double: non-finite input");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double mantissa = std::frexp(x, &exp);
  // mantissa * 2^53 is an integer for every normal double.
  auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exp -= 53;
  while (scaled != 0 && (scaled & 1) == 0) {
    scaled >>= 1;
    ++exp;
  }
  if (exp >= 0) {
    if (exp > 62) throw std::overflow_error("Rational::from_double: magnitude too large");
    i128 num = i128(scaled) << exp;
    return make_reduced(num, 1);
  }
  if (-exp > 62) throw std::overflow_error("Rational::from_double: denominator too large");
  return Rational(scaled, 1LL << -exp);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  i128 num = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
  i128 den = i128(a.den_) * b.den_;
  return make_reduced(num, den);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return make_reduced(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw DomainError("Rational: division by zero");
  return make_reduced(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  i128 lhs = i128(a.num_) * b.den_;
  i128 rhs = i128(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

LebesgueIndex::LebesgueIndex(const Rational& p) : value_(p) {
  if (p < Rational(1)) throw DomainError("LebesgueIndex: p must be >= 1");
}

LebesgueIndex LebesgueIndex::infinity() { return LebesgueIndex(); }

LebesgueIndex LebesgueIndex::parse(std::string_view text) {
  auto fail = [&] { throw DomainError("LebesgueIndex: cannot parse '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  std::string lower(text);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "inf" || lower == "infinity") return infinity();

  auto parse_int = [&](std::string_view s) -> long long {
    if (s.empty()) fail();
    std::string buf(s);
    char* end = nullptr;
    errno = 0;
    long long v = std::strtoll(buf.c_str(), &end, 10);
    if (errno != 0 || end != buf.c_str() + buf.size()) fail();
    return v;
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    long long num = parse_int(text.substr(0, slash));
    long long den = parse_int(text.substr(slash + 1));
    if (den == 0) fail();
    return LebesgueIndex(Rational(num, den));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 17) fail();
    std::string digits = std::string(text.substr(0, dot)) + std::string(frac);
    long long num = parse_int(digits);
    long long den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    return LebesgueIndex(Rational(num, den));
  }
  return LebesgueIndex(Rational(parse_int(text)));
}

Rational LebesgueIndex::reciprocal() const {
  if (infinite_) return Rational(0);
  return Rational(1) / value_;
}

Rational LebesgueIndex::finite_value() const {
  if (infinite_) throw DomainError("LebesgueIndex: value is infinite");
  return value_;
}

double LebesgueIndex::to_double() const {
  if (infinite_) return std::numeric_limits<double>::infinity();
  return value_.to_double();
}

std::string LebesgueIndex::str() const { return infinite_ ? "inf" : value_.str(); }

std::weak_ordering operator<=>(const LebesgueIndex& a, const LebesgueIndex& b) {
  if (a.infinite_ && b.infinite_) return std::weak_ordering::equivalent;
  if (a.infinite_) return std::weak_ordering::greater;
  if (b.infinite_) return std::weak_ordering::less;
  return a.value_ <=> b.value_;
}

bool operator==(const LebesgueIndex& a, const Rational& b) {
  return !a.is_infinite() && a.finite_value() == b;
}

std::weak_ordering operator<=>(const LebesgueIndex& a, const Rational& b) {
  if (a.is_infinite()) return std::weak_ordering::greater;
  return a.finite_value() <=> b;
}

}  // namespace qmlab
