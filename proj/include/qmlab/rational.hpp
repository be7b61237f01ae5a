#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace qmlab {

// Exact rational arithmetic on int64 numerator/denominator.  All exponent
// formulas in this library are rational functions of rational inputs, so
// evaluating them here avoids any floating-point rounding until the final
// conversion to double.
//
// Invariants: den > 0, gcd(|num|, den) == 1, 0 == 0/1.
// Intermediates use __int128; results that do not fit in int64 throw
// std::overflow_error.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(long long value) : num_(value) {}  // NOLINT: implicit by design
  Rational(long long num, long long den);

  // Exact conversion of a finite double (every finite double is a dyadic
  // rational).  Throws std::overflow_error if num or den exceeds int64.
  static Rational from_double(double x);

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);  // throws on b == 0
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  long long num_ = 0;
  long long den_ = 1;
};

Rational abs(const Rational& r);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

// A Lebesgue integrability index: either a finite rational >= 1 or infinity.
// The reciprocal of infinity is exactly 0, which makes 1/p the natural
// internal coordinate.
class LebesgueIndex {
 public:
  LebesgueIndex(const Rational& p);      // NOLINT: implicit by design
  LebesgueIndex(long long p) : LebesgueIndex(Rational(p)) {}

  static LebesgueIndex infinity();

  // Accepts "inf" (any case), an integer "4", a fraction "5/2", or a decimal
  // "2.5" (parsed exactly as digits/10^k).  Throws DomainError on anything
  // else or on a value < 1.
  static LebesgueIndex parse(std::string_view text);

  bool is_infinite() const { return infinite_; }
  // 1/p; exactly 0 when infinite.
  Rational reciprocal() const;
  // Finite value; throws DomainError when infinite.
  Rational finite_value() const;
  double to_double() const;  // +infinity when infinite
  std::string str() const;   // "inf", "4", or "5/2"

  friend bool operator==(const LebesgueIndex& a, const LebesgueIndex& b) = default;
  friend std::weak_ordering operator<=>(const LebesgueIndex& a, const LebesgueIndex& b);

 private:
  LebesgueIndex() : infinite_(true) {}
  bool infinite_ = false;
  Rational value_{2};
};

bool operator==(const LebesgueIndex& a, const Rational& b);
std::weak_ordering operator<=>(const LebesgueIndex& a, const Rational& b);

}  // namespace qmlab
