#pragma once

#include <compare>
#include <cstdint>

namespace smallcal {

/// Exact fraction num/den with den > 0, always in lowest terms.
/// Used wherever a ceiling of (integer x level) must be decided exactly.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Smallest integer >= this value.
  std::int64_t ceil() const;
  bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& l, const Rational& r);
  friend Rational operator-(const Rational& l, const Rational& r);
  friend Rational operator*(const Rational& l, const Rational& r);
  friend bool operator==(const Rational& l, const Rational& r) = default;
  friend std::strong_ordering operator<=>(const Rational& l, const Rational& r);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Best rational approximation of `value` with denominator <= max_den,
/// found by continued-fraction expansion. Decimal levels such as 0.9 or 0.905
/// come back as 9/10 and 181/200.
Rational rationalize(double value, std::int64_t max_den = 1'000'000);

/// ceil(n * level) where n * level is meant to be a ratio of integers.
/// If the floating-point product lies within a relative 1e-9 of an integer,
/// that integer is returned instead of being pushed up by rounding noise.
std::int64_t guarded_ceil(double product);

}  // namespace smallcal
