#include "smallcal/rational.hpp"

#include <cmath>
#include <numeric>

#include "smallcal/errors.hpp"

namespace smallcal {
namespace {

__extension__ typedef __int128 Wide;

Rational reduce(Wide num, Wide den) {
  if (den == 0) throw DomainError("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide a = num < 0 ? -num : num;
  Wide b = den;
  while (b != 0) {
    const Wide t = a % b;
    a = b;
    b = t;
  }
  const Wide g = a == 0 ? 1 : a;
  num /= g;
  den /= g;
  constexpr Wide kMax = INT64_MAX;
  if (num > kMax || num < -kMax || den > kMax) throw DomainError("rational: overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational: zero denominator");
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

std::int64_t Rational::ceil() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ > 0) ++q;
  return q;
}

Rational operator+(const Rational& l, const Rational& r) {
  return reduce(Wide(l.num_) * r.den_ + Wide(r.num_) * l.den_, Wide(l.den_) * r.den_);
}

Rational operator-(const Rational& l, const Rational& r) {
  return reduce(Wide(l.num_) * r.den_ - Wide(r.num_) * l.den_, Wide(l.den_) * r.den_);
}

Rational operator*(const Rational& l, const Rational& r) {
  return reduce(Wide(l.num_) * r.num_, Wide(l.den_) * r.den_);
}

std::strong_ordering operator<=>(const Rational& l, const Rational& r) {
  const Wide lhs = Wide(l.num_) * r.den_;
  const Wide rhs = Wide(r.num_) * l.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational rationalize(double value, std::int64_t max_den) {
  if (!std::isfinite(value)) throw DomainError("rationalize: value must be finite");
  if (max_den < 1) throw DomainError("rationalize: max_den must be >= 1");
  // Convergents h/k of the continued fraction of value.
  std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(value));
  std::int64_t k_prev = 0, k = 1;
  double frac = value - std::floor(value);
  while (frac > 1e-15 && std::abs(value - static_cast<double>(h) / k) > 1e-15 * std::abs(value)) {
    const double inv = 1.0 / frac;
    const double a = std::floor(inv);
    if (a > static_cast<double>(max_den)) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t k_next = ai * k + k_prev;
    if (k_next > max_den) break;
    const std::int64_t h_next = ai * h + h_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    frac = inv - a;
  }
  return Rational(h, k);
}

std::int64_t guarded_ceil(double product) {
  const double nearest = std::round(product);
  if (std::abs(product - nearest) <= 1e-9 * std::max(1.0, std::abs(product))) {
    return static_cast<std::int64_t>(nearest);
  }
  return static_cast<std::int64_t>(std::ceil(product));
}

}  // namespace smallcal
