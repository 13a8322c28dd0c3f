// SPDX-License-Identifier: Apache-2.0
#include "wnls/rational.hpp"

#include <cmath>
#include <limits>

#include "wnls/error.hpp"

namespace wnls {
namespace {

int128 gcd128(int128 a, int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) { *this = make(num, den); }

Rational Rational::make(int128 num, int128 den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr int128 lim = std::numeric_limits<std::int64_t>::max();
  if (num > lim || num < -lim || den > lim) throw InvalidArgument("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::from_double(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw InvalidArgument("cannot convert non-finite value to a rational");
  const bool neg = x < 0.0;
  double rem = std::abs(x);
  // Convergents h/k of the continued fraction expansion.
  int128 h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_d = std::floor(rem);
    if (a_d > 1e15) break;
    const auto a = static_cast<int128>(a_d);
    const int128 h2 = a * h1 + h0;
    const int128 k2 = a * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double frac = rem - a_d;
    if (frac < 1e-15 * std::max(1.0, rem)) break;
    rem = 1.0 / frac;
  }
  if (k1 == 0) return Rational(0);
  return make(neg ? -h1 : h1, k1);
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::make(static_cast<int128>(a.num_) * b.den_ + static_cast<int128>(b.num_) * a.den_,
                        static_cast<int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::make(static_cast<int128>(a.num_) * b.num_, static_cast<int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw InvalidArgument("rational division by zero");
  return Rational::make(static_cast<int128>(a.num_) * b.den_, static_cast<int128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
  const int128 lhs = static_cast<int128>(a.num_) * b.den_;
  const int128 rhs = static_cast<int128>(b.num_) * a.den_;
  return lhs <=> rhs;
}

}  // namespace wnls
