#pragma once

// Small exact rational type used by the series machinery (indicial roots,
// Frobenius coefficients, Laurent coefficients of the Liouville potential).
// Intermediates run through 128-bit integers; results that do not fit in
// 64 bits throw std::overflow_error rather than silently wrapping.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fibereig {

struct Rational {
  long long num = 0;
  long long den = 1;  // always > 0, gcd(|num|, den) = 1

  Rational() = default;
  Rational(long long n) : num(n) {}
  Rational(long long n, long long d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    *this = normalize(n, d);
  }

  static Rational normalize(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b != 0) {
      const __int128 r = a % b;
      a = b;
      b = r;
    }
    if (a != 0) {
      n /= a;
      d /= a;
    }
    constexpr __int128 lo = -__int128(0x7fffffffffffffffLL) - 1;
    constexpr __int128 hi = __int128(0x7fffffffffffffffLL);
    if (n < lo || n > hi || d > hi)
      throw std::overflow_error("Rational: value does not fit in 64 bits");
    Rational r;
    r.num = static_cast<long long>(n);
    r.den = static_cast<long long>(d);
    return r;
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_zero() const { return num == 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return normalize(__int128(a.num) * b.den + __int128(b.num) * a.den, __int128(a.den) * b.den);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return normalize(__int128(a.num) * b.den - __int128(b.num) * a.den, __int128(a.den) * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return normalize(__int128(a.num) * b.num, __int128(a.den) * b.den);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw std::invalid_argument("Rational: division by zero");
    return normalize(__int128(a.num) * b.den, __int128(a.den) * b.num);
  }
  Rational operator-() const {
    Rational r;
    r.num = -num;
    r.den = den;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return __int128(a.num) * b.den < __int128(b.num) * a.den;
  }

  std::string to_string() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

}  // namespace fibereig
