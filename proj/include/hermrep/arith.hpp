#pragma once

// Small exact integer helpers shared by every module: overflow-checked
// int64 arithmetic, gcd, trial-division factorization, the Kronecker symbol
// and a normalized int64 rational.

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hermrep {

class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

inline int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("int64 overflow in addition");
  return r;
}

inline int64_t checked_sub(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticOverflow("int64 overflow in subtraction");
  return r;
}

inline int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("int64 overflow in multiplication");
  return r;
}

/// Division rounding toward negative infinity; b != 0.
inline int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Remainder in [0, |b|).
inline int64_t floor_mod(int64_t a, int64_t b) {
  int64_t r = a % b;
  if (r < 0) r += (b < 0 ? -b : b);
  return r;
}

struct ExtGcd {
  int64_t g;  // >= 0
  int64_t s;
  int64_t t;  // s*a + t*b == g
};

ExtGcd ext_gcd(int64_t a, int64_t b);

/// Prime factorization by trial division, primes ascending. n >= 1.
std::vector<std::pair<int64_t, int>> factorize(int64_t n);

bool is_prime(int64_t n);

/// Kronecker symbol (d|n) for n >= 1.
int kronecker_symbol(int64_t d, int64_t n);

class Rational {
 public:
  Rational() = default;
  Rational(int64_t num) : num_(num), den_(1) {}  // NOLINT: implicit from integers
  Rational(int64_t num, int64_t den);

  int64_t num() const noexcept { return num_; }
  int64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const noexcept { return den_ == 1; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(checked_sub(0, num_), den_); }
  bool operator==(const Rational& o) const = default;
  bool operator<(const Rational& o) const;

  std::string str() const;

 private:
  int64_t num_ = 0;
  int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace hermrep
