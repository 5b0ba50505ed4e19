#pragma once

// Exact arithmetic in the ring of integers O_K of an imaginary quadratic
// field K, its ideals, prime splitting and the finite quotients O_K/a.
//
// Elements are written x + y*w in the fixed integral basis (1, w) with
// w = (D + sqrt(D))/2, D the field discriminant. Then Tr(w) = D and
// N(w) = (D^2 - D)/4, for both even and odd D.

#include <array>
#include <complex>
#include <compare>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hermrep/arith.hpp"

namespace hermrep {

bool is_fundamental_discriminant(int64_t d);

class Field {
 public:
  /// Gaussian field Q(i).
  Field() = default;
  explicit Field(int64_t discriminant);

  int64_t disc() const noexcept { return disc_; }
  int64_t omega_trace() const noexcept { return disc_; }
  int64_t omega_norm() const noexcept { return (disc_ * disc_ - disc_) / 4; }
  /// Number of roots of unity in O_K.
  int roots_of_unity_count() const noexcept;
  std::complex<double> omega_embedding() const noexcept;

  bool operator==(const Field&) const = default;

 private:
  int64_t disc_ = -4;
};

class QuadInt {
 public:
  QuadInt() = default;
  QuadInt(const Field& k, int64_t x, int64_t y = 0) : field_(k), x_(x), y_(y) {}

  const Field& field() const noexcept { return field_; }
  int64_t x() const noexcept { return x_; }
  int64_t y() const noexcept { return y_; }

  bool is_zero() const noexcept { return x_ == 0 && y_ == 0; }
  bool is_unit() const { return norm() == 1; }
  bool is_rational() const noexcept { return y_ == 0; }

  int64_t norm() const;
  int64_t trace() const;
  QuadInt conj() const;
  std::complex<double> to_complex() const noexcept;

  QuadInt operator+(const QuadInt& o) const;
  QuadInt operator-(const QuadInt& o) const;
  QuadInt operator*(const QuadInt& o) const;
  QuadInt operator-() const;
  QuadInt& operator+=(const QuadInt& o) { return *this = *this + o; }
  QuadInt& operator-=(const QuadInt& o) { return *this = *this - o; }
  QuadInt& operator*=(const QuadInt& o) { return *this = *this * o; }
  QuadInt scaled(int64_t k) const;

  /// this / d when d divides this in O_K; throws std::domain_error otherwise.
  QuadInt divide_exact(const QuadInt& d) const;
  bool divisible_by(const QuadInt& d) const;

  bool operator==(const QuadInt& o) const noexcept {
    return x_ == o.x_ && y_ == o.y_ && field_ == o.field_;
  }
  /// Lexicographic on (x, y); both operands must share a field.
  std::strong_ordering operator<=>(const QuadInt& o) const noexcept {
    if (auto c = x_ <=> o.x_; c != 0) return c;
    return y_ <=> o.y_;
  }

  std::string str() const;

 private:
  void check_field(const QuadInt& o) const;

  Field field_;
  int64_t x_ = 0;
  int64_t y_ = 0;
};

std::ostream& operator<<(std::ostream& os, const QuadInt& q);

QuadInt omega(const Field& k);
/// i = 2 + w in Q(i).
QuadInt gaussian_i();

/// The omega_K roots of unity, 1 first, closed under multiplication.
std::vector<QuadInt> roots_of_unity(const Field& k);

/// Nonzero ideal of O_K, stored as the row-style Hermite normal form
/// [[h11, h12], [0, h22]] of its Z-lattice in (x, y) coordinates:
/// the lattice is Z(h11, h12) + Z(0, h22), h11, h22 > 0, 0 <= h12 < h22.
class QuadIdeal {
 public:
  static QuadIdeal from_generators(const Field& k, std::span<const QuadInt> gens);
  static QuadIdeal principal(const QuadInt& q);
  static QuadIdeal whole(const Field& k);
  /// Validates HNF shape and closure under multiplication by w.
  static QuadIdeal from_hnf(const Field& k, const std::array<int64_t, 4>& hnf);

  const Field& field() const noexcept { return field_; }
  /// Row-major (h11, h12, 0, h22).
  const std::array<int64_t, 4>& hnf() const noexcept { return hnf_; }
  int64_t norm() const noexcept { return hnf_[0] * hnf_[3]; }
  bool is_whole() const noexcept { return norm() == 1; }

  bool contains(const QuadInt& q) const;
  /// this ⊇ other, i.e. this divides other.
  bool contains(const QuadIdeal& other) const;
  /// Canonical residue with 0 <= x < h11, 0 <= y < h22.
  QuadInt reduce(const QuadInt& q) const;
  /// Z-basis (h11 + h12 w, h22 w).
  std::array<QuadInt, 2> z_basis() const;

  QuadIdeal operator*(const QuadIdeal& o) const;
  QuadIdeal operator+(const QuadIdeal& o) const;
  bool operator==(const QuadIdeal& o) const = default;

  std::string str() const;

 private:
  QuadIdeal(const Field& k, const std::array<int64_t, 4>& hnf) : field_(k), hnf_(hnf) {}

  Field field_;
  std::array<int64_t, 4> hnf_{1, 0, 0, 1};
};

std::ostream& operator<<(std::ostream& os, const QuadIdeal& a);

/// True iff u and v generate the unit ideal. Throws on the zero pair.
bool is_coprime_pair(const QuadInt& u, const QuadInt& v);

struct PrimeDivisor {
  QuadIdeal prime;
  int64_t residue_norm;    // N(p), equal to p or p^2
  int64_t rational_prime;  // p
};

/// Prime ideals above a rational prime p, with their norms.
std::vector<PrimeDivisor> primes_above(const Field& k, int64_t p);

/// Prime ideals dividing a, sorted by (rational prime, HNF), duplicate-free.
std::vector<PrimeDivisor> ideal_prime_divisors(const QuadIdeal& a);

/// All nonzero ideals of norm <= max_norm, sorted by (norm, HNF).
std::vector<QuadIdeal> enumerate_ideals(const Field& k, int64_t max_norm);

class OracleBoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The finite ring O_K/a with elements indexed 0..N(a)-1.
class QuotientRing {
 public:
  explicit QuotientRing(const QuadIdeal& ideal);

  const QuadIdeal& ideal() const noexcept { return ideal_; }
  uint32_t size() const noexcept { return size_; }
  uint32_t index_of(const QuadInt& q) const;
  QuadInt element(uint32_t i) const;

  uint32_t add(uint32_t a, uint32_t b) const;
  uint32_t sub(uint32_t a, uint32_t b) const;
  uint32_t mul(uint32_t a, uint32_t b) const;
  uint32_t zero() const noexcept { return 0; }
  uint32_t one() const;

  /// a and b generate the unit ideal of the quotient.
  bool is_unimodular(uint32_t a, uint32_t b) const;
  bool is_unit(uint32_t a) const { return is_unimodular(a, zero()); }
  std::vector<uint32_t> units() const;

 private:
  QuadIdeal ideal_;
  uint32_t size_;
  std::vector<uint32_t> mul_table_;  // filled when size is small
};

enum class CongruenceKind { full_level, hecke };

inline constexpr int64_t kDefaultOracleBound = 4096;

/// [Gamma_K : Gamma_K(a)] = |SL2(O_K/a)| (full_level) or
/// [Gamma_K : Gamma_K,0(a)] = |P^1(O_K/a)| (hecke), by enumeration of O_K/a.
int64_t sl2_index_oracle(const QuadIdeal& a, CongruenceKind kind,
                         int64_t oracle_bound = kDefaultOracleBound);

}  // namespace hermrep
