#pragma once

// Integral binary Hermitian forms f(u,v) = a|u|^2 + 2 Re(b u conj(v)) + c|v|^2
// over O_K and the right action of SL2(O_K) by precomposition.

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hermrep/arith.hpp"
#include "hermrep/ring.hpp"

namespace hermrep {

/// A pair (u, v) in O_K^2, acted on by column-vector multiplication.
struct QuadPair {
  QuadInt u;
  QuadInt v;

  QuadPair operator-() const { return {-u, -v}; }
  bool operator==(const QuadPair&) const = default;
  /// Lexicographic on (u.x, u.y, v.x, v.y).
  std::strong_ordering operator<=>(const QuadPair& o) const noexcept {
    if (auto c = u <=> o.u; c != 0) return c;
    return v <=> o.v;
  }
};

std::ostream& operator<<(std::ostream& os, const QuadPair& p);

/// Element of SL2(O_K): [[alpha, beta], [gamma, delta]] with determinant 1.
class UniMat {
 public:
  /// Throws std::invalid_argument unless alpha*delta - beta*gamma == 1.
  UniMat(const QuadInt& alpha, const QuadInt& beta, const QuadInt& gamma, const QuadInt& delta);

  static UniMat identity(const Field& k);
  static UniMat from_ints(const Field& k, int64_t a, int64_t b, int64_t c, int64_t d);

  const QuadInt& alpha() const noexcept { return m_[0]; }
  const QuadInt& beta() const noexcept { return m_[1]; }
  const QuadInt& gamma() const noexcept { return m_[2]; }
  const QuadInt& delta() const noexcept { return m_[3]; }
  const Field& field() const noexcept { return m_[0].field(); }

  /// Largest norm among the four entries.
  int64_t height() const;
  bool is_identity() const;
  bool is_minus_identity() const;

  UniMat operator*(const UniMat& o) const;
  UniMat operator-() const;
  UniMat inverse() const;
  QuadPair apply(const QuadPair& w) const;

  bool operator==(const UniMat& o) const = default;
  std::strong_ordering operator<=>(const UniMat& o) const noexcept;

  std::string str() const;

 private:
  struct Unchecked {};
  UniMat(Unchecked, const QuadInt& a, const QuadInt& b, const QuadInt& c, const QuadInt& d) : m_{a, b, c, d} {}

  std::array<QuadInt, 4> m_;
};

std::ostream& operator<<(std::ostream& os, const UniMat& g);

enum class FormKind { indefinite, definite, degenerate };

class HermitianForm {
 public:
  HermitianForm() = default;
  HermitianForm(int64_t a, const QuadInt& b, int64_t c) : a_(a), b_(b), c_(c) {}

  /// f_Delta(u, v) = |u|^2 - Delta |v|^2.
  static HermitianForm diagonal(const Field& k, int64_t delta);

  const Field& field() const noexcept { return b_.field(); }
  int64_t a() const noexcept { return a_; }
  const QuadInt& b() const noexcept { return b_; }
  int64_t c() const noexcept { return c_; }

  /// a N(u) + Tr(b u conj(v)) + c N(v).
  int64_t operator()(const QuadInt& u, const QuadInt& v) const;
  int64_t operator()(const QuadPair& w) const { return (*this)(w.u, w.v); }

  int64_t discriminant() const;
  FormKind classify() const;
  /// gcd of (a, c, b.x, b.y) in the fixed basis; for Q(i) this equals the
  /// gcd of a, c, Re b, Im b.
  int64_t content() const;
  bool is_primitive() const { return content() == 1; }
  HermitianForm primitive_part() const;

  HermitianForm operator-() const { return {-a_, -b_, -c_}; }
  bool operator==(const HermitianForm& o) const = default;

  std::string str() const;

 private:
  int64_t a_ = 0;
  QuadInt b_;
  int64_t c_ = 0;
};

std::ostream& operator<<(std::ostream& os, const HermitianForm& f);

int64_t eval_form(const HermitianForm& f, const QuadInt& u, const QuadInt& v);
int64_t discriminant(const HermitianForm& f);

/// f o g, i.e. (f o g)(w) = f(g w).
HermitianForm compose_form(const HermitianForm& f, const UniMat& g);

/// Boundary at infinity of the plane of f: a circle with rational center
/// -conj(b)/a (in basis coordinates) and radius^2 = Delta/a^2 when a != 0,
/// otherwise the real line {z : 2 Re(b z) + c = 0} together with infinity.
struct BoundaryCircle {
  enum class Kind { circle, line_with_infinity } kind;
  Rational center_x;  // coefficient of 1
  Rational center_y;  // coefficient of w
  Rational radius_sq;
  QuadInt line_b;     // line case: 2 Re(line_b z) + line_c = 0
  int64_t line_c = 0;

  std::complex<double> center() const;
  double radius() const;
};

/// Throws std::domain_error unless f is indefinite.
BoundaryCircle boundary_circle(const HermitianForm& f);

/// Every g in SL2(O_K) with entry norms <= height and f o g == target.
/// Enumerates first columns x with f(x) = target.a() and solves the linear
/// conditions for the second column; falls back to column pairing when
/// target.a() == 0.
std::vector<UniMat> matrices_transforming(const HermitianForm& f, const HermitianForm& target, int64_t height);

using Membership = std::function<bool(const UniMat&)>;

struct ReciprocitySearch {
  std::optional<UniMat> witness;
  int64_t height_bound = 0;
  /// Absence of a witness only means none exists within height_bound.
  bool bounded_search = true;
};

/// Looks for g in G with f o g == -f among matrices of height <= height_bound.
ReciprocitySearch reciprocity_witness(const HermitianForm& f, const Membership& in_group, int64_t height_bound);

/// All elements of O_K with norm <= bound, ordered by (norm, x, y).
std::vector<QuadInt> elements_up_to_norm(const Field& k, int64_t bound);

}  // namespace hermrep
