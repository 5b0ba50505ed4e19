#include "hermrep/ring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hermrep {

namespace {

bool squarefree(int64_t n) {
  for (const auto& [p, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

// Row-style HNF of a rank-2 sublattice of Z^2, built incrementally.
class LatticeHnf {
 public:
  void add(int64_t x, int64_t y) {
    if (x == 0) {
      fold_second(y);
      return;
    }
    if (a_ == 0) {
      a_ = x;
      b_ = y;
      return;
    }
    const ExtGcd e = ext_gcd(a_, x);
    const int64_t nb = checked_add(checked_mul(e.s, b_), checked_mul(e.t, y));
    const int64_t rest = checked_sub(checked_mul(x / e.g, b_), checked_mul(a_ / e.g, y));
    a_ = e.g;
    b_ = nb;
    fold_second(rest);
  }

  bool full_rank() const noexcept { return a_ != 0 && d_ != 0; }

  std::array<int64_t, 4> hnf() const {
    int64_t a = a_, b = b_;
    if (a < 0) {
      a = -a;
      b = -b;
    }
    return {a, floor_mod(b, d_), 0, d_};
  }

 private:
  void fold_second(int64_t y) {
    d_ = std::gcd(d_, y);
    if (d_ != 0) b_ = floor_mod(b_, d_);
  }

  int64_t a_ = 0, b_ = 0, d_ = 0;
};

void add_element(LatticeHnf& lat, const QuadInt& q) {
  // q and q*w span the same Z-module as the O_K-multiples of q.
  const Field& k = q.field();
  lat.add(q.x(), q.y());
  lat.add(checked_mul(-k.omega_norm(), q.y()),
          checked_add(q.x(), checked_mul(k.omega_trace(), q.y())));
}

}  // namespace

bool is_fundamental_discriminant(int64_t d) {
  if (d >= 0) return false;
  const int64_t r = floor_mod(d, 4);
  if (r == 1) return squarefree(-d);
  if (r != 0) return false;
  const int64_t m = d / 4;
  const int64_t rm = floor_mod(m, 4);
  return (rm == 2 || rm == 3) && squarefree(-m);
}

Field::Field(int64_t discriminant) : disc_(discriminant) {
  if (!is_fundamental_discriminant(discriminant))
    throw std::invalid_argument("Field: " + std::to_string(discriminant) +
                                " is not a negative fundamental discriminant");
}

int Field::roots_of_unity_count() const noexcept {
  if (disc_ == -4) return 4;
  if (disc_ == -3) return 6;
  return 2;
}

std::complex<double> Field::omega_embedding() const noexcept {
  return {0.5 * static_cast<double>(disc_), 0.5 * std::sqrt(static_cast<double>(-disc_))};
}

void QuadInt::check_field(const QuadInt& o) const {
  if (!(field_ == o.field_)) throw std::invalid_argument("QuadInt: field mismatch");
}

int64_t QuadInt::norm() const {
  return checked_add(checked_add(checked_mul(x_, x_), checked_mul(field_.omega_trace(), checked_mul(x_, y_))),
                     checked_mul(field_.omega_norm(), checked_mul(y_, y_)));
}

int64_t QuadInt::trace() const {
  return checked_add(checked_mul(2, x_), checked_mul(field_.omega_trace(), y_));
}

QuadInt QuadInt::conj() const {
  return {field_, checked_add(x_, checked_mul(field_.omega_trace(), y_)), checked_sub(0, y_)};
}

std::complex<double> QuadInt::to_complex() const noexcept {
  return static_cast<double>(x_) + static_cast<double>(y_) * field_.omega_embedding();
}

QuadInt QuadInt::operator+(const QuadInt& o) const {
  check_field(o);
  return {field_, checked_add(x_, o.x_), checked_add(y_, o.y_)};
}

QuadInt QuadInt::operator-(const QuadInt& o) const {
  check_field(o);
  return {field_, checked_sub(x_, o.x_), checked_sub(y_, o.y_)};
}

QuadInt QuadInt::operator*(const QuadInt& o) const {
  check_field(o);
  const int64_t yy = checked_mul(y_, o.y_);
  const int64_t nx = checked_sub(checked_mul(x_, o.x_), checked_mul(field_.omega_norm(), yy));
  const int64_t ny = checked_add(checked_add(checked_mul(x_, o.y_), checked_mul(o.x_, y_)),
                                 checked_mul(field_.omega_trace(), yy));
  return {field_, nx, ny};
}

QuadInt QuadInt::operator-() const { return {field_, checked_sub(0, x_), checked_sub(0, y_)}; }

QuadInt QuadInt::scaled(int64_t k) const { return {field_, checked_mul(k, x_), checked_mul(k, y_)}; }

bool QuadInt::divisible_by(const QuadInt& d) const {
  check_field(d);
  if (d.is_zero()) return is_zero();
  const QuadInt p = *this * d.conj();
  const int64_t n = d.norm();
  return p.x_ % n == 0 && p.y_ % n == 0;
}

QuadInt QuadInt::divide_exact(const QuadInt& d) const {
  check_field(d);
  if (d.is_zero()) throw std::domain_error("QuadInt: division by zero");
  const QuadInt p = *this * d.conj();
  const int64_t n = d.norm();
  if (p.x_ % n != 0 || p.y_ % n != 0) throw std::domain_error("QuadInt: inexact division");
  return {field_, p.x_ / n, p.y_ / n};
}

std::string QuadInt::str() const {
  std::ostringstream os;
  if (y_ == 0) {
    os << x_;
    return os.str();
  }
  if (x_ != 0) os << x_ << (y_ > 0 ? "+" : "-");
  else if (y_ < 0) os << "-";
  const int64_t ay = y_ < 0 ? -y_ : y_;
  if (ay != 1) os << ay << "*";
  os << "w";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const QuadInt& q) { return os << q.str(); }

QuadInt omega(const Field& k) { return {k, 0, 1}; }

QuadInt gaussian_i() { return {Field(-4), 2, 1}; }

std::vector<QuadInt> roots_of_unity(const Field& k) {
  std::vector<QuadInt> out;
  // Units have |y| <= 2/sqrt(|D|) and small x; the box below covers D = -3, -4.
  for (int64_t y = -2; y <= 2; ++y)
    for (int64_t x = -6; x <= 6; ++x) {
      const QuadInt q(k, x, y);
      if (q.norm() == 1) out.push_back(q);
    }
  std::sort(out.begin(), out.end(), [](const QuadInt& a, const QuadInt& b) {
    const bool a1 = a.x() == 1 && a.y() == 0, b1 = b.x() == 1 && b.y() == 0;
    if (a1 != b1) return a1;
    return a < b;
  });
  return out;
}

QuadIdeal QuadIdeal::from_generators(const Field& k, std::span<const QuadInt> gens) {
  LatticeHnf lat;
  for (const QuadInt& g : gens) {
    if (!(g.field() == k)) throw std::invalid_argument("QuadIdeal: field mismatch");
    add_element(lat, g);
  }
  if (!lat.full_rank()) throw std::invalid_argument("QuadIdeal: zero ideal");
  return QuadIdeal(k, lat.hnf());
}

QuadIdeal QuadIdeal::principal(const QuadInt& q) {
  const QuadInt gens[] = {q};
  return from_generators(q.field(), gens);
}

QuadIdeal QuadIdeal::whole(const Field& k) { return QuadIdeal(k, {1, 0, 0, 1}); }

QuadIdeal QuadIdeal::from_hnf(const Field& k, const std::array<int64_t, 4>& h) {
  if (h[0] <= 0 || h[3] <= 0 || h[2] != 0 || h[1] < 0 || h[1] >= h[3])
    throw std::invalid_argument("QuadIdeal: matrix is not in Hermite normal form");
  const QuadIdeal out(k, h);
  for (const QuadInt& b : out.z_basis())
    if (!out.contains(b * omega(k))) throw std::invalid_argument("QuadIdeal: lattice is not an ideal");
  return out;
}

QuadInt QuadIdeal::reduce(const QuadInt& q) const {
  const int64_t k = floor_div(q.x(), hnf_[0]);
  const int64_t x = checked_sub(q.x(), checked_mul(k, hnf_[0]));
  const int64_t y = floor_mod(checked_sub(q.y(), checked_mul(k, hnf_[1])), hnf_[3]);
  return {field_, x, y};
}

bool QuadIdeal::contains(const QuadInt& q) const {
  if (!(q.field() == field_)) throw std::invalid_argument("QuadIdeal: field mismatch");
  return reduce(q).is_zero();
}

bool QuadIdeal::contains(const QuadIdeal& other) const {
  for (const QuadInt& b : other.z_basis())
    if (!contains(b)) return false;
  return true;
}

std::array<QuadInt, 2> QuadIdeal::z_basis() const {
  return {QuadInt(field_, hnf_[0], hnf_[1]), QuadInt(field_, 0, hnf_[3])};
}

QuadIdeal QuadIdeal::operator*(const QuadIdeal& o) const {
  const auto a = z_basis();
  const auto b = o.z_basis();
  const QuadInt gens[] = {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
  return from_generators(field_, gens);
}

QuadIdeal QuadIdeal::operator+(const QuadIdeal& o) const {
  const auto a = z_basis();
  const auto b = o.z_basis();
  const QuadInt gens[] = {a[0], a[1], b[0], b[1]};
  return from_generators(field_, gens);
}

std::string QuadIdeal::str() const {
  std::ostringstream os;
  os << "[[" << hnf_[0] << "," << hnf_[1] << "],[0," << hnf_[3] << "]]";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const QuadIdeal& a) { return os << a.str(); }

bool is_coprime_pair(const QuadInt& u, const QuadInt& v) {
  if (u.is_zero() && v.is_zero()) throw std::invalid_argument("is_coprime_pair: zero pair");
  if (!(u.field() == v.field())) throw std::invalid_argument("is_coprime_pair: field mismatch");
  LatticeHnf lat;
  add_element(lat, u);
  add_element(lat, v);
  if (!lat.full_rank()) return false;
  const auto h = lat.hnf();
  return h[0] == 1 && h[3] == 1;
}

std::vector<PrimeDivisor> primes_above(const Field& k, int64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("primes_above: not a prime");
  // Roots of x^2 - Tx + N (the minimal polynomial of w) modulo p.
  std::vector<int64_t> roots;
  for (int64_t r = 0; r < p; ++r) {
    const int64_t v = floor_mod(floor_mod(r * r, p) - floor_mod(k.omega_trace() * r, p) + floor_mod(k.omega_norm(), p), p);
    if (v == 0) roots.push_back(r);
  }
  std::vector<PrimeDivisor> out;
  if (roots.empty()) {
    out.push_back({QuadIdeal::principal(QuadInt(k, p)), p * p, p});
    return out;
  }
  for (int64_t r : roots) {
    const QuadInt gens[] = {QuadInt(k, p), QuadInt(k, -r, 1)};
    out.push_back({QuadIdeal::from_generators(k, gens), p, p});
  }
  std::sort(out.begin(), out.end(),
            [](const PrimeDivisor& a, const PrimeDivisor& b) { return a.prime.hnf() < b.prime.hnf(); });
  return out;
}

std::vector<PrimeDivisor> ideal_prime_divisors(const QuadIdeal& a) {
  std::vector<PrimeDivisor> out;
  for (const auto& [p, e] : factorize(a.norm()))
    for (PrimeDivisor& d : primes_above(a.field(), p))
      if (d.prime.contains(a)) out.push_back(std::move(d));
  return out;
}

std::vector<QuadIdeal> enumerate_ideals(const Field& k, int64_t max_norm) {
  std::vector<QuadIdeal> out;
  const QuadInt w = omega(k);
  for (int64_t h11 = 1; h11 <= max_norm; ++h11)
    for (int64_t h22 = 1; h11 * h22 <= max_norm; ++h22)
      for (int64_t h12 = 0; h12 < h22; ++h12) {
        const std::array<int64_t, 4> h{h11, h12, 0, h22};
        const QuadInt b0(k, h11, h12), b1(k, 0, h22);
        auto in_lattice = [&](const QuadInt& q) {
          if (q.x() % h11 != 0) return false;
          return floor_mod(q.y() - (q.x() / h11) * h12, h22) == 0;
        };
        if (in_lattice(b0 * w) && in_lattice(b1 * w)) out.push_back(QuadIdeal::from_hnf(k, h));
      }
  std::sort(out.begin(), out.end(), [](const QuadIdeal& a, const QuadIdeal& b) {
    if (a.norm() != b.norm()) return a.norm() < b.norm();
    return a.hnf() < b.hnf();
  });
  return out;
}

QuotientRing::QuotientRing(const QuadIdeal& ideal)
    : ideal_(ideal), size_(static_cast<uint32_t>(ideal.norm())) {
  if (ideal.norm() > (int64_t{1} << 31)) throw OracleBoundExceeded("QuotientRing: ideal norm too large");
  if (size_ <= 512) {
    mul_table_.resize(static_cast<std::size_t>(size_) * size_);
    for (uint32_t a = 0; a < size_; ++a)
      for (uint32_t b = 0; b < size_; ++b)
        mul_table_[static_cast<std::size_t>(a) * size_ + b] = index_of(element(a) * element(b));
  }
}

uint32_t QuotientRing::index_of(const QuadInt& q) const {
  const QuadInt r = ideal_.reduce(q);
  return static_cast<uint32_t>(r.x() * ideal_.hnf()[3] + r.y());
}

QuadInt QuotientRing::element(uint32_t i) const {
  const int64_t h22 = ideal_.hnf()[3];
  return {ideal_.field(), static_cast<int64_t>(i) / h22, static_cast<int64_t>(i) % h22};
}

uint32_t QuotientRing::add(uint32_t a, uint32_t b) const { return index_of(element(a) + element(b)); }

uint32_t QuotientRing::sub(uint32_t a, uint32_t b) const { return index_of(element(a) - element(b)); }

uint32_t QuotientRing::mul(uint32_t a, uint32_t b) const {
  if (!mul_table_.empty()) return mul_table_[static_cast<std::size_t>(a) * size_ + b];
  return index_of(element(a) * element(b));
}

uint32_t QuotientRing::one() const { return index_of(QuadInt(ideal_.field(), 1)); }

bool QuotientRing::is_unimodular(uint32_t a, uint32_t b) const {
  const QuadInt gens[] = {element(a), element(b), ideal_.z_basis()[0], ideal_.z_basis()[1]};
  return QuadIdeal::from_generators(ideal_.field(), gens).is_whole();
}

std::vector<uint32_t> QuotientRing::units() const {
  std::vector<uint32_t> out;
  for (uint32_t a = 0; a < size_; ++a)
    if (is_unit(a)) out.push_back(a);
  return out;
}

namespace {

// Count of unimodular columns (a, b), using that (a, b) + I is proper iff
// some prime divisor of I contains both.
int64_t count_unimodular_columns(const QuadIdeal& ideal) {
  const auto primes = ideal_prime_divisors(ideal);
  const QuotientRing ring(ideal);
  std::vector<uint8_t> in_some_prime_mask(ring.size(), 0);
  for (uint32_t e = 0; e < ring.size(); ++e)
    for (std::size_t k = 0; k < primes.size(); ++k)
      if (primes[k].prime.contains(ring.element(e))) in_some_prime_mask[e] |= static_cast<uint8_t>(1u << k);
  int64_t count = 0;
  for (uint32_t a = 0; a < ring.size(); ++a)
    for (uint32_t b = 0; b < ring.size(); ++b)
      if ((in_some_prime_mask[a] & in_some_prime_mask[b]) == 0) ++count;
  return count;
}

}  // namespace

int64_t sl2_index_oracle(const QuadIdeal& a, CongruenceKind kind, int64_t oracle_bound) {
  if (a.norm() > oracle_bound)
    throw OracleBoundExceeded("sl2_index_oracle: ideal norm " + std::to_string(a.norm()) +
                              " exceeds oracle bound " + std::to_string(oracle_bound));
  if (a.is_whole()) return 1;
  const QuotientRing ring(a);
  const uint32_t n = ring.size();
  const bool explicit_enumeration = n <= 64;
  if (kind == CongruenceKind::full_level) {
    if (!explicit_enumeration) return count_unimodular_columns(a) * n;
    // |{(al, be, ga, de) : al*de - be*ga = 1}| = sum over al, be, ga of #{de : al*de = 1 + be*ga}.
    int64_t total = 0;
    const uint32_t one = ring.one();
    std::vector<int64_t> hits(n);
    for (uint32_t al = 0; al < n; ++al) {
      std::fill(hits.begin(), hits.end(), 0);
      for (uint32_t de = 0; de < n; ++de) ++hits[ring.mul(al, de)];
      for (uint32_t be = 0; be < n; ++be)
        for (uint32_t ga = 0; ga < n; ++ga) total += hits[ring.add(one, ring.mul(be, ga))];
    }
    return total;
  }
  const std::vector<uint32_t> units = ring.units();
  if (!explicit_enumeration) return count_unimodular_columns(a) / static_cast<int64_t>(units.size());
  // Orbits of the unit group on unimodular columns: points of P^1(O_K/a).
  std::vector<uint8_t> seen(static_cast<std::size_t>(n) * n, 0);
  int64_t orbits = 0;
  for (uint32_t x = 0; x < n; ++x)
    for (uint32_t y = 0; y < n; ++y) {
      if (seen[static_cast<std::size_t>(x) * n + y] || !ring.is_unimodular(x, y)) continue;
      ++orbits;
      for (uint32_t u : units) seen[static_cast<std::size_t>(ring.mul(u, x)) * n + ring.mul(u, y)] = 1;
    }
  return orbits;
}

}  // namespace hermrep
