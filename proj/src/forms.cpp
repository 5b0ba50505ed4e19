#include "hermrep/forms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hermrep {

std::ostream& operator<<(std::ostream& os, const QuadPair& p) { return os << "(" << p.u << ", " << p.v << ")"; }

UniMat::UniMat(const QuadInt& alpha, const QuadInt& beta, const QuadInt& gamma, const QuadInt& delta)
    : m_{alpha, beta, gamma, delta} {
  const QuadInt det = alpha * delta - beta * gamma;
  if (!(det.x() == 1 && det.y() == 0)) throw std::invalid_argument("UniMat: determinant is not 1");
}

UniMat UniMat::identity(const Field& k) { return from_ints(k, 1, 0, 0, 1); }

UniMat UniMat::from_ints(const Field& k, int64_t a, int64_t b, int64_t c, int64_t d) {
  return UniMat(QuadInt(k, a), QuadInt(k, b), QuadInt(k, c), QuadInt(k, d));
}

int64_t UniMat::height() const {
  int64_t h = 0;
  for (const QuadInt& e : m_) h = std::max(h, e.norm());
  return h;
}

bool UniMat::is_identity() const {
  return m_[0].x() == 1 && m_[0].y() == 0 && m_[1].is_zero() && m_[2].is_zero() && m_[3].x() == 1 && m_[3].y() == 0;
}

bool UniMat::is_minus_identity() const {
  return m_[0].x() == -1 && m_[0].y() == 0 && m_[1].is_zero() && m_[2].is_zero() && m_[3].x() == -1 &&
         m_[3].y() == 0;
}

UniMat UniMat::operator*(const UniMat& o) const {
  return UniMat(Unchecked{}, m_[0] * o.m_[0] + m_[1] * o.m_[2], m_[0] * o.m_[1] + m_[1] * o.m_[3],
                m_[2] * o.m_[0] + m_[3] * o.m_[2], m_[2] * o.m_[1] + m_[3] * o.m_[3]);
}

UniMat UniMat::operator-() const { return UniMat(Unchecked{}, -m_[0], -m_[1], -m_[2], -m_[3]); }

UniMat UniMat::inverse() const { return UniMat(Unchecked{}, m_[3], -m_[1], -m_[2], m_[0]); }

QuadPair UniMat::apply(const QuadPair& w) const {
  return {m_[0] * w.u + m_[1] * w.v, m_[2] * w.u + m_[3] * w.v};
}

std::strong_ordering UniMat::operator<=>(const UniMat& o) const noexcept {
  for (int i = 0; i < 4; ++i)
    if (auto c = m_[i] <=> o.m_[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

std::string UniMat::str() const {
  std::ostringstream os;
  os << "[[" << m_[0] << ", " << m_[1] << "], [" << m_[2] << ", " << m_[3] << "]]";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const UniMat& g) { return os << g.str(); }

HermitianForm HermitianForm::diagonal(const Field& k, int64_t delta) { return {1, QuadInt(k, 0), -delta}; }

int64_t HermitianForm::operator()(const QuadInt& u, const QuadInt& v) const {
  return checked_add(checked_add(checked_mul(a_, u.norm()), (b_ * u * v.conj()).trace()), checked_mul(c_, v.norm()));
}

int64_t HermitianForm::discriminant() const { return checked_sub(b_.norm(), checked_mul(a_, c_)); }

FormKind HermitianForm::classify() const {
  const int64_t d = discriminant();
  if (d > 0) return FormKind::indefinite;
  if (d < 0) return FormKind::definite;
  return FormKind::degenerate;
}

int64_t HermitianForm::content() const {
  return std::gcd(std::gcd(a_, c_), std::gcd(b_.x(), b_.y()));
}

HermitianForm HermitianForm::primitive_part() const {
  const int64_t g = content();
  if (g == 0) throw std::domain_error("HermitianForm: zero form has no primitive part");
  return {a_ / g, QuadInt(field(), b_.x() / g, b_.y() / g), c_ / g};
}

std::string HermitianForm::str() const {
  std::ostringstream os;
  os << "(a=" << a_ << ", b=" << b_ << ", c=" << c_ << "; D_K=" << field().disc() << ")";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const HermitianForm& f) { return os << f.str(); }

int64_t eval_form(const HermitianForm& f, const QuadInt& u, const QuadInt& v) {
  if (!(u.field() == f.field()) || !(v.field() == f.field()))
    throw std::invalid_argument("eval_form: field mismatch");
  return f(u, v);
}

int64_t discriminant(const HermitianForm& f) { return f.discriminant(); }

HermitianForm compose_form(const HermitianForm& f, const UniMat& g) {
  if (!(g.field() == f.field())) throw std::invalid_argument("compose_form: field mismatch");
  const QuadInt& al = g.alpha();
  const QuadInt& be = g.beta();
  const QuadInt& ga = g.gamma();
  const QuadInt& de = g.delta();
  // Entry (2,1) of g^* H g with H = [[a, conj(b)], [b, c]].
  const QuadInt b_new =
      be.conj() * (al.scaled(f.a()) + f.b().conj() * ga) + de.conj() * (f.b() * al + ga.scaled(f.c()));
  return {f(al, ga), b_new, f(be, de)};
}

std::complex<double> BoundaryCircle::center() const {
  return center_x.to_double() + center_y.to_double() * line_b.field().omega_embedding();
}

double BoundaryCircle::radius() const { return std::sqrt(radius_sq.to_double()); }

BoundaryCircle boundary_circle(const HermitianForm& f) {
  if (f.classify() != FormKind::indefinite) throw std::domain_error("boundary_circle: form is not indefinite");
  BoundaryCircle out{};
  out.line_b = f.b();
  out.line_c = f.c();
  if (f.a() == 0) {
    out.kind = BoundaryCircle::Kind::line_with_infinity;
    return out;
  }
  out.kind = BoundaryCircle::Kind::circle;
  const QuadInt cb = f.b().conj();
  out.center_x = Rational(-cb.x(), f.a());
  out.center_y = Rational(-cb.y(), f.a());
  out.radius_sq = Rational(f.discriminant(), checked_mul(f.a(), f.a()));
  return out;
}

std::vector<QuadInt> elements_up_to_norm(const Field& k, int64_t bound) {
  std::vector<QuadInt> out;
  if (bound < 0) return out;
  const double d = static_cast<double>(-k.disc());
  const int64_t ymax = static_cast<int64_t>(std::floor(2.0 * std::sqrt(static_cast<double>(bound) / d))) + 1;
  const double sb = std::sqrt(static_cast<double>(bound));
  for (int64_t y = -ymax; y <= ymax; ++y) {
    const double shift = -static_cast<double>(y) * static_cast<double>(k.disc()) / 2.0;
    const int64_t xlo = static_cast<int64_t>(std::floor(shift - sb)) - 1;
    const int64_t xhi = static_cast<int64_t>(std::ceil(shift + sb)) + 1;
    for (int64_t x = xlo; x <= xhi; ++x) {
      const QuadInt q(k, x, y);
      if (q.norm() <= bound) out.push_back(q);
    }
  }
  std::sort(out.begin(), out.end(), [](const QuadInt& a, const QuadInt& b) {
    const int64_t na = a.norm(), nb = b.norm();
    if (na != nb) return na < nb;
    return a < b;
  });
  return out;
}

namespace {

// All x with f(x, gamma) == value and N(x) <= height, for fixed gamma and a != 0.
// Uses a f(x, gamma) = |a x + conj(b) gamma|^2 - Delta N(gamma).
void first_coordinates_on_circle(const HermitianForm& f, const QuadInt& gamma, int64_t value, int64_t height,
                                 std::vector<QuadInt>& out) {
  const Field& k = f.field();
  const double rsq = static_cast<double>(f.a()) * static_cast<double>(value) +
                     static_cast<double>(f.discriminant()) * static_cast<double>(gamma.norm());
  if (rsq < 0) return;
  const std::complex<double> center = -(f.b().conj() * gamma).to_complex() / static_cast<double>(f.a());
  const double r = std::sqrt(rsq) / std::abs(static_cast<double>(f.a()));
  const double h = std::sqrt(static_cast<double>(-k.disc())) / 2.0;
  const int64_t ylo = static_cast<int64_t>(std::floor((center.imag() - r) / h)) - 1;
  const int64_t yhi = static_cast<int64_t>(std::ceil((center.imag() + r) / h)) + 1;
  for (int64_t y = ylo; y <= yhi; ++y) {
    const double dy = static_cast<double>(y) * h - center.imag();
    const double dx = std::sqrt(std::max(0.0, r * r - dy * dy));
    const double base = center.real() - static_cast<double>(y) * static_cast<double>(k.disc()) / 2.0;
    for (double xc : {base - dx, base + dx}) {
      for (int64_t x = static_cast<int64_t>(std::floor(xc)) - 1; x <= static_cast<int64_t>(std::ceil(xc)) + 1; ++x) {
        const QuadInt q(k, x, y);
        if (q.norm() <= height && f(q, gamma) == value) out.push_back(q);
      }
    }
  }
}

std::vector<QuadPair> columns_with_value(const HermitianForm& f, int64_t value, int64_t height) {
  const auto elems = elements_up_to_norm(f.field(), height);
  std::vector<QuadPair> out;
  for (const QuadInt& g : elems) {
    if (f.a() != 0) {
      std::vector<QuadInt> xs;
      first_coordinates_on_circle(f, g, value, height, xs);
      for (const QuadInt& x : xs) out.push_back({x, g});
    } else {
      for (const QuadInt& x : elems)
        if (f(x, g) == value) out.push_back({x, g});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<UniMat> matrices_transforming(const HermitianForm& f, const HermitianForm& target, int64_t height) {
  if (!(f.field() == target.field())) throw std::invalid_argument("matrices_transforming: field mismatch");
  const Field& k = f.field();
  std::vector<UniMat> out;
  const auto firsts = columns_with_value(f, target.a(), height);
  if (target.a() != 0) {
    const QuadInt cbt = target.b().conj();
    for (const QuadPair& col : firsts) {
      const QuadInt& al = col.u;
      const QuadInt& ga = col.v;
      // Row x^* H; the second column y solves (x^* H) y = conj(b') and det = 1.
      const QuadInt p1 = al.conj().scaled(f.a()) + ga.conj() * f.b();
      const QuadInt p2 = al.conj() * f.b().conj() + ga.conj().scaled(f.c());
      const QuadInt num_beta = cbt * al - p2;
      const QuadInt num_delta = p1 + ga * cbt;
      const int64_t a = target.a();
      if (num_beta.x() % a != 0 || num_beta.y() % a != 0 || num_delta.x() % a != 0 || num_delta.y() % a != 0)
        continue;
      const QuadInt be(k, num_beta.x() / a, num_beta.y() / a);
      const QuadInt de(k, num_delta.x() / a, num_delta.y() / a);
      if (be.norm() > height || de.norm() > height) continue;
      const QuadInt det = al * de - be * ga;
      if (!(det.x() == 1 && det.y() == 0)) continue;
      UniMat g(al, be, ga, de);
      if (compose_form(f, g) == target) out.push_back(g);
    }
  } else {
    const auto seconds = columns_with_value(f, target.c(), height);
    for (const QuadPair& x : firsts)
      for (const QuadPair& y : seconds) {
        const QuadInt det = x.u * y.v - y.u * x.v;
        if (!(det.x() == 1 && det.y() == 0)) continue;
        UniMat g(x.u, y.u, x.v, y.v);
        if (compose_form(f, g) == target) out.push_back(g);
      }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ReciprocitySearch reciprocity_witness(const HermitianForm& f, const Membership& in_group, int64_t height_bound) {
  if (f.classify() != FormKind::indefinite) throw std::domain_error("reciprocity_witness: form is not indefinite");
  ReciprocitySearch out;
  out.height_bound = height_bound;
  for (const UniMat& g : matrices_transforming(f, -f, height_bound))
    if (!in_group || in_group(g)) {
      out.witness = g;
      break;
    }
  return out;
}

}  // namespace hermrep
