#include "hermrep/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hermrep {

double h3_distance(const H3Point& p, const H3Point& q) {
  const double num = std::norm(p.z - q.z) + (p.t - q.t) * (p.t - q.t);
  return 2.0 * std::asinh(std::sqrt(num / (4.0 * p.t * q.t)));
}

Mobius Mobius::from(const UniMat& g) {
  return {g.alpha().to_complex(), g.beta().to_complex(), g.gamma().to_complex(), g.delta().to_complex()};
}

Mobius Mobius::operator*(const Mobius& o) const {
  return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

H3Point Mobius::apply(const H3Point& p) const {
  const cplx w = c * p.z + d;
  const double den = std::norm(w) + std::norm(c) * p.t * p.t;
  const cplx z = ((a * p.z + b) * std::conj(w) + a * std::conj(c) * p.t * p.t) / den;
  return {z, p.t / den};
}

double perp_length_pair(const HermitianForm& f, const QuadInt& u, const QuadInt& v) {
  if (f.classify() != FormKind::indefinite) throw std::domain_error("perp_length_pair: form is not indefinite");
  if (!is_coprime_pair(u, v)) throw std::invalid_argument("perp_length_pair: pair is not coprime");
  const int64_t value = eval_form(f, u, v);
  if (value == 0) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(static_cast<double>(value)) / std::sqrt(static_cast<double>(f.discriminant())));
}

double h2_distance(const H2Point& p, const H2Point& q) {
  return 2.0 * std::asinh(std::abs(p - q) / (2.0 * std::sqrt(p.imag() * q.imag())));
}

RMat2 RMat2::operator*(const RMat2& o) const {
  return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

PlaneOfForm::PlaneOfForm() : PlaneOfForm(HermitianForm::diagonal(Field(), 1)) {}

PlaneOfForm::PlaneOfForm(const HermitianForm& f) : form_(f) {
  if (f.classify() != FormKind::indefinite) throw std::domain_error("PlaneOfForm: form is not indefinite");
  if (f.a() == 0) throw std::domain_error("PlaneOfForm: a = 0 is not supported, move the form to a != 0 first");
  const HermitianForm g = f.a() > 0 ? f : -f;
  const double a = static_cast<double>(g.a());
  const double big_r = std::sqrt(static_cast<double>(g.discriminant()));
  const cplx cb = std::conj(g.b().to_complex());
  center_ = -cb / a;
  radius_ = big_r / a;
  // z -> a z + conj(b) carries C(f) onto the half-sphere of radius sqrt(Delta) at 0.
  const double sa = std::sqrt(a);
  const Mobius to_standard{sa, cb / sa, 0.0, 1.0 / sa};
  // Cayley-type map sending that half-sphere onto the vertical plane over R.
  const cplx i(0.0, 1.0);
  const cplx s = std::sqrt(2.0 * i * big_r);
  const Mobius cayley{i / s, i * big_r / s, -1.0 / s, big_r / s};
  chart_ = cayley * to_standard;
  chart_inv_ = chart_.inverse();
}

H2Point PlaneOfForm::to_plane(const H3Point& p) const {
  const H3Point q = chart_.apply(p);
  return {q.z.real(), q.t};
}

H3Point PlaneOfForm::from_plane(const H2Point& z) const { return chart_inv_.apply(H3Point{z.real(), z.imag()}); }

double PlaneOfForm::residual(const H3Point& p) const {
  const double a = static_cast<double>(form_.a());
  const double fz = a * std::norm(p.z) + 2.0 * (form_.b().to_complex() * p.z).real() + static_cast<double>(form_.c());
  return (fz + a * p.t * p.t) / a;
}

RMat2 PlaneOfForm::real_action(const UniMat& g) const {
  const Mobius m = chart_ * Mobius::from(g) * chart_inv_;
  const double scale = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d), 1.0});
  const double imag = std::max({std::abs(m.a.imag()), std::abs(m.b.imag()), std::abs(m.c.imag()), std::abs(m.d.imag())});
  if (imag > 1e-7 * scale) throw std::domain_error("real_action: element does not preserve the sides of C(f)");
  return {m.a.real(), m.b.real(), m.c.real(), m.d.real()};
}

CuspHoroball horoball_of_pair(const QuadInt& u, const QuadInt& v) {
  if (!is_coprime_pair(u, v)) throw std::invalid_argument("horoball_of_pair: pair is not coprime");
  if (v.is_zero()) return {true, 0.0, 1.0};
  return {false, u.to_complex() / v.to_complex(), 1.0 / static_cast<double>(v.norm())};
}

PerpFoot foot_of_perpendicular(const PlaneOfForm& plane, const CuspHoroball& hb) {
  const Mobius& m = plane.chart();
  cplx xi;
  double diam;
  if (hb.at_infinity) {
    if (std::abs(m.c) < 1e-300) throw GeometryError("foot_of_perpendicular: cusp lies on the boundary circle");
    xi = m.a / m.c;
    diam = 1.0 / (std::norm(m.c) * hb.size);
  } else {
    const cplx w = m.c * hb.cusp + m.d;
    const double scale = std::abs(m.c) * std::abs(hb.cusp) + std::abs(m.d);
    if (std::abs(w) <= 1e-12 * scale) throw GeometryError("foot_of_perpendicular: cusp lies on the boundary circle");
    xi = (m.a * hb.cusp + m.b) / w;
    diam = hb.size / std::norm(w);
  }
  const double h = std::abs(xi.imag());
  if (h <= 1e-12 * (1.0 + std::abs(xi))) throw GeometryError("foot_of_perpendicular: cusp lies on the boundary circle");
  PerpFoot out;
  out.chart_foot = {xi.real(), h};
  out.foot = plane.from_plane(out.chart_foot);
  out.length = std::log(2.0 * h / diam);
  return out;
}

H2Point pair_foot(const PlaneOfForm& plane, const QuadPair& w) {
  const HermitianForm& f = plane.form();
  const int64_t value = f(w);
  if (value == 0) throw std::domain_error("pair_foot: f vanishes on the pair");
  const auto img = plane.chart().apply(w.u.to_complex(), w.v.to_complex());
  const double n = std::norm(img[1]);
  const double re = (img[0] * std::conj(img[1])).real();
  // The imaginary part of u' conj(v') is -f(u,v)/(2 sqrt(Delta)) for a > 0.
  const double im = std::abs(static_cast<double>(value)) / (2.0 * std::sqrt(static_cast<double>(f.discriminant())));
  return {re / n, im / n};
}

ReducedPoint reduce_point(const H2Point& p, const std::vector<RMat2>& gens, const H2Point& base, double tol,
                          int max_steps) {
  ReducedPoint out{p, {}};
  double dist = h2_distance(p, base);
  for (int step = 0; step < max_steps; ++step) {
    int best = -1;
    double best_dist = dist - tol;
    H2Point best_point;
    for (size_t i = 0; i < gens.size(); ++i) {
      const H2Point q = gens[i].apply(out.point);
      const double dq = h2_distance(q, base);
      if (dq < best_dist) {
        best_dist = dq;
        best = static_cast<int>(i);
        best_point = q;
      }
    }
    if (best < 0) return out;
    out.point = best_point;
    out.word.push_back(best);
    dist = best_dist;
  }
  throw GeometryError("reduce_point: step limit reached");
}

namespace {

struct HalfPlane {
  double nx, ny, r;  // n.x <= r in the Klein disc, |n| = 1
  int element;
};

struct Vec2 {
  double x, y;
};

struct KleinFrame {
  H2Point base;

  Vec2 to_klein(const H2Point& z) const {
    const cplx p = (z - base) / (z - std::conj(base));
    const cplx k = 2.0 * p / (1.0 + std::norm(p));
    return {k.real(), k.imag()};
  }

  H2Point from_klein(const Vec2& k, bool ideal) const {
    const cplx kk(k.x, k.y);
    const cplx p = ideal ? kk / std::abs(kk) : kk / (1.0 + std::sqrt(std::max(0.0, 1.0 - std::norm(kk))));
    const cplx den = 1.0 - p;
    if (std::abs(den) < 1e-15) return {std::numeric_limits<double>::infinity(), 0.0};
    return (base - p * std::conj(base)) / den;
  }
};

double side(const HalfPlane& h, const Vec2& v) { return h.nx * v.x + h.ny * v.y - h.r; }

void clip(std::vector<Vec2>& verts, std::vector<int>& labels, const HalfPlane& h, int label) {
  const double eps = 1e-14;
  bool all_inside = true;
  for (const Vec2& v : verts)
    if (side(h, v) > eps) {
      all_inside = false;
      break;
    }
  if (all_inside) return;
  std::vector<Vec2> nv;
  std::vector<int> nl;
  const size_t n = verts.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& cur = verts[i];
    const Vec2& nxt = verts[(i + 1) % n];
    const double sc = side(h, cur);
    const double sn = side(h, nxt);
    const bool in_c = sc <= eps;
    const bool in_n = sn <= eps;
    auto cut = [&]() {
      const double t = sc / (sc - sn);
      return Vec2{cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)};
    };
    if (in_c && in_n) {
      nv.push_back(cur);
      nl.push_back(labels[i]);
    } else if (in_c && !in_n) {
      nv.push_back(cur);
      nl.push_back(labels[i]);
      nv.push_back(cut());
      nl.push_back(label);
    } else if (!in_c && in_n) {
      nv.push_back(cut());
      nl.push_back(labels[i]);
    }
  }
  verts.swap(nv);
  labels.swap(nl);
}

void drop_short_edges(std::vector<Vec2>& verts, std::vector<int>& labels, double min_len) {
  bool changed = true;
  while (changed && verts.size() > 3) {
    changed = false;
    for (size_t i = 0; i < verts.size() && verts.size() > 3; ++i) {
      const size_t j = (i + 1) % verts.size();
      if (std::hypot(verts[i].x - verts[j].x, verts[i].y - verts[j].y) < min_len) {
        labels[i] = labels[j];
        verts.erase(verts.begin() + static_cast<std::ptrdiff_t>(j));
        labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(j));
        if (j < i) --i;
        changed = true;
      }
    }
  }
}

}  // namespace

DirichletPolygon dirichlet_domain(const std::vector<RMat2>& elements, const H2Point& base, double ideal_eps) {
  if (base.imag() <= 0) throw std::invalid_argument("dirichlet_domain: base point must lie in the upper half-plane");
  const KleinFrame frame{base};
  std::vector<HalfPlane> planes;
  for (size_t i = 0; i < elements.size(); ++i) {
    const H2Point q = elements[i].apply(base);
    const double d = h2_distance(q, base);
    if (!(d > 1e-9) || !std::isfinite(d)) continue;
    const Vec2 k = frame.to_klein(q);
    const double len = std::hypot(k.x, k.y);
    planes.push_back({k.x / len, k.y / len, std::tanh(d / 2.0), static_cast<int>(i)});
  }
  std::sort(planes.begin(), planes.end(), [](const HalfPlane& a, const HalfPlane& b) {
    if (a.r != b.r) return a.r < b.r;
    return a.element < b.element;
  });
  std::vector<HalfPlane> unique;
  for (const HalfPlane& h : planes) {
    bool dup = false;
    for (auto it = unique.rbegin(); it != unique.rend() && h.r - it->r < 1e-12; ++it)
      if (std::abs(it->nx - h.nx) < 1e-12 && std::abs(it->ny - h.ny) < 1e-12) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(h);
  }

  std::vector<Vec2> verts{{-2, -2}, {2, -2}, {2, 2}, {-2, 2}};
  std::vector<int> labels{-1, -1, -1, -1};
  for (size_t i = 0; i < unique.size(); ++i) {
    clip(verts, labels, unique[i], static_cast<int>(i));
    if (verts.size() < 3) throw GeometryError("dirichlet_domain: polygon collapsed");
  }
  drop_short_edges(verts, labels, 1e-11);

  // An ideal vertex may show up as a cluster of nearly coincident points on the circle.
  std::vector<bool> ideal(verts.size());
  for (size_t i = 0; i < verts.size(); ++i) {
    const double r = std::hypot(verts[i].x, verts[i].y);
    if (r > 1.0 + ideal_eps) throw GeometryError("dirichlet_domain: polygon is not closed (vertex outside the disc)");
    ideal[i] = r >= 1.0 - ideal_eps;
  }
  for (size_t i = 0; i < verts.size() && verts.size() > 3;) {
    const size_t j = (i + 1) % verts.size();
    if (ideal[i] && ideal[j] && std::hypot(verts[i].x - verts[j].x, verts[i].y - verts[j].y) < 1e3 * ideal_eps) {
      labels[i] = labels[j];
      verts.erase(verts.begin() + static_cast<std::ptrdiff_t>(j));
      labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(j));
      ideal.erase(ideal.begin() + static_cast<std::ptrdiff_t>(j));
      if (j < i) break;
    } else {
      ++i;
    }
  }
  for (int l : labels)
    if (l < 0) throw GeometryError("dirichlet_domain: polygon is not closed");

  DirichletPolygon out;
  out.base = base;
  const size_t n = verts.size();
  double angle_sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const HalfPlane& in = unique[static_cast<size_t>(labels[(i + n - 1) % n])];
    const HalfPlane& outp = unique[static_cast<size_t>(labels[i])];
    PolygonVertex v;
    v.ideal = ideal[i];
    Vec2 k = verts[i];
    if (v.ideal) {
      const double r = std::hypot(k.x, k.y);
      k = {k.x / r, k.y / r};
      v.angle = 0.0;
    } else {
      const double dot = in.nx * outp.nx + in.ny * outp.ny - in.r * outp.r;
      const double norms = std::sqrt((1.0 - in.r * in.r) * (1.0 - outp.r * outp.r));
      v.angle = std::acos(std::clamp(-dot / norms, -1.0, 1.0));
    }
    v.klein_x = k.x;
    v.klein_y = k.y;
    v.point = frame.from_klein(k, v.ideal);
    angle_sum += v.angle;
    out.vertices.push_back(v);
    out.edge_element.push_back(outp.element);
  }
  out.area = (static_cast<double>(n) - 2.0) * std::numbers::pi - angle_sum;
  return out;
}

H2Point generic_point_near(const H2Point& z0, uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double dx = unit(rng);
  const double dy = unit(rng);
  return {z0.real() + scale * z0.imag() * dx, z0.imag() * std::exp(scale * dy)};
}

}  // namespace hermrep
