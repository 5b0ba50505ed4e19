#pragma once

// Upper half-space geometry around the plane C(f) of an indefinite form:
// horoballs at cusps, common perpendiculars, an isometric chart from C(f)
// onto the upper half-plane, point reduction and Dirichlet polygons.

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "hermrep/forms.hpp"

namespace hermrep {

using cplx = std::complex<double>;

/// Raised when a polygon does not close or a cusp lies on a limit circle.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct H3Point {
  cplx z;
  double t = 1.0;
};

double h3_distance(const H3Point& p, const H3Point& q);

/// Element of SL2(C) acting on upper half-space by Poincare extension.
struct Mobius {
  cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

  static Mobius from(const UniMat& g);
  Mobius operator*(const Mobius& o) const;
  Mobius inverse() const { return {d, -b, -c, a}; }
  H3Point apply(const H3Point& p) const;
  /// Action on a pair of complex coordinates (column vector).
  std::array<cplx, 2> apply(const cplx& u, const cplx& v) const { return {a * u + b * v, c * u + d * v}; }
};

/// ln(|f(u,v)| / sqrt(Delta)); -infinity when f(u,v) == 0.
/// Throws std::invalid_argument for non-coprime pairs, std::domain_error
/// unless f is indefinite.
double perp_length_pair(const HermitianForm& f, const QuadInt& u, const QuadInt& v);

/// A point of the hyperbolic plane in the upper half-plane model.
using H2Point = cplx;

double h2_distance(const H2Point& p, const H2Point& q);

/// Element of SL2(R) acting on the upper half-plane.
struct RMat2 {
  double a = 1, b = 0, c = 0, d = 1;

  RMat2 operator*(const RMat2& o) const;
  RMat2 inverse() const { return {d, -b, -c, a}; }
  H2Point apply(const H2Point& z) const { return (a * z + b) / (c * z + d); }
};

/// The plane C(f), stored with an isometry of upper half-space that carries
/// it onto the vertical half-plane over the real axis. Points (x, 0, t) of
/// that half-plane are identified with x + i t in the upper half-plane.
class PlaneOfForm {
 public:
  /// The plane of |u|^2 - |v|^2 over Q(i).
  PlaneOfForm();
  /// Throws std::domain_error unless f is indefinite with a != 0.
  explicit PlaneOfForm(const HermitianForm& f);

  const HermitianForm& form() const noexcept { return form_; }
  cplx center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  /// Euclidean apex of the half-sphere.
  H3Point apex() const { return {center_, radius_}; }

  /// Chart isometry: C(f) -> vertical half-plane over R.
  const Mobius& chart() const noexcept { return chart_; }
  H2Point to_plane(const H3Point& p) const;
  H3Point from_plane(const H2Point& z) const;
  /// Residual f(z,1) + a t^2 divided by a; zero on the plane.
  double residual(const H3Point& p) const;

  /// Image in SL2(R) of an element preserving C(f) and its sides.
  RMat2 real_action(const UniMat& g) const;

 private:
  HermitianForm form_;
  cplx center_;
  double radius_;
  Mobius chart_;
  Mobius chart_inv_;
};

/// Horoball tangent to the boundary at a cusp: at infinity with the given
/// height, or at a finite point with the given Euclidean diameter.
struct CuspHoroball {
  bool at_infinity = false;
  cplx cusp;
  double size = 1.0;  // height at infinity, diameter otherwise
};

/// Image of the height-1 horoball at infinity under any g in SL2(O_K) with
/// g(1,0) = (u,v). Throws std::invalid_argument for non-coprime pairs.
CuspHoroball horoball_of_pair(const QuadInt& u, const QuadInt& v);

struct PerpFoot {
  H3Point foot;       // on C(f), in upper half-space coordinates
  H2Point chart_foot; // the same point in chart coordinates
  double length;      // signed; negative when the foot lies inside the horoball
};

/// Common perpendicular from C(f) to a horoball, found by moving the plane
/// into standard position. Throws GeometryError when the cusp lies on the
/// boundary circle of C(f).
PerpFoot foot_of_perpendicular(const PlaneOfForm& plane, const CuspHoroball& hb);

/// Chart coordinates of the foot for the horoball of a pair, computed
/// directly from the pair; equivariant under automorphs. Throws
/// std::domain_error when f(u,v) == 0.
H2Point pair_foot(const PlaneOfForm& plane, const QuadPair& w);

struct ReducedPoint {
  H2Point point;
  std::vector<int> word;  // indices into gens, in order of application
};

/// Greedy descent toward base: while some generator moves p strictly closer
/// (by more than tol), apply the best one.
ReducedPoint reduce_point(const H2Point& p, const std::vector<RMat2>& gens, const H2Point& base, double tol = 1e-9,
                          int max_steps = 100000);

struct PolygonVertex {
  H2Point point;   // upper half-plane; meaningless when ideal
  double klein_x;  // Klein disc coordinates centred at the base point
  double klein_y;
  bool ideal;
  double angle;    // interior angle, 0 for ideal vertices
};

struct DirichletPolygon {
  H2Point base;
  std::vector<PolygonVertex> vertices;  // counterclockwise in the Klein disc
  /// For each edge (vertices[i] -> vertices[i+1]) the index of the element
  /// whose bisector carries it.
  std::vector<int> edge_element;
  double area = 0.0;
};

/// Dirichlet polygon of base for the group elements given (identity and
/// duplicates are ignored). Throws GeometryError when the intersection of
/// half-planes has vertices outside the closed disc.
DirichletPolygon dirichlet_domain(const std::vector<RMat2>& elements, const H2Point& base, double ideal_eps = 1e-6);

/// Deterministic generic point near z0: a small seeded perturbation.
H2Point generic_point_near(const H2Point& z0, uint64_t seed, double scale = 0.05);

}  // namespace hermrep
