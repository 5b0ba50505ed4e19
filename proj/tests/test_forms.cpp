#include <doctest.h>

#include <random>

#include "hermrep/forms.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace hermrep;

namespace {

const Field kG(-4);

HermitianForm gaussian_form(int64_t a, int64_t re, int64_t im, int64_t c) {
  return {a, oracle::to_quad({re, im}), c};
}

}  // namespace

TEST_CASE("values of the diagonal forms") {
  const HermitianForm f2 = HermitianForm::diagonal(kG, 2);
  CHECK(f2.discriminant() == 2);
  CHECK(f2(QuadInt(kG, 3), QuadInt(kG, 2)) == 1);
  CHECK(f2(QuadInt(kG, 17), QuadInt(kG, 12)) == 1);
  CHECK(f2(gaussian_i(), QuadInt(kG, 1)) == -1);
  CHECK(f2.classify() == FormKind::indefinite);
  CHECK(HermitianForm(1, QuadInt(kG, 0), 2).classify() == FormKind::definite);
  CHECK(HermitianForm(1, QuadInt(kG, 1), 1).classify() == FormKind::degenerate);
}

TEST_CASE("evaluation agrees with the floating point definition") {
  std::mt19937_64 rng(2);
  for (int64_t d : {-3, -4, -7, -8}) {
    const Field k(d);
    for (int i = 0; i < 200; ++i) {
      const HermitianForm f = gen::indefinite_form(rng, k, 9);
      const QuadInt u = gen::element(rng, k, 20), v = gen::element(rng, k, 20);
      CHECK(static_cast<double>(f(u, v)) ==
            doctest::Approx(oracle::form_value(f, u.to_complex(), v.to_complex())).epsilon(1e-12));
      const double bb = std::norm(f.b().to_complex());
      CHECK(static_cast<double>(f.discriminant()) == doctest::Approx(bb - f.a() * f.c()));
    }
  }
}

TEST_CASE("composition is a right action preserving the discriminant") {
  std::mt19937_64 rng(3);
  for (int64_t d : {-3, -4, -7}) {
    const Field k(d);
    for (int i = 0; i < 100; ++i) {
      const HermitianForm f = gen::indefinite_form(rng, k, 6);
      const UniMat g = gen::unimodular(rng, k, 3), h = gen::unimodular(rng, k, 3);
      const QuadPair w{gen::element(rng, k, 10), gen::element(rng, k, 10)};
      const HermitianForm fg = compose_form(f, g);
      CHECK(fg(w) == f(g.apply(w)));
      CHECK(fg.discriminant() == f.discriminant());
      CHECK(compose_form(fg, h) == compose_form(f, g * h));
      CHECK(compose_form(fg, g.inverse()) == f);
      CHECK(compose_form(-f, g) == -fg);
      CHECK(fg.content() == f.content());
    }
  }
}

TEST_CASE("content and primitive part") {
  const HermitianForm f = gaussian_form(6, 3, 9, -12);
  CHECK(f.content() == 3);
  CHECK(f.primitive_part() == gaussian_form(2, 1, 3, -4));
  CHECK(f.primitive_part().is_primitive());
}

TEST_CASE("matrix group operations") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const UniMat g = gen::unimodular(rng, kG, 4);
    CHECK((g * g.inverse()).is_identity());
    CHECK((-g * g.inverse()).is_minus_identity());
    const QuadPair w{gen::element(rng, kG, 10), gen::element(rng, kG, 10)};
    CHECK(g.inverse().apply(g.apply(w)) == w);
  }
  CHECK_THROWS_AS(UniMat::from_ints(kG, 1, 1, 1, 1), std::invalid_argument);
  CHECK(UniMat::from_ints(kG, 3, 4, 2, 3).height() == 16);
}

TEST_CASE("boundary circle lies on the zero set") {
  std::mt19937_64 rng(8);
  for (int64_t d : {-3, -4, -7}) {
    const Field k(d);
    for (int i = 0; i < 50; ++i) {
      const HermitianForm f = gen::indefinite_form(rng, k, 7);
      if (f.a() == 0) continue;
      const BoundaryCircle bc = boundary_circle(f);
      REQUIRE(bc.kind == BoundaryCircle::Kind::circle);
      CHECK(bc.radius_sq.to_double() == doctest::Approx(static_cast<double>(f.discriminant()) / (f.a() * f.a())));
      for (int j = 0; j < 8; ++j) {
        const double t = j * 0.785398;
        const std::complex<double> z = bc.center() + bc.radius() * std::complex<double>(std::cos(t), std::sin(t));
        CHECK(std::abs(oracle::form_value(f, z, 1.0)) < 1e-9 * (1 + std::abs(f.a()) * std::norm(z)));
      }
    }
  }
  const HermitianForm f2 = HermitianForm::diagonal(kG, 2);
  CHECK(std::abs(boundary_circle(f2).center()) < 1e-15);
  CHECK(boundary_circle(f2).radius() == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(boundary_circle(HermitianForm(1, QuadInt(kG, 0), 1)), std::domain_error);
}

TEST_CASE("elements up to a norm bound") {
  for (int64_t d : {-3, -4, -7}) {
    const Field k(d);
    const auto elems = elements_up_to_norm(k, 50);
    int64_t brute = 0;
    for (int64_t x = -60; x <= 60; ++x)
      for (int64_t y = -60; y <= 60; ++y) brute += QuadInt(k, x, y).norm() <= 50;
    CHECK(static_cast<int64_t>(elems.size()) == brute);
    for (size_t i = 1; i < elems.size(); ++i) CHECK(elems[i - 1].norm() <= elems[i].norm());
  }
}

TEST_CASE("automorph search finds the basic automorph of f2") {
  const HermitianForm f2 = HermitianForm::diagonal(kG, 2);
  const auto found = matrices_transforming(f2, f2, 20);
  const UniMat g = UniMat::from_ints(kG, 3, 4, 2, 3);
  CHECK(std::find(found.begin(), found.end(), g) != found.end());
  for (const UniMat& h : found) {
    CHECK(compose_form(f2, h) == f2);
    CHECK(h.height() <= 20);
  }
}

TEST_CASE("matrices transforming agree with brute force over small matrices") {
  const HermitianForm f = gaussian_form(1, 1, 1, -3);
  const HermitianForm target = compose_form(f, UniMat::from_ints(kG, 1, 1, 0, 1));
  const int64_t h = 5;
  const auto elems = elements_up_to_norm(kG, h);
  size_t brute = 0;
  for (const QuadInt& a : elems)
    for (const QuadInt& b : elems)
      for (const QuadInt& c : elems)
        for (const QuadInt& d : elems) {
          const QuadInt det = a * d - b * c;
          if (det.x() != 1 || det.y() != 0) continue;
          if (compose_form(f, UniMat(a, b, c, d)) == target) ++brute;
        }
  CHECK(matrices_transforming(f, target, h).size() == brute);
}

TEST_CASE("reciprocity witnesses") {
  const Membership any = [](const UniMat&) { return true; };
  const ReciprocitySearch none = reciprocity_witness(HermitianForm::diagonal(kG, 2), any, 1);
  CHECK_FALSE(none.witness.has_value());
  CHECK(none.bounded_search);
  const HermitianForm f1 = HermitianForm::diagonal(kG, 1);
  const ReciprocitySearch some = reciprocity_witness(f1, any, 1);
  REQUIRE(some.witness.has_value());
  CHECK(compose_form(f1, *some.witness) == -f1);
}
