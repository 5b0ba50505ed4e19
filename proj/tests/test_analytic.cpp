#include <doctest.h>

#include <numbers>
#include <random>

#include "hermrep/analytic.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace hermrep;

namespace {

const Field kG(-4);
constexpr double kPi = std::numbers::pi;

HermitianForm gaussian_form(int64_t a, int64_t re, int64_t im, int64_t c) {
  return {a, oracle::to_quad({re, im}), c};
}

// zeta(2) L(2, chi_-3), pairing the terms 1/(3k+1)^2 - 1/(3k+2)^2; the tail
// is bounded by its first term.
oracle::BoundedSum eisenstein_zeta2(double tol) {
  int64_t n = 0;
  while (1.0 / std::pow(3.0 * n + 1.0, 2) > tol) ++n;
  long double s = 0;
  for (int64_t k = n - 1; k >= 0; --k) s += 1.0L / ((3.0L * k + 1) * (3.0L * k + 1)) - 1.0L / ((3.0L * k + 2) * (3.0L * k + 2));
  const double z2 = kPi * kPi / 6.0;
  return {z2 * static_cast<double>(s), z2 * tol};
}

// Expected iota from the case analysis on the primitive part.
int expected_iota(const HermitianForm& f) {
  const HermitianForm g = f.primitive_part();
  const int64_t d = g.discriminant();
  const bool even = g.a() % 2 == 0 && g.c() % 2 == 0;
  if (d % 4 == 0) return 2;
  if (even && d % 4 == 1) return 3;
  if (even && d % 4 == 2) return static_cast<int>(d % 8);
  return 1;
}

}  // namespace

TEST_CASE("zeta of the Gaussian field against the Catalan series") {
  const ZetaValue z = dedekind_zeta2(kG, 1e-12);
  const oracle::BoundedSum o = oracle::gaussian_zeta2(1e-13);
  CHECK(std::abs(z.value - o.value) <= z.error_bound + o.bound + 1e-14);
  CHECK(z.error_bound <= 1e-12);
  const ZetaValue coarse = dedekind_zeta2(kG, 1e-6);
  CHECK(std::abs(coarse.value - o.value) <= coarse.error_bound + o.bound);
  CHECK(coarse.terms < z.terms);
  CHECK_THROWS_AS(dedekind_zeta2(kG, 1e-14), std::invalid_argument);
}

TEST_CASE("zeta of the Eisenstein field") {
  const ZetaValue z = dedekind_zeta2(Field(-3), 1e-12);
  const oracle::BoundedSum o = eisenstein_zeta2(1e-13);
  CHECK(std::abs(z.value - o.value) <= z.error_bound + o.bound + 1e-14);
}

TEST_CASE("zeta is bracketed by sums over ideals") {
  for (int64_t d : {-3, -4, -7, -8}) {
    const Field k(d);
    const int64_t x = 1500;
    long double partial = 0;
    for (const QuadIdeal& a : enumerate_ideals(k, x)) partial += 1.0L / (static_cast<long double>(a.norm()) * a.norm());
    const double z = dedekind_zeta2(k, 1e-12).value;
    // Ideals of norm n number at most the divisors of n, so the tail is below
    // sum_{n > x} d(n)/n^2 < (ln x + 3)/x.
    CHECK(z > static_cast<double>(partial));
    CHECK(z - static_cast<double>(partial) < (std::log(double(x)) + 3.0) / double(x));
  }
}

TEST_CASE("Bianchi volumes") {
  CHECK(bianchi_volumes(kG).covolume == doctest::Approx(0.3053218647).epsilon(1e-9));
  // The figure-eight knot complement covers the Eisenstein quotient 12 times.
  CHECK(bianchi_volumes(Field(-3)).covolume == doctest::Approx(2.0298832128 / 12.0).epsilon(1e-9));
  CHECK(bianchi_volumes(kG).cusp_volume == doctest::Approx(0.25));
}

TEST_CASE("closed-form covolumes of the diagonal forms") {
  CHECK(humbert_covolume_fdelta(2).coefficient == Rational(2));
  CHECK(humbert_covolume_fdelta(5).coefficient == Rational(6));
  CHECK(humbert_covolume_fdelta(4).coefficient == Rational(2));
  CHECK(humbert_covolume_fdelta(5).str() == "6*pi");
  for (int64_t delta = 1; delta <= 200; ++delta)
    CHECK(humbert_covolume_fdelta(delta).coefficient.to_double() ==
          doctest::Approx(oracle::humbert_coefficient(delta)).epsilon(1e-14));
}

TEST_CASE("iota of Gaussian forms") {
  CHECK(iota_f(gaussian_form(1, 0, 0, -2)) == 1);
  CHECK(iota_f(gaussian_form(1, 0, 0, -4)) == 2);
  CHECK(iota_f(gaussian_form(2, 1, 0, -2)) == 3);
  CHECK(iota_f(gaussian_form(2, 1, 1, -2)) == 6);
  CHECK(iota_f(gaussian_form(2, 1, 1, 0)) == 2);
  CHECK(iota_f(gaussian_form(6, 3, 0, -6)) == 3);  // content divided out
  CHECK_THROWS_AS(iota_f(HermitianForm(1, QuadInt(Field(-3), 0), -2)), std::invalid_argument);
  std::mt19937_64 rng(12);
  for (int i = 0; i < 300; ++i) {
    const HermitianForm f = gen::indefinite_form(rng, kG, 12);
    CHECK(iota_f(f) == expected_iota(f));
  }
}

TEST_CASE("covolume of Gaussian automorph groups") {
  CHECK(covolume_gaussian(gaussian_form(1, 0, 0, -2)).value() == doctest::Approx(2 * kPi));
  CHECK(covolume_gaussian(gaussian_form(1, 0, 0, -5)).value() == doctest::Approx(6 * kPi));
  CHECK(covolume_gaussian(gaussian_form(2, 1, 0, -2)).coefficient == Rational(2));  // 6 pi / 3
  CHECK_THROWS_AS(covolume_gaussian(gaussian_form(2, 0, 0, -4)), std::invalid_argument);
}

TEST_CASE("constant of the basic form from the oracle zeta") {
  const HermitianForm f2 = gaussian_form(1, 0, 0, -2);
  const PredictionConstant p = predicted_constant(f2, 2 * kPi, full_group(kG));
  const double expected = kPi * kPi / (8.0 * oracle::gaussian_zeta2(1e-13).value);
  CHECK(p.value == doctest::Approx(expected).epsilon(1e-11));
  CHECK(p.value == doctest::Approx(0.81881).epsilon(1e-5));
  CHECK(reevaluate(p) == doctest::Approx(p.value).epsilon(1e-15));
  CHECK(p.provenance == Provenance::theorem_main);
  CHECK_THROWS_AS(predicted_constant(f2, 0.0, full_group(kG)), std::domain_error);
}

TEST_CASE("corollary agrees with the general constant on a random corpus") {
  std::mt19937_64 rng(13);
  int seen[7] = {0, 0, 0, 0, 0, 0, 0};
  int tested = 0;
  while (tested < 200) {
    const HermitianForm f = gen::indefinite_form(rng, kG, 15);
    if (!f.is_primitive()) continue;
    const PredictionConstant c = corollary_gaussian(f);
    const PredictionConstant p = predicted_constant(f, covolume_gaussian(f).value(), full_group(kG));
    CHECK(std::abs(c.value - p.value) <= 1e-12 * p.value);
    ++seen[iota_f(f)];
    ++tested;
  }
  CHECK(seen[1] > 0);
  CHECK(seen[2] > 0);
  CHECK(seen[3] > 0);
  CHECK(seen[6] > 0);
  CHECK_THROWS_AS(corollary_gaussian(gaussian_form(2, 0, 0, -4)), std::invalid_argument);
}

TEST_CASE("congruence data for the prime above 2") {
  const QuadIdeal p = QuadIdeal::principal(oracle::to_quad({1, 1}));
  const GroupDescriptor level = congruence_data(p, GroupKind::level);
  CHECK(level.index_in_bianchi == 6);
  CHECK(level.classical_index == 6);
  CHECK(level.printed_index == Rational(12));
  CHECK_FALSE(level.printed_agrees);
  CHECK(level.iota_G == 1);
  const GroupDescriptor hecke = congruence_data(p, GroupKind::hecke);
  CHECK(hecke.index_in_bianchi == 3);
  CHECK(hecke.classical_index == 3);
  CHECK(hecke.printed_index == Rational(3, 2));
  CHECK(hecke.stabilizer_index == 4);
  CHECK(hecke.iota_G == 1);
}

TEST_CASE("closed-form indices against the oracle") {
  for (int64_t d : {-4, -3, -7}) {
    const Field k(d);
    for (const QuadIdeal& a : enumerate_ideals(k, 40)) {
      CHECK(congruence_data(a, GroupKind::level).index_in_bianchi == classical_congruence_index(a, GroupKind::level));
      CHECK(congruence_data(a, GroupKind::hecke).index_in_bianchi == classical_congruence_index(a, GroupKind::hecke));
    }
  }
}

TEST_CASE("group membership") {
  const QuadIdeal three = QuadIdeal::principal(QuadInt(kG, 3));
  const GroupDescriptor level = congruence_data(three, GroupKind::level);
  const GroupDescriptor hecke = congruence_data(three, GroupKind::hecke);
  const UniMat h = UniMat::from_ints(kG, 1, 2, 3, 7);
  CHECK(in_group(h, hecke));
  CHECK_FALSE(in_group(h, level));
  CHECK(in_group(UniMat::from_ints(kG, 4, 3, 9, 7), level));
  CHECK(in_group(UniMat::identity(kG), level));
  CHECK_FALSE(in_group(-UniMat::identity(kG), level));
  CHECK(in_group(-UniMat::identity(kG), hecke));
  CHECK(in_group(UniMat::from_ints(kG, 0, -1, 1, 0), full_group(kG)));
}
