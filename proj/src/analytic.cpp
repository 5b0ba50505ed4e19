#include "hermrep/analytic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hermrep {

ZetaValue dedekind_zeta2(const Field& k, double tol) {
  if (!(tol >= 1e-12)) throw std::invalid_argument("dedekind_zeta2: tol must be at least 1e-12");
  const int64_t period = -k.disc();
  std::vector<int> chi(static_cast<size_t>(period));
  int64_t partial = 0, max_partial = 0;
  for (int64_t n = 0; n < period; ++n) {
    chi[static_cast<size_t>(n)] = n == 0 ? 0 : kronecker_symbol(k.disc(), n);
    partial += chi[static_cast<size_t>(n)];
    max_partial = std::max(max_partial, std::abs(partial));
  }
  const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
  // |sum_{n>N} chi(n)/n^2| <= 2B/(N+1)^2 by partial summation, B = max |partial sums|.
  const double b = static_cast<double>(max_partial);
  const auto terms = static_cast<int64_t>(std::ceil(std::sqrt(2.0 * b * zeta2 / tol)));
  long double sum = 0.0L;
  for (int64_t n = terms; n >= 1; --n) {
    const int c = chi[static_cast<size_t>(n % period)];
    if (c != 0) sum += static_cast<long double>(c) / (static_cast<long double>(n) * static_cast<long double>(n));
  }
  const double tail = 2.0 * b / (static_cast<double>(terms + 1) * static_cast<double>(terms + 1));
  return {zeta2 * static_cast<double>(sum), zeta2 * tail, terms};
}

BianchiVolumes bianchi_volumes(const Field& k, double zeta_tol) {
  const double d = static_cast<double>(-k.disc());
  const double zeta = dedekind_zeta2(k, zeta_tol).value;
  return {std::pow(d, 1.5) * zeta / (4.0 * std::numbers::pi * std::numbers::pi),
          std::sqrt(d) / (2.0 * k.roots_of_unity_count())};
}

double PiMultiple::value() const { return coefficient.to_double() * std::numbers::pi; }

std::string PiMultiple::str() const { return coefficient.str() + "*pi"; }

PiMultiple humbert_covolume_fdelta(int64_t delta) {
  if (delta < 1) throw std::invalid_argument("humbert_covolume_fdelta: discriminant must be positive");
  Rational c = delta % 4 == 0 ? Rational(delta, 2) : Rational(delta);
  for (const auto& [p, e] : factorize(delta)) {
    if (p == 2) continue;
    c = c * Rational(p + kronecker_symbol(-1, p), p);
  }
  return {c};
}

namespace {

void require_gaussian(const HermitianForm& f, const char* what) {
  if (f.field().disc() != -4) throw std::invalid_argument(std::string(what) + ": form must be over Q(i)");
}

bool both_even(const HermitianForm& f) { return f.a() % 2 == 0 && f.c() % 2 == 0; }

double odd_prime_product(int64_t delta) {
  double prod = 1.0;
  for (const auto& [p, e] : factorize(delta))
    if (p != 2) prod *= 1.0 + static_cast<double>(kronecker_symbol(-1, p)) / static_cast<double>(p);
  return prod;
}

}  // namespace

int iota_f(const HermitianForm& f) {
  require_gaussian(f, "iota_f");
  if (f.classify() != FormKind::indefinite) throw std::invalid_argument("iota_f: form is not indefinite");
  const HermitianForm g = f.primitive_part();
  const int64_t delta = g.discriminant();
  if (delta % 4 == 0) return 2;
  if (both_even(g)) {
    if (delta % 4 == 1) return 3;
    if (delta % 4 == 2) return static_cast<int>(delta % 8);
  }
  return 1;
}

PiMultiple covolume_gaussian(const HermitianForm& f) {
  require_gaussian(f, "covolume_gaussian");
  if (f.classify() != FormKind::indefinite) throw std::invalid_argument("covolume_gaussian: form is not indefinite");
  if (!f.is_primitive()) throw std::invalid_argument("covolume_gaussian: form is not primitive, divide out its content");
  const int64_t delta = f.discriminant();
  PiMultiple h = humbert_covolume_fdelta(delta);
  if (delta % 4 == 1 && both_even(f)) h.coefficient = h.coefficient / Rational(3);
  if (delta % 4 == 2 && both_even(f)) h.coefficient = h.coefficient / Rational(delta % 8);
  return h;
}

std::string to_string(GroupKind k) {
  switch (k) {
    case GroupKind::full: return "full";
    case GroupKind::level: return "level";
    case GroupKind::hecke: return "hecke";
  }
  return "?";
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::theorem_main: return "theorem_main";
    case Provenance::theorem_general: return "theorem_general";
    case Provenance::corollary_gaussian: return "corollary_gaussian";
    case Provenance::corollary_congruence: return "corollary_congruence";
  }
  return "?";
}

GroupDescriptor full_group(const Field& k) {
  GroupDescriptor g;
  g.kind = GroupKind::full;
  g.stabilizer_index = k.roots_of_unity_count();
  return g;
}

int64_t classical_congruence_index(const QuadIdeal& a, GroupKind kind) {
  const int64_t n = a.norm();
  Rational r = kind == GroupKind::level ? Rational(checked_mul(checked_mul(n, n), n)) : Rational(n);
  for (const PrimeDivisor& p : ideal_prime_divisors(a)) {
    const int64_t q = p.residue_norm;
    if (kind == GroupKind::level)
      r = r * Rational(checked_mul(q, q) - 1, checked_mul(q, q));
    else if (kind == GroupKind::hecke)
      r = r * Rational(q + 1, q);
  }
  if (!r.is_integer()) throw std::logic_error("classical_congruence_index: non-integral value");
  return r.num();
}

Rational printed_congruence_index(const QuadIdeal& a, GroupKind kind) {
  const int64_t n = a.norm();
  Rational r = kind == GroupKind::level ? Rational(checked_mul(checked_mul(n, n), n)) : Rational(n);
  for (const PrimeDivisor& p : ideal_prime_divisors(a)) {
    const int64_t q = p.residue_norm;
    if (kind == GroupKind::level)
      r = r * Rational(q + 1, q);
    else if (kind == GroupKind::hecke)
      r = r * Rational(checked_mul(q, q) - 1, checked_mul(q, q));
  }
  return r;
}

GroupDescriptor congruence_data(const QuadIdeal& a, GroupKind kind, int64_t oracle_bound) {
  if (kind == GroupKind::full) return full_group(a.field());
  GroupDescriptor g;
  g.kind = kind;
  g.ideal = a;
  const int omega = a.field().roots_of_unity_count();
  const CongruenceKind ck = kind == GroupKind::level ? CongruenceKind::full_level : CongruenceKind::hecke;
  g.index_in_bianchi = sl2_index_oracle(a, ck, oracle_bound);
  if (kind == GroupKind::level) {
    g.stabilizer_index = omega * a.norm();
    g.iota_G = a.contains(QuadInt(a.field(), 2)) ? 1 : 2;
  } else {
    g.stabilizer_index = omega;
    g.iota_G = 1;
  }
  g.classical_index = classical_congruence_index(a, kind);
  g.printed_index = printed_congruence_index(a, kind);
  g.printed_agrees = g.printed_index == Rational(g.index_in_bianchi);
  return g;
}

bool in_group(const UniMat& g, const GroupDescriptor& G) {
  if (G.kind == GroupKind::full || !G.ideal) return true;
  const QuadIdeal& a = *G.ideal;
  const QuadInt one(a.field(), 1);
  if (G.kind == GroupKind::hecke) return a.contains(g.gamma());
  return a.contains(g.alpha() - one) && a.contains(g.beta()) && a.contains(g.gamma()) && a.contains(g.delta() - one);
}

Membership group_membership(const GroupDescriptor& G) {
  return [G](const UniMat& g) { return in_group(g, G); };
}

double reevaluate(const PredictionConstant& c) {
  const PredictionInputs& in = c.inputs;
  if (c.provenance == Provenance::corollary_gaussian)
    return std::numbers::pi * std::numbers::pi * in.prime_product / (8.0 * in.iota_f * in.zeta);
  return std::numbers::pi * in.iota_G * static_cast<double>(in.stabilizer_index) * in.covolume /
         (2.0 * in.omega * static_cast<double>(-in.disc) * in.zeta * static_cast<double>(in.delta) *
          in.index);
}

PredictionConstant predicted_constant(const HermitianForm& f, double covolume, const GroupDescriptor& G,
                                      double zeta_tol) {
  const int64_t delta = f.discriminant();
  if (!(covolume > 0)) throw std::domain_error("predicted_constant: covolume must be positive");
  if (delta <= 0) throw std::domain_error("predicted_constant: form must be indefinite");
  if (G.index_in_bianchi <= 0 || G.stabilizer_index <= 0) throw std::domain_error("predicted_constant: bad indices");
  PredictionConstant c;
  c.provenance = G.kind == GroupKind::full ? Provenance::theorem_main : Provenance::theorem_general;
  c.inputs.delta = delta;
  c.inputs.disc = f.field().disc();
  c.inputs.omega = f.field().roots_of_unity_count();
  c.inputs.zeta = dedekind_zeta2(f.field(), zeta_tol).value;
  c.inputs.covolume = covolume;
  c.inputs.index = static_cast<double>(G.index_in_bianchi);
  c.inputs.stabilizer_index = G.stabilizer_index;
  c.inputs.iota_G = G.iota_G;
  c.value = reevaluate(c);
  return c;
}

PredictionConstant corollary_gaussian(const HermitianForm& f, double zeta_tol) {
  require_gaussian(f, "corollary_gaussian");
  if (!f.is_primitive()) throw std::invalid_argument("corollary_gaussian: form is not primitive");
  PredictionConstant c;
  c.provenance = Provenance::corollary_gaussian;
  c.inputs.delta = f.discriminant();
  c.inputs.disc = -4;
  c.inputs.omega = 4;
  c.inputs.zeta = dedekind_zeta2(f.field(), zeta_tol).value;
  c.inputs.iota_f = iota_f(f);
  c.inputs.prime_product = odd_prime_product(c.inputs.delta);
  c.value = reevaluate(c);
  return c;
}

PredictionConstant corollary_congruence_printed(const HermitianForm& f, double covolume, const GroupDescriptor& G,
                                                double zeta_tol) {
  PredictionConstant c = predicted_constant(f, covolume, G, zeta_tol);
  c.provenance = Provenance::corollary_congruence;
  c.inputs.index = G.printed_index.to_double();
  c.value = reevaluate(c);
  return c;
}

}  // namespace hermrep
