#pragma once

// Closed-form constants: zeta_K(2), Bianchi volumes, Humbert covolumes of
// automorph groups over Q(i), congruence subgroup data and the predicted
// growth constants for orbit counts.

#include <cstdint>
#include <optional>
#include <string>

#include "hermrep/arith.hpp"
#include "hermrep/forms.hpp"
#include "hermrep/ring.hpp"

namespace hermrep {

struct ZetaValue {
  double value = 0;
  double error_bound = 0;  // proven bound on |value - zeta_K(2)|, rounding aside
  int64_t terms = 0;
};

/// zeta_K(2) = zeta(2) L(2, chi_D) with the L-series summed until the
/// partial-summation tail bound drops below tol. Requires tol >= 1e-12.
ZetaValue dedekind_zeta2(const Field& k, double tol = 1e-10);

struct BianchiVolumes {
  double covolume;     // Vol(PSL2(O_K) \ H^3)
  double cusp_volume;  // sqrt|D| / (2 omega_K)
};

BianchiVolumes bianchi_volumes(const Field& k, double zeta_tol = 1e-12);

/// A rational multiple of pi, kept exact.
struct PiMultiple {
  Rational coefficient;
  double value() const;
  std::string str() const;
};

/// eta pi Delta prod_{odd p | Delta} (1 + (-1|p)/p), eta = 1/2 if 4 | Delta.
PiMultiple humbert_covolume_fdelta(int64_t delta);

/// The integer iota(f) in {1, 2, 3, 6} for a form over Q(i); the content is
/// divided out first. Throws std::invalid_argument for other fields.
int iota_f(const HermitianForm& f);

/// Covol(SU_f(Z[i])) for a primitive indefinite form over Q(i).
/// Throws std::invalid_argument for non-primitive forms or other fields.
PiMultiple covolume_gaussian(const HermitianForm& f);

enum class GroupKind { full, level, hecke };

std::string to_string(GroupKind k);

struct GroupDescriptor {
  GroupKind kind = GroupKind::full;
  std::optional<QuadIdeal> ideal;
  int64_t index_in_bianchi = 1;  // enumerated
  int64_t stabilizer_index = 1;  // [Gamma_{K,inf} : G_(1,0)]
  int iota_G = 1;                // 1 iff -id in G
  int64_t classical_index = 1;
  Rational printed_index{1};
  bool printed_agrees = true;
};

GroupDescriptor full_group(const Field& k);

/// Data for Gamma_K(a) (level) or Gamma_K,0(a) (hecke); the index comes
/// from enumeration of O_K/a. Throws OracleBoundExceeded past oracle_bound.
GroupDescriptor congruence_data(const QuadIdeal& a, GroupKind kind, int64_t oracle_bound = kDefaultOracleBound);

/// N^3 prod (1 - 1/N(p)^2) for level, N prod (1 + 1/N(p)) for hecke.
int64_t classical_congruence_index(const QuadIdeal& a, GroupKind kind);
/// The products interchanged: N^3 prod (1 + 1/N(p)) for level and
/// N prod (1 - 1/N(p)^2) for hecke.
Rational printed_congruence_index(const QuadIdeal& a, GroupKind kind);

bool in_group(const UniMat& g, const GroupDescriptor& G);
Membership group_membership(const GroupDescriptor& G);

enum class Provenance { theorem_main, theorem_general, corollary_gaussian, corollary_congruence };

std::string to_string(Provenance p);

struct PredictionInputs {
  int64_t delta = 0;
  int64_t disc = 0;
  int omega = 0;
  double zeta = 0;
  double covolume = 0;
  double index = 1;  // [Gamma_K : G], possibly a printed non-integer value
  int64_t stabilizer_index = 1;
  int iota_G = 1;
  int iota_f = 0;            // Gaussian corollary only
  double prime_product = 1;  // Gaussian corollary only
};

struct PredictionConstant {
  double value = 0;
  Provenance provenance = Provenance::theorem_main;
  PredictionInputs inputs;
};

/// Recomputes the constant from its recorded inputs.
double reevaluate(const PredictionConstant& c);

/// pi iota_G [Gamma_inf : G_(1,0)] covol / (2 omega |D| zeta_K(2) Delta [Gamma_K : G]).
/// Throws std::domain_error for non-positive covolume or discriminant.
PredictionConstant predicted_constant(const HermitianForm& f, double covolume, const GroupDescriptor& G,
                                      double zeta_tol = 1e-12);

/// pi^2 prod_{odd p | Delta} (1 + (-1|p)/p) / (8 iota(f) zeta_{Q(i)}(2)).
PredictionConstant corollary_gaussian(const HermitianForm& f, double zeta_tol = 1e-12);

/// The congruence constant with the printed index products in place of
/// the enumerated index.
PredictionConstant corollary_congruence_printed(const HermitianForm& f, double covolume, const GroupDescriptor& G,
                                                double zeta_tol = 1e-12);

}  // namespace hermrep
