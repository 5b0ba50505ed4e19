#pragma once

// Counting orbits of proper representations: enumeration of coprime pairs
// with bounded values, deduplication by canonical orbit representatives and
// convergence reports against the predicted growth constant.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hermrep/analytic.hpp"
#include "hermrep/automorphs.hpp"
#include "hermrep/forms.hpp"

namespace hermrep {

/// Orbit-preserving change of form: counts for `original` equal counts for
/// `form`, where form = sign * (original o g).
struct NormalizedForm {
  HermitianForm original;
  HermitianForm form;  // a > 0
  UniMat g = UniMat::identity(Field());
  int sign = 1;
};

/// Moves f to a > 0: negation when a < 0, otherwise a unipotent change of
/// variables when a == 0. With require_nonzero_a, a == 0 is rejected
/// (std::invalid_argument) since congruence conditions are not preserved.
NormalizedForm normalize_form(const HermitianForm& f, bool require_nonzero_a = false);

/// Automorph group data for counting under G.
struct GroupSetup {
  NormalizedForm normalized;
  GroupDescriptor group;
  AutomorphSet automorphs;  // full automorph ball of the normalized form
  FuchsianData full;        // Dirichlet data of SU_f(O_K)
  FuchsianData restricted;  // Dirichlet data of SU_f(O_K) cap G (== full for G = Gamma_K)
  int64_t projective_index = 1;  // [PSU_f : image of SU_f cap G]
};

struct SetupOptions {
  int64_t generator_height = 200;
  FuchsianOptions fuchsian;
  /// Replaces find_automorphs (e.g. a cache); results are re-verified.
  std::function<AutomorphSet(const HermitianForm&, int64_t)> automorph_source;
};

/// Throws GeometryError when the Dirichlet polygons do not close.
GroupSetup prepare_group(const HermitianForm& f, const GroupDescriptor& G, const SetupOptions& opt = {});

/// Covolume of SU_f(O_K) cap G: the closed form over Q(i) (full group),
/// otherwise the Dirichlet area; times the projective index for subgroups.
struct CovolumeEstimate {
  double value = 0;
  double full_group = 0;
  int64_t projective_index = 1;
  bool closed_form = false;
  double dirichlet_area = 0;  // area of the restricted polygon
};

CovolumeEstimate group_covolume(const GroupSetup& setup);

struct PairValue {
  QuadPair pair;
  int64_t value;
};

/// Coprime pairs with max(N(u), N(v)) <= height and |f(u,v)| <= s_max that
/// satisfy the congruence condition of G (level: u-1, v in a; hecke: v in a),
/// ordered by (N(v), v, N(u), u). f must have a > 0.
std::vector<PairValue> enumerate_pairs(const HermitianForm& f, int64_t s_max, int64_t height,
                                       const GroupDescriptor& G);

struct CountRequest {
  HermitianForm form;
  std::vector<int64_t> s_grid;  // ascending
  GroupDescriptor group;
  int64_t height_bound = 0;     // 0 means height_factor * s_max
  int64_t height_factor = 4;
  bool include_null = false;
  bool check_stability = true;
  int threads = 1;
  SetupOptions setup;
};

struct ReportRow {
  int64_t s;
  int64_t psi;
  double ratio;
  double predicted;
  double relative_gap;
};

struct CountDiagnostics {
  int64_t null_orbit_count = 0;  // orbits of pairs with f = 0 (when requested)
  int64_t unknown_verdicts = 0;  // pairs whose reduction failed numerically
  bool stability_checked = false;
  bool stable = true;
  int64_t stability_psi = 0;
  int64_t stability_psi_doubled = 0;
  int64_t generator_height = 0;
  int64_t height_bound = 0;
  int64_t raw_pairs = 0;
  int64_t ambiguous_reps = 0;     // representatives found on the polygon boundary
  int64_t unit_stabilizers = 0;   // pairs with nontrivial multiplicity
  int64_t projective_index = 1;
  size_t side_pairings = 0;
  double dirichlet_area = 0;
};

struct ConvergenceReport {
  std::vector<ReportRow> rows;
  CountDiagnostics diagnostics;
  PredictionConstant constant;
  HermitianForm normalized_form;
};

/// Orbit counts psi(s) for each s in the grid.
ConvergenceReport count_orbits(const CountRequest& req);
/// Same, reusing prepared group data.
ConvergenceReport count_orbits(const CountRequest& req, const GroupSetup& setup);

/// The constant the counts should approach for req.form and req.group.
PredictionConstant predicted_for(const GroupSetup& setup, double zeta_tol = 1e-12);

struct FitSummary {
  int64_t s_max = 0;
  double ratio_at_max = 0;
  double slope = 0;      // least squares psi ~ slope * s^2 + c over the top half of the grid
  double intercept = 0;
  double predicted = 0;
  double ratio_gap = 0;  // |ratio_at_max - predicted| / predicted
  double slope_gap = 0;
  size_t points_used = 0;
};

/// Throws std::invalid_argument for fewer than 3 grid points.
FitSummary fit_and_compare(const ConvergenceReport& report, const PredictionConstant& constant);

}  // namespace hermrep
