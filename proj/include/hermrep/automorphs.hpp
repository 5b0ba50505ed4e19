#pragma once

// Automorph groups SU_f(O_K) and their congruence intersections: bounded
// exhaustive search, Dirichlet data for reduction, orbit representatives
// and equivalence of pairs.

#include <cstdint>
#include <optional>
#include <vector>

#include "hermrep/forms.hpp"
#include "hermrep/hyperbolic.hpp"

namespace hermrep {

struct AutomorphSet {
  HermitianForm form;
  /// Sorted, closed under inverse; contains -id whenever the group does.
  std::vector<UniMat> gens;
  int64_t search_height = 0;
  /// True when the set holds more than +-id. Completeness itself is only
  /// checked downstream (closed Dirichlet polygon, area).
  bool complete_hint = false;
};

/// Every automorph of f with entry norms <= height. With a subgroup
/// predicate the result is restricted to members of the subgroup; see
/// subgroup_generators for the word-based completion.
AutomorphSet find_automorphs(const HermitianForm& f, int64_t height, const Membership& subgroup = {});

struct CosetData {
  std::vector<UniMat> transversal;  // right coset representatives, identity first
  std::vector<UniMat> generators;   // Schreier generators, closed under inverse
};

/// Right cosets of H = {g in <gens> : in_subgroup(g)} by breadth-first
/// enumeration. H must have index at most max_cosets, otherwise
/// std::runtime_error.
CosetData enumerate_cosets(const std::vector<UniMat>& gens, const Membership& in_subgroup, size_t max_cosets = 4096);

/// Generators of {g in <gens> : in_subgroup(g)} (Schreier generators).
std::vector<UniMat> subgroup_generators(const std::vector<UniMat>& gens, const Membership& in_subgroup,
                                        size_t max_cosets = 4096);

/// Index of the image of H in <gens>/{+-id}, where H is as above.
int64_t projective_subgroup_index(const std::vector<UniMat>& gens, const Membership& in_subgroup,
                                  size_t max_cosets = 4096);

/// Products of at most word_length generators whose displacement of base
/// stays below radius, deduplicated; at most max_elements are kept.
std::vector<UniMat> bounded_words(const std::vector<UniMat>& gens, const PlaneOfForm& plane, const H2Point& base,
                                  int word_length, double radius, size_t max_elements);

struct FuchsianOptions {
  uint64_t seed = 20240601;
  double tol = 1e-9;
  double tie_eps = 1e-7;
  int word_length = 8;
  double ball_radius = 12.0;
  size_t max_elements = 20000;
};

/// Dirichlet data for the group generated by a set of automorphs: the plane
/// chart, base point, polygon and its exact side pairings.
struct FuchsianData {
  PlaneOfForm plane;
  H2Point base;
  DirichletPolygon polygon;
  std::vector<UniMat> side_pairings;  // closed under inverse
  std::vector<RMat2> side_real;
  bool has_minus_identity = false;
  double tol = 1e-9;
  double tie_eps = 1e-7;
  int word_length = 8;
};

/// Builds the Dirichlet polygon of the group generated by elements (all of
/// which must be automorphs of plane.form()). Throws GeometryError if it
/// does not close.
FuchsianData build_fuchsian_data(const PlaneOfForm& plane, const std::vector<UniMat>& elements,
                                 const FuchsianOptions& opt = {});

struct CanonicalRep {
  QuadPair rep;
  UniMat to_canonical;  // to_canonical.apply(input) == rep
  double distance = 0;  // from the base point, for the representative
  int tie_count = 1;    // orbit points within tie_eps of the minimum
  bool ambiguous = false;
  /// An element of the group fixes the horoball of the pair but not the
  /// pair up to sign (nontrivial multiplicity).
  bool unit_stabilizer = false;
};

/// Representative of the orbit of w. Pairs with f(w) != 0 are reduced by
/// the foot of their common perpendicular to C(f); null pairs by the
/// horodisc they cut out on C(f).
CanonicalRep canonical_orbit_rep(const QuadPair& w, const FuchsianData& fd);

enum class EquivalenceTag { equivalent, inequivalent_modulo_generators, unknown };

struct EquivalenceVerdict {
  EquivalenceTag tag = EquivalenceTag::unknown;
  std::optional<UniMat> witness;  // witness.apply(first) == second, f o witness == f
  bool values_differ = false;
};

EquivalenceVerdict are_equivalent(const QuadPair& first, const QuadPair& second, const FuchsianData& fd);

/// Exact breadth-first search for g with g.apply(from) == to among words of
/// length <= max_len in the side pairings.
std::optional<UniMat> word_search(const QuadPair& from, const QuadPair& to, const FuchsianData& fd, int max_len,
                                  size_t max_nodes = 200000);

}  // namespace hermrep
