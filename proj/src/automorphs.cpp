#include "hermrep/automorphs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

namespace hermrep {

AutomorphSet find_automorphs(const HermitianForm& f, int64_t height, const Membership& subgroup) {
  if (f.classify() != FormKind::indefinite) throw std::domain_error("find_automorphs: form is not indefinite");
  AutomorphSet out;
  out.form = f;
  out.search_height = height;
  for (const UniMat& g : matrices_transforming(f, f, height))
    if (!subgroup || subgroup(g)) out.gens.push_back(g);
  out.complete_hint = std::any_of(out.gens.begin(), out.gens.end(),
                                  [](const UniMat& g) { return !g.is_identity() && !g.is_minus_identity(); });
  return out;
}

CosetData enumerate_cosets(const std::vector<UniMat>& gens, const Membership& in_subgroup, size_t max_cosets) {
  if (gens.empty()) return {};
  std::vector<UniMat> letters = gens;
  for (const UniMat& g : gens) letters.push_back(g.inverse());
  std::sort(letters.begin(), letters.end());
  letters.erase(std::unique(letters.begin(), letters.end()), letters.end());

  CosetData out;
  out.transversal.push_back(UniMat::identity(gens.front().field()));
  std::set<UniMat> schreier;
  for (size_t i = 0; i < out.transversal.size(); ++i) {
    for (const UniMat& s : letters) {
      const UniMat x = out.transversal[i] * s;
      bool found = false;
      for (const UniMat& t : out.transversal) {
        const UniMat h = x * t.inverse();
        if (in_subgroup(h)) {
          if (!h.is_identity()) schreier.insert(h);
          found = true;
          break;
        }
      }
      if (!found) {
        if (out.transversal.size() >= max_cosets) throw std::runtime_error("enumerate_cosets: too many cosets");
        out.transversal.push_back(x);
      }
    }
  }
  std::set<UniMat> closed;
  for (const UniMat& h : schreier) {
    closed.insert(h);
    closed.insert(h.inverse());
  }
  out.generators.assign(closed.begin(), closed.end());
  return out;
}

std::vector<UniMat> subgroup_generators(const std::vector<UniMat>& gens, const Membership& in_subgroup,
                                        size_t max_cosets) {
  return enumerate_cosets(gens, in_subgroup, max_cosets).generators;
}

int64_t projective_subgroup_index(const std::vector<UniMat>& gens, const Membership& in_subgroup,
                                  size_t max_cosets) {
  const Membership up_to_sign = [&](const UniMat& g) { return in_subgroup(g) || in_subgroup(-g); };
  return static_cast<int64_t>(enumerate_cosets(gens, up_to_sign, max_cosets).transversal.size());
}

std::vector<UniMat> bounded_words(const std::vector<UniMat>& gens, const PlaneOfForm& plane, const H2Point& base,
                                  int word_length, double radius, size_t max_elements) {
  std::set<UniMat> seen;
  if (gens.empty()) return {};
  const UniMat id = UniMat::identity(gens.front().field());
  seen.insert(id);
  std::vector<UniMat> frontier{id};
  for (int len = 0; len < word_length && !frontier.empty(); ++len) {
    std::vector<UniMat> next;
    for (const UniMat& e : frontier) {
      for (const UniMat& s : gens) {
        const UniMat x = s * e;
        if (seen.count(x)) continue;
        const H2Point q = plane.real_action(x).apply(base);
        if (h2_distance(q, base) > radius) continue;
        seen.insert(x);
        next.push_back(x);
        if (seen.size() >= max_elements) break;
      }
      if (seen.size() >= max_elements) break;
    }
    frontier.swap(next);
    if (seen.size() >= max_elements) break;
  }
  seen.erase(id);
  return {seen.begin(), seen.end()};
}

FuchsianData build_fuchsian_data(const PlaneOfForm& plane, const std::vector<UniMat>& elements,
                                 const FuchsianOptions& opt) {
  const HermitianForm& f = plane.form();
  std::vector<UniMat> elems;
  std::vector<RMat2> reals;
  bool minus = false;
  for (const UniMat& g : elements) {
    if (!(compose_form(f, g) == f)) throw std::invalid_argument("build_fuchsian_data: element is not an automorph");
    if (g.is_minus_identity()) minus = true;
    if (g.is_identity() || g.is_minus_identity()) continue;
    elems.push_back(g);
    reals.push_back(plane.real_action(g));
  }
  const H2Point apex = plane.to_plane(plane.apex());
  const H2Point base = generic_point_near(apex, opt.seed);
  DirichletPolygon poly = dirichlet_domain(reals, base);

  std::set<UniMat> sides;
  for (int idx : poly.edge_element) {
    const UniMat& g = elems[static_cast<size_t>(idx)];
    sides.insert(g);
    sides.insert(g.inverse());
  }
  FuchsianData fd{plane, base, std::move(poly), {sides.begin(), sides.end()}, {}, minus, opt.tol, opt.tie_eps,
                  opt.word_length};
  for (const UniMat& g : fd.side_pairings) fd.side_real.push_back(plane.real_action(g));
  return fd;
}

namespace {

double orbit_distance(const QuadPair& w, const FuchsianData& fd, bool null_pair) {
  if (!null_pair) return h2_distance(pair_foot(fd.plane, w), fd.base);
  // Signed distance from the base point to the horodisc cut out on C(f).
  const auto img = fd.plane.chart().apply(w.u.to_complex(), w.v.to_complex());
  return std::log(std::norm(fd.base * img[1] - img[0]) / fd.base.imag());
}

bool projectively_equal(const QuadPair& a, const QuadPair& b) { return a.u * b.v == b.u * a.v; }

}  // namespace

CanonicalRep canonical_orbit_rep(const QuadPair& w, const FuchsianData& fd) {
  const HermitianForm& f = fd.plane.form();
  if (!is_coprime_pair(w.u, w.v)) throw std::invalid_argument("canonical_orbit_rep: pair is not coprime");
  const bool null_pair = f(w) == 0;

  UniMat g = UniMat::identity(f.field());
  QuadPair cur = w;
  double dist = orbit_distance(cur, fd, null_pair);
  for (int step = 0;; ++step) {
    if (step > 100000) throw GeometryError("canonical_orbit_rep: reduction did not terminate");
    // Candidates are scored in floating point; the chosen move is applied
    // exactly and the distance recomputed from the new pair.
    int best = -1;
    double best_dist = dist - fd.tol;
    const H2Point foot = null_pair ? H2Point{} : pair_foot(fd.plane, cur);
    for (size_t i = 0; i < fd.side_pairings.size(); ++i) {
      const double d = null_pair ? orbit_distance(fd.side_pairings[i].apply(cur), fd, true)
                                 : h2_distance(fd.side_real[i].apply(foot), fd.base);
      if (d < best_dist) {
        best_dist = d;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) break;
    const UniMat& s = fd.side_pairings[static_cast<size_t>(best)];
    cur = s.apply(cur);
    g = s * g;
    const double exact = orbit_distance(cur, fd, null_pair);
    if (!(exact < dist)) throw GeometryError("canonical_orbit_rep: reduction step did not decrease the distance");
    dist = exact;
  }

  // Sweep the orbit points at (numerically) the same distance.
  std::map<QuadPair, std::pair<UniMat, double>> ties;
  ties.emplace(cur, std::make_pair(g, dist));
  std::deque<QuadPair> queue{cur};
  double dmin = dist;
  const size_t cap = 256;
  while (!queue.empty() && ties.size() < cap) {
    const QuadPair p = queue.front();
    queue.pop_front();
    const UniMat gp = ties.at(p).first;
    for (const UniMat& s : fd.side_pairings) {
      const QuadPair q = s.apply(p);
      if (ties.count(q)) continue;
      const double d = orbit_distance(q, fd, null_pair);
      if (d <= dmin + fd.tie_eps) {
        dmin = std::min(dmin, d);
        ties.emplace(q, std::make_pair(s * gp, d));
        queue.push_back(q);
      }
    }
  }

  CanonicalRep out{cur, g, dist};
  bool first = true;
  int count = 0;
  for (const auto& [p, data] : ties) {
    if (data.second > dmin + fd.tie_eps) continue;
    ++count;
    std::vector<std::pair<QuadPair, UniMat>> cands{{p, data.first}};
    if (fd.has_minus_identity) cands.push_back({-p, -data.first});
    for (const auto& [q, h] : cands)
      if (first || q < out.rep) {
        out.rep = q;
        out.to_canonical = h;
        out.distance = data.second;
        first = false;
      }
  }
  out.tie_count = count;
  out.ambiguous = count > 1;
  for (auto it = ties.begin(); it != ties.end() && !out.unit_stabilizer; ++it)
    for (auto jt = std::next(it); jt != ties.end(); ++jt) {
      if (!projectively_equal(it->first, jt->first)) continue;
      if (fd.has_minus_identity && jt->first == -it->first) continue;
      out.unit_stabilizer = true;
      break;
    }
  return out;
}

std::optional<UniMat> word_search(const QuadPair& from, const QuadPair& to, const FuchsianData& fd, int max_len,
                                  size_t max_nodes) {
  const Field& k = fd.plane.form().field();
  std::map<QuadPair, UniMat> seen;
  seen.emplace(from, UniMat::identity(k));
  std::vector<QuadPair> frontier{from};
  auto hit = [&](const QuadPair& p) -> std::optional<UniMat> {
    if (p == to) return seen.at(p);
    if (fd.has_minus_identity && -p == to) return -seen.at(p);
    return std::nullopt;
  };
  if (auto h = hit(from)) return h;
  for (int len = 0; len < max_len && !frontier.empty(); ++len) {
    std::vector<QuadPair> next;
    for (const QuadPair& p : frontier) {
      const UniMat gp = seen.at(p);
      for (const UniMat& s : fd.side_pairings) {
        const QuadPair q = s.apply(p);
        if (seen.count(q)) continue;
        seen.emplace(q, s * gp);
        if (auto h = hit(q)) return h;
        next.push_back(q);
        if (seen.size() >= max_nodes) return std::nullopt;
      }
    }
    frontier.swap(next);
  }
  return std::nullopt;
}

EquivalenceVerdict are_equivalent(const QuadPair& first, const QuadPair& second, const FuchsianData& fd) {
  const HermitianForm& f = fd.plane.form();
  EquivalenceVerdict out;
  if (f(first) != f(second)) {
    out.tag = EquivalenceTag::inequivalent_modulo_generators;
    out.values_differ = true;
    return out;
  }
  const CanonicalRep c1 = canonical_orbit_rep(first, fd);
  const CanonicalRep c2 = canonical_orbit_rep(second, fd);
  auto accept = [&](const UniMat& w) {
    if (!(compose_form(f, w) == f) || !(w.apply(first) == second))
      throw std::logic_error("are_equivalent: witness failed exact verification");
    out.tag = EquivalenceTag::equivalent;
    out.witness = w;
  };
  if (c1.rep == c2.rep) {
    accept(c2.to_canonical.inverse() * c1.to_canonical);
    return out;
  }
  // Distinct representatives whose feet nearly coincide may come from
  // rounding in the reduction; a horoball shared by both is a genuine split.
  bool close = std::abs(c1.distance - c2.distance) < 1e-6;
  if (close && f(first) != 0) close = h2_distance(pair_foot(fd.plane, c1.rep), pair_foot(fd.plane, c2.rep)) < 1e-6;
  if (close && !projectively_equal(c1.rep, c2.rep)) {
    if (auto w = word_search(first, second, fd, fd.word_length)) {
      accept(*w);
      return out;
    }
    out.tag = EquivalenceTag::unknown;
    return out;
  }
  out.tag = EquivalenceTag::inequivalent_modulo_generators;
  return out;
}

}  // namespace hermrep
