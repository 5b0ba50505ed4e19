#include "hermrep/counting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <thread>

namespace hermrep {

NormalizedForm normalize_form(const HermitianForm& f, bool require_nonzero_a) {
  if (f.classify() != FormKind::indefinite) throw std::invalid_argument("normalize_form: form is not indefinite");
  const Field& k = f.field();
  NormalizedForm out{f, f, UniMat::identity(k), 1};
  if (f.a() == 0) {
    if (require_nonzero_a)
      throw std::invalid_argument("normalize_form: a = 0 is not supported with congruence conditions");
    bool done = false;
    for (const QuadInt& gamma : elements_up_to_norm(k, 64)) {
      if (gamma.is_zero()) continue;
      const UniMat g(QuadInt(k, 1), QuadInt(k, 0), gamma, QuadInt(k, 1));
      const HermitianForm h = compose_form(f, g);
      if (h.a() != 0) {
        out.form = h;
        out.g = g;
        done = true;
        break;
      }
    }
    if (!done) throw std::logic_error("normalize_form: no change of variables found");
  }
  if (out.form.a() < 0) {
    out.form = -out.form;
    out.sign = -1;
  }
  return out;
}

GroupSetup prepare_group(const HermitianForm& f, const GroupDescriptor& G, const SetupOptions& opt) {
  GroupSetup s;
  s.group = G;
  s.normalized = normalize_form(f, G.kind != GroupKind::full);
  s.automorphs = opt.automorph_source ? opt.automorph_source(s.normalized.form, opt.generator_height)
                                      : find_automorphs(s.normalized.form, opt.generator_height);
  const PlaneOfForm plane(s.normalized.form);
  s.full = build_fuchsian_data(plane, s.automorphs.gens, opt.fuchsian);
  if (G.kind == GroupKind::full) {
    s.restricted = s.full;
    return s;
  }
  const Membership member = group_membership(G);
  const CosetData cosets = enumerate_cosets(s.full.side_pairings, member);
  s.projective_index = projective_subgroup_index(s.full.side_pairings, member);
  std::set<UniMat> elems(cosets.generators.begin(), cosets.generators.end());
  for (const UniMat& g : s.automorphs.gens)
    if (member(g)) elems.insert(g);
  const std::vector<UniMat> gens(elems.begin(), elems.end());
  for (const UniMat& g : bounded_words(gens, plane, s.full.base, opt.fuchsian.word_length, opt.fuchsian.ball_radius,
                                       opt.fuchsian.max_elements))
    elems.insert(g);
  const UniMat minus = -UniMat::identity(f.field());
  if (member(minus)) elems.insert(minus);
  s.restricted = build_fuchsian_data(plane, {elems.begin(), elems.end()}, opt.fuchsian);
  return s;
}

CovolumeEstimate group_covolume(const GroupSetup& setup) {
  CovolumeEstimate c;
  const HermitianForm& f = setup.normalized.form;
  if (f.field().disc() == -4) {
    c.full_group = covolume_gaussian(f.primitive_part()).value();
    c.closed_form = true;
  } else {
    c.full_group = setup.full.polygon.area;
  }
  c.projective_index = setup.projective_index;
  c.value = c.full_group * static_cast<double>(setup.projective_index);
  c.dirichlet_area = setup.restricted.polygon.area;
  return c;
}

PredictionConstant predicted_for(const GroupSetup& setup, double zeta_tol) {
  return predicted_constant(setup.normalized.form, group_covolume(setup).value, setup.group, zeta_tol);
}

namespace {

bool passes_filter(const QuadPair& w, const GroupDescriptor& G) {
  if (G.kind == GroupKind::full || !G.ideal) return true;
  if (!G.ideal->contains(w.v)) return false;
  if (G.kind == GroupKind::level) return G.ideal->contains(w.u - QuadInt(w.u.field(), 1));
  return true;
}

bool norm_then_coords(const QuadInt& a, const QuadInt& b) {
  const int64_t na = a.norm(), nb = b.norm();
  if (na != nb) return na < nb;
  return a < b;
}

// Coprime u with (u, v) admissible, for one fixed v, in (N(u), u) order.
std::vector<PairValue> pairs_for(const HermitianForm& f, const QuadInt& v, int64_t s_max, int64_t height,
                                 const GroupDescriptor& G) {
  const Field& k = f.field();
  const double a = static_cast<double>(f.a());
  const double nv = static_cast<double>(v.norm());
  const double delta = static_cast<double>(f.discriminant());
  const double s = static_cast<double>(s_max);
  // a f(u,v) = |a u + conj(b) v|^2 - Delta N(v), so u lies in an annulus.
  const double outer = std::sqrt(delta * nv + a * s) / a;
  const double inner_sq = std::max(0.0, delta * nv - a * s) / (a * a);
  const cplx center = -(f.b().conj() * v).to_complex() / a;
  const double h = std::sqrt(static_cast<double>(-k.disc())) / 2.0;
  const double hb = std::sqrt(static_cast<double>(height));
  std::vector<PairValue> out;
  const int64_t ylo = static_cast<int64_t>(std::floor((center.imag() - outer) / h)) - 1;
  const int64_t yhi = static_cast<int64_t>(std::ceil((center.imag() + outer) / h)) + 1;
  for (int64_t y = ylo; y <= yhi; ++y) {
    const double dy = static_cast<double>(y) * h - center.imag();
    if (std::abs(static_cast<double>(y) * h) > hb + 1) continue;
    const double dx_out = std::sqrt(std::max(0.0, outer * outer - dy * dy));
    const double dx_in = std::sqrt(std::max(0.0, inner_sq - dy * dy));
    const double shift = center.real() - static_cast<double>(y) * static_cast<double>(k.disc()) / 2.0;
    auto scan = [&](double lo, double hi) {
      for (int64_t x = static_cast<int64_t>(std::floor(lo)) - 1; x <= static_cast<int64_t>(std::ceil(hi)) + 1; ++x) {
        const QuadInt u(k, x, y);
        if (u.norm() > height) continue;
        const int64_t value = f(u, v);
        if (std::abs(value) > s_max) continue;
        out.push_back({{u, v}, value});
      }
    };
    if (dx_in <= 1.0) {
      scan(shift - dx_out, shift + dx_out);
    } else {
      scan(shift - dx_out, shift - dx_in);
      scan(shift + dx_in, shift + dx_out);
    }
  }
  std::sort(out.begin(), out.end(), [](const PairValue& p, const PairValue& q) {
    return norm_then_coords(p.pair.u, q.pair.u);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const PairValue& p, const PairValue& q) { return p.pair == q.pair; }),
            out.end());
  std::vector<PairValue> kept;
  for (const PairValue& p : out) {
    if (p.pair.u.is_zero() && p.pair.v.is_zero()) continue;
    if (!passes_filter(p.pair, G)) continue;
    if (!is_coprime_pair(p.pair.u, p.pair.v)) continue;
    kept.push_back(p);
  }
  return kept;
}

struct PartialCount {
  std::map<QuadPair, int64_t> orbits;  // representative -> |value|
  std::set<QuadPair> null_orbits;
  int64_t raw = 0;
  int64_t unknown = 0;
  int64_t ambiguous = 0;
  int64_t unit_stabilizers = 0;
};

PartialCount count_range(const HermitianForm& f, const std::vector<QuadInt>& vs, size_t offset, size_t stride,
                         int64_t s_max, int64_t height, const GroupDescriptor& G, const FuchsianData& fd,
                         bool include_null) {
  PartialCount pc;
  for (size_t i = offset; i < vs.size(); i += stride) {
    for (const PairValue& p : pairs_for(f, vs[i], s_max, height, G)) {
      if (p.value == 0 && !include_null) continue;
      ++pc.raw;
      try {
        const CanonicalRep c = canonical_orbit_rep(p.pair, fd);
        if (c.ambiguous) ++pc.ambiguous;
        if (c.unit_stabilizer) ++pc.unit_stabilizers;
        if (p.value == 0)
          pc.null_orbits.insert(c.rep);
        else
          pc.orbits.emplace(c.rep, std::abs(p.value));
      } catch (const GeometryError&) {
        ++pc.unknown;
      }
    }
  }
  return pc;
}

PartialCount count_all(const HermitianForm& f, int64_t s_max, int64_t height, const GroupDescriptor& G,
                       const FuchsianData& fd, bool include_null, int threads) {
  const std::vector<QuadInt> vs = elements_up_to_norm(f.field(), height);
  const size_t n = static_cast<size_t>(std::max(1, threads));
  std::vector<PartialCount> parts(n);
  if (n == 1) {
    parts[0] = count_range(f, vs, 0, 1, s_max, height, G, fd, include_null);
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < n; ++t)
      pool.emplace_back([&, t] { parts[t] = count_range(f, vs, t, n, s_max, height, G, fd, include_null); });
    for (std::thread& th : pool) th.join();
  }
  PartialCount total = std::move(parts[0]);
  for (size_t t = 1; t < n; ++t) {
    total.orbits.insert(parts[t].orbits.begin(), parts[t].orbits.end());
    total.null_orbits.insert(parts[t].null_orbits.begin(), parts[t].null_orbits.end());
    total.raw += parts[t].raw;
    total.unknown += parts[t].unknown;
    total.ambiguous += parts[t].ambiguous;
    total.unit_stabilizers += parts[t].unit_stabilizers;
  }
  return total;
}

int64_t psi_at(const PartialCount& pc, int64_t s) {
  int64_t n = 0;
  for (const auto& [rep, value] : pc.orbits)
    if (value <= s) ++n;
  return n;
}

}  // namespace

std::vector<PairValue> enumerate_pairs(const HermitianForm& f, int64_t s_max, int64_t height,
                                       const GroupDescriptor& G) {
  if (f.a() <= 0) throw std::invalid_argument("enumerate_pairs: form must have a > 0");
  if (f.classify() != FormKind::indefinite) throw std::invalid_argument("enumerate_pairs: form is not indefinite");
  std::vector<PairValue> out;
  for (const QuadInt& v : elements_up_to_norm(f.field(), height)) {
    auto part = pairs_for(f, v, s_max, height, G);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

ConvergenceReport count_orbits(const CountRequest& req) {
  return count_orbits(req, prepare_group(req.form, req.group, req.setup));
}

ConvergenceReport count_orbits(const CountRequest& req, const GroupSetup& setup) {
  if (req.s_grid.empty()) throw std::invalid_argument("count_orbits: empty grid");
  if (!std::is_sorted(req.s_grid.begin(), req.s_grid.end()) || req.s_grid.front() < 1)
    throw std::invalid_argument("count_orbits: grid must be positive and ascending");
  const int64_t s_max = req.s_grid.back();
  const int64_t height = req.height_bound > 0 ? req.height_bound : checked_mul(req.height_factor, s_max);
  const HermitianForm& f = setup.normalized.form;
  const FuchsianData& fd = setup.restricted;

  const PartialCount pc = count_all(f, s_max, height, setup.group, fd, req.include_null, req.threads);

  ConvergenceReport rep;
  rep.normalized_form = f;
  rep.constant = predicted_for(setup);
  for (int64_t s : req.s_grid) {
    ReportRow row;
    row.s = s;
    row.psi = psi_at(pc, s);
    row.ratio = static_cast<double>(row.psi) / (static_cast<double>(s) * static_cast<double>(s));
    row.predicted = rep.constant.value;
    row.relative_gap = std::abs(row.ratio - row.predicted) / row.predicted;
    rep.rows.push_back(row);
  }
  CountDiagnostics& d = rep.diagnostics;
  d.null_orbit_count = static_cast<int64_t>(pc.null_orbits.size());
  d.unknown_verdicts = pc.unknown;
  d.generator_height = setup.automorphs.search_height;
  d.height_bound = height;
  d.raw_pairs = pc.raw;
  d.ambiguous_reps = pc.ambiguous;
  d.unit_stabilizers = pc.unit_stabilizers;
  d.projective_index = setup.projective_index;
  d.side_pairings = fd.side_pairings.size();
  d.dirichlet_area = fd.polygon.area;
  if (req.check_stability) {
    const int64_t s0 = req.s_grid.front();
    const PartialCount doubled =
        count_all(f, s0, checked_mul(height, 2), setup.group, fd, false, req.threads);
    d.stability_checked = true;
    d.stability_psi = rep.rows.front().psi;
    d.stability_psi_doubled = psi_at(doubled, s0);
    d.stable = d.stability_psi == d.stability_psi_doubled;
  }
  return rep;
}

FitSummary fit_and_compare(const ConvergenceReport& report, const PredictionConstant& constant) {
  const auto& rows = report.rows;
  if (rows.size() < 3) throw std::invalid_argument("fit_and_compare: need at least 3 grid points");
  FitSummary out;
  out.predicted = constant.value;
  out.s_max = rows.back().s;
  out.ratio_at_max = rows.back().ratio;
  const size_t first = rows.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = first; i < rows.size(); ++i) {
    const double x = static_cast<double>(rows[i].s) * static_cast<double>(rows[i].s);
    const double y = static_cast<double>(rows[i].psi);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(rows.size() - first);
  out.points_used = rows.size() - first;
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 0)) throw std::invalid_argument("fit_and_compare: degenerate grid");
  out.slope = (n * sxy - sx * sy) / den;
  out.intercept = (sy - out.slope * sx) / n;
  out.ratio_gap = std::abs(out.ratio_at_max - out.predicted) / out.predicted;
  out.slope_gap = std::abs(out.slope - out.predicted) / out.predicted;
  return out;
}

}  // namespace hermrep
