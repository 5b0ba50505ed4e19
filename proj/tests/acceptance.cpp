// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "hermrep/analytic.hpp"
#include "hermrep/automorphs.hpp"
#include "hermrep/cli.hpp"
#include "hermrep/counting.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace hermrep;

namespace {

constexpr double kPi = std::numbers::pi;
const Field kG(-4);

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

HermitianForm gaussian_form(int64_t a, int64_t re, int64_t im, int64_t c) {
  return {a, oracle::to_quad({re, im}), c};
}

Outcome zeta_value() {
  const auto t0 = std::chrono::steady_clock::now();
  const ZetaValue z = dedekind_zeta2(kG, 1e-12);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const oracle::BoundedSum o = oracle::gaussian_zeta2(1e-12);
  const double diff = std::abs(z.value - o.value);
  std::ostringstream os;
  os << "zeta=" << fmt("%.15f", z.value) << " oracle=" << fmt("%.15f", o.value) << " diff=" << fmt("%.2e", diff)
     << " time=" << fmt("%.3fs", secs);
  return {diff < 1e-8 && secs < 1.0, os.str()};
}

Outcome closed_form_covolumes() {
  const std::pair<int64_t, int64_t> cases[] = {{2, 2}, {5, 6}, {4, 2}};
  bool ok = true;
  std::ostringstream os;
  for (const auto& [delta, k] : cases) {
    const PiMultiple c = humbert_covolume_fdelta(delta);
    const double err = std::abs(c.value() - static_cast<double>(k) * kPi);
    ok = ok && c.coefficient == Rational(k) && err <= 1e-14 * k * kPi;
    os << "Delta=" << delta << ":" << c.str() << " ";
  }
  return {ok, os.str()};
}

Outcome cross_formula_identity() {
  std::mt19937_64 rng(2024);
  std::map<int, int> branches;
  double worst = 0;
  int tested = 0;
  while (tested < 40 || branches.size() < 4 || std::min_element(branches.begin(), branches.end(), [](auto& a, auto& b) {
                                                  return a.second < b.second;
                                                })->second < 5) {
    const HermitianForm f = gen::indefinite_form(rng, kG, 10);
    if (!f.is_primitive()) continue;
    const int iota = iota_f(f);
    if (branches[iota] >= 10) continue;
    const double c = corollary_gaussian(f).value;
    const double p = predicted_constant(f, covolume_gaussian(f).value(), full_group(kG)).value;
    worst = std::max(worst, std::abs(c - p) / p);
    ++branches[iota];
    ++tested;
  }
  std::ostringstream os;
  os << tested << " forms, branches";
  for (const auto& [iota, n] : branches) os << " iota=" << iota << ":" << n;
  os << ", max relative error " << fmt("%.2e", worst);
  return {tested >= 20 && branches.size() == 4 && worst <= 1e-12, os.str()};
}

Outcome index_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  int checked = 0, mismatches = 0;
  for (int64_t d : {-4, -3}) {
    const Field k(d);
    for (const QuadIdeal& a : enumerate_ideals(k, 64)) {
      // N^3 prod (1 - N(p)^-2) and N prod (1 + N(p)^-1), in exact integers.
      int64_t level = a.norm() * a.norm() * a.norm(), hecke = a.norm();
      for (const PrimeDivisor& p : ideal_prime_divisors(a)) {
        const int64_t q = p.residue_norm;
        level = level / (q * q) * (q * q - 1);
        hecke = hecke / q * (q + 1);
      }
      mismatches += sl2_index_oracle(a, CongruenceKind::full_level) != level;
      mismatches += sl2_index_oracle(a, CongruenceKind::hecke) != hecke;
      ++checked;
    }
  }
  const QuadIdeal p = QuadIdeal::principal(oracle::to_quad({1, 1}));
  const GroupDescriptor lv = congruence_data(p, GroupKind::level), hk = congruence_data(p, GroupKind::hecke);
  const bool printed_differs = !(lv.printed_index == Rational(lv.index_in_bianchi)) &&
                               !(hk.printed_index == Rational(hk.index_in_bianchi)) && !lv.printed_agrees &&
                               !hk.printed_agrees;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream os;
  os << checked << " ideals, " << mismatches << " mismatches; (1+i): oracle level=" << lv.index_in_bianchi
     << " hecke=" << hk.index_in_bianchi << ", printed level=" << lv.printed_index << " hecke=" << hk.printed_index
     << "; time=" << fmt("%.2fs", secs);
  return {mismatches == 0 && lv.index_in_bianchi == 6 && hk.index_in_bianchi == 3 && printed_differs && secs < 10,
          os.str()};
}

Outcome perpendicular_lengths() {
  const HermitianForm f2 = gaussian_form(1, 0, 0, -2);
  const PlaneOfForm plane(f2);
  std::mt19937_64 rng(77);
  double worst = 0;
  int n = 0;
  while (n < 100) {
    const oracle::Gauss u = oracle::random_gauss(rng, 30), v = oracle::random_gauss(rng, 30);
    if ((u.re | u.im | v.re | v.im) == 0 || !oracle::gauss_coprime(u, v)) continue;
    const double value = std::norm(std::complex<double>(u.re, u.im)) - 2.0 * std::norm(std::complex<double>(v.re, v.im));
    if (value == 0) continue;
    const CuspHoroball hb = horoball_of_pair(oracle::to_quad(u), oracle::to_quad(v));
    const double len = foot_of_perpendicular(plane, hb).length;
    worst = std::max(worst, std::abs(len - std::log(std::abs(value) / std::sqrt(2.0))));
    ++n;
  }
  return {worst < 1e-9, std::to_string(n) + " pairs, max deviation " + fmt("%.2e", worst)};
}

Outcome dirichlet_areas() {
  bool ok = true;
  std::ostringstream os;
  for (const auto& [delta, expected] : {std::pair<int64_t, double>{2, 2 * kPi}, {5, 6 * kPi}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const GroupSetup s = prepare_group(HermitianForm::diagonal(kG, delta), full_group(kG));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double area = s.full.polygon.area;
    const double rel = std::abs(area - expected) / expected;
    ok = ok && rel < 0.02 && secs < 120;
    os << "f" << delta << ": area=" << fmt("%.6f", area) << " expected=" << fmt("%.6f", expected)
       << " rel=" << fmt("%.1e", rel) << " sides=" << s.full.side_pairings.size() << " time=" << fmt("%.2fs", secs)
       << "; ";
  }
  return {ok, os.str()};
}

Outcome orbit_machinery() {
  const HermitianForm f2 = gaussian_form(1, 0, 0, -2);
  const UniMat target = UniMat::from_ints(kG, 3, 4, 2, 3);
  const AutomorphSet small = find_automorphs(f2, 20);
  const bool found = std::binary_search(small.gens.begin(), small.gens.end(), target) &&
                     compose_form(f2, target) == f2;

  const GroupSetup setup = prepare_group(f2, full_group(kG));
  const FuchsianData& fd = setup.full;
  const QuadPair p{QuadInt(kG, 3), QuadInt(kG, 2)}, q{QuadInt(kG, 17), QuadInt(kG, 12)};
  const EquivalenceVerdict v = are_equivalent(p, q, fd);
  const bool merged = v.tag == EquivalenceTag::equivalent && v.witness && v.witness->apply(p) == q &&
                      compose_form(f2, *v.witness) == f2;

  // Breadth-first closure of sampled seeds under the small automorphs,
  // restricted to the height-400 window, then pairwise verdicts.
  std::set<QuadPair> window;
  for (const PairValue& w : enumerate_pairs(f2, 20, 400, full_group(kG)))
    if (w.value != 0) window.insert(w.pair);
  std::vector<QuadPair> all(window.begin(), window.end());
  std::mt19937_64 rng(31);
  std::vector<UniMat> gens;
  for (const UniMat& g : small.gens)
    if (!g.is_identity()) gens.push_back(g);
  int64_t tested = 0, false_inequivalent = 0, unknown = 0;
  for (int seed_i = 0; seed_i < 40; ++seed_i) {
    const QuadPair seed = all[static_cast<size_t>(gen::uniform(rng, 0, static_cast<int64_t>(all.size()) - 1))];
    std::map<QuadPair, int> depth{{seed, 0}};
    std::deque<QuadPair> queue{seed};
    while (!queue.empty() && depth.size() < 400) {
      const QuadPair w = queue.front();
      queue.pop_front();
      if (depth[w] == 6) continue;
      for (const UniMat& g : gens) {
        const QuadPair x = g.apply(w);
        if (!window.count(x) || depth.count(x)) continue;
        depth[x] = depth[w] + 1;
        queue.push_back(x);
      }
    }
    for (const auto& [x, dx] : depth) {
      if (dx == 0) continue;
      const EquivalenceVerdict r = are_equivalent(seed, x, fd);
      ++tested;
      false_inequivalent += r.tag == EquivalenceTag::inequivalent_modulo_generators;
      unknown += r.tag == EquivalenceTag::unknown;
    }
  }
  std::ostringstream os;
  os << "[[3,4],[2,3]] found at height 20: " << (found ? "yes" : "no") << "; (3,2)~(17,12) witness "
     << (v.witness ? v.witness->str() : std::string("none")) << "; " << tested << " BFS-connected pairs, "
     << false_inequivalent << " false inequivalent, " << unknown << " unknown";
  return {found && merged && tested > 0 && false_inequivalent == 0, os.str()};
}

Outcome headline_asymptotic() {
  const auto t0 = std::chrono::steady_clock::now();
  CountRequest req;
  req.form = gaussian_form(1, 0, 0, -2);
  req.group = full_group(kG);
  req.s_grid = {25, 50, 100, 200};
  req.height_bound = 6400;
  req.check_stability = true;
  const ConvergenceReport rep = count_orbits(req);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double target = 0.81881;
  const ReportRow& r50 = rep.rows[1];
  const ReportRow& r200 = rep.rows[3];
  const double band = std::abs(r200.ratio - target) / target;
  std::ostringstream os;
  for (const ReportRow& r : rep.rows) os << "s=" << r.s << " psi=" << r.psi << " ratio=" << fmt("%.4f", r.ratio) << "; ";
  os << "constant=" << fmt("%.6f", rep.constant.value) << " gap50=" << fmt("%.4f", r50.relative_gap)
     << " gap200=" << fmt("%.4f", r200.relative_gap) << " height=" << rep.diagnostics.height_bound
     << " stable=" << (rep.diagnostics.stable ? "yes" : "no") << " (" << rep.diagnostics.stability_psi << "/"
     << rep.diagnostics.stability_psi_doubled << ") time=" << fmt("%.1fs", secs);
  const bool ok = band < 0.25 && r200.relative_gap < r50.relative_gap && rep.diagnostics.height_bound >= 800 &&
                  rep.diagnostics.stability_checked && rep.diagnostics.stable && secs < 1800;
  return {ok, os.str()};
}

Outcome congruence_smoke() {
  CountRequest req;
  req.form = gaussian_form(1, 0, 0, -2);
  req.group = congruence_data(QuadIdeal::principal(oracle::to_quad({1, 1})), GroupKind::hecke);
  req.s_grid = {25, 50, 100};
  req.height_bound = 1600;
  req.check_stability = false;
  const ConvergenceReport rep = count_orbits(req);
  const PredictionConstant& c = rep.constant;
  const double g0 = rep.rows[0].relative_gap, g1 = rep.rows[1].relative_gap, g2 = rep.rows[2].relative_gap;
  const bool trend = (g0 > g1 && g1 > g2) || g2 < 0.40;
  std::ostringstream os;
  os << "index=" << c.inputs.index << " stabilizer=" << c.inputs.stabilizer_index << " iota_G=" << c.inputs.iota_G
     << " provenance=" << to_string(c.provenance) << " constant=" << fmt("%.6f", c.value) << "; ";
  for (const ReportRow& r : rep.rows)
    os << "s=" << r.s << " ratio=" << fmt("%.4f", r.ratio) << " gap=" << fmt("%.4f", r.relative_gap) << "; ";
  const bool ok = c.inputs.index == 3 && c.inputs.stabilizer_index == 4 && c.inputs.iota_G == 1 &&
                  c.provenance == Provenance::theorem_general && trend;
  return {ok, os.str()};
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "hermrep_acceptance_determinism";
  std::filesystem::remove_all(dir);
  const std::string prefix = (dir / "compare").string();
  const std::vector<std::string> args{"compare", "--DK", "-4", "--form", "1,0,0,-2", "--s-grid", "10,20,40,80",
                                      "--height", "800", "--out", prefix};
  std::ostringstream sink1, sink2, err;
  const int c1 = cli::run_command(args, sink1, err);
  const std::string j1 = slurp(prefix + ".json"), v1 = slurp(prefix + ".csv");
  const int c2 = cli::run_command(args, sink2, err);
  const std::string j2 = slurp(prefix + ".json"), v2 = slurp(prefix + ".csv");
  const bool ok = c1 == 0 && c2 == 0 && !j1.empty() && !v1.empty() && j1 == j2 && v1 == v2 && sink1.str() == sink2.str();
  return {ok, "json " + std::to_string(j1.size()) + " bytes, csv " + std::to_string(v1.size()) + " bytes, identical: " +
                  (ok ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"zeta value of Q(i) against zeta(2) * Catalan", zeta_value},
      {"closed-form covolumes for Delta = 2, 5, 4", closed_form_covolumes},
      {"corollary equals general constant on a Gaussian corpus", cross_formula_identity},
      {"index oracle equals closed forms up to norm 64", index_oracle},
      {"perpendicular length equals ln(|f|/sqrt(Delta))", perpendicular_lengths},
      {"Dirichlet polygon areas of f2 and f5", dirichlet_areas},
      {"automorph search, witnesses and equivalence verdicts", orbit_machinery},
      {"f2 counts approach the predicted constant", headline_asymptotic},
      {"Hecke (1+i) congruence pipeline", congruence_smoke},
      {"compare output is bit-identical across runs", determinism}};
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %zu: %s | %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
