#include "hermrep/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "hermrep/analytic.hpp"
#include "hermrep/automorphs.hpp"
#include "hermrep/counting.hpp"
#include "hermrep/hyperbolic.hpp"

namespace hermrep::cli {

using json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto space = [](char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; };
  size_t b = 0, e = s.size();
  while (b < e && space(s[b])) ++b;
  while (e > b && space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

int64_t parse_int(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  size_t used = 0;
  int64_t v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": expected an integer, got '" + s + "'");
  }
  if (used != t.size()) throw std::invalid_argument(what + ": expected an integer, got '" + s + "'");
  return v;
}

GroupKind parse_kind(const std::string& s) {
  if (s == "full") return GroupKind::full;
  if (s == "level") return GroupKind::level;
  if (s == "hecke") return GroupKind::hecke;
  throw std::invalid_argument("--kind must be one of full, level, hecke (got '" + s + "')");
}

std::string form_key(const HermitianForm& f) {
  std::ostringstream os;
  os << f.a() << "," << f.b().x() << "," << f.b().y() << "," << f.c();
  return os.str();
}

// JSON encodings

json to_json(const QuadInt& q) { return json::array({q.x(), q.y()}); }

json to_json(const UniMat& g) {
  return json::array({to_json(g.alpha()), to_json(g.beta()), to_json(g.gamma()), to_json(g.delta())});
}

UniMat unimat_from_json(const Field& k, const json& j) {
  if (!j.is_array() || j.size() != 4) throw std::invalid_argument("matrix entry must list four elements");
  auto q = [&](const json& e) { return QuadInt(k, e.at(0).get<int64_t>(), e.at(1).get<int64_t>()); };
  return UniMat(q(j[0]), q(j[1]), q(j[2]), q(j[3]));
}

json to_json(const HermitianForm& f) {
  json j;
  j["D_K"] = f.field().disc();
  j["a"] = f.a();
  j["b"] = to_json(f.b());
  j["b_text"] = f.b().str();
  j["c"] = f.c();
  j["discriminant"] = f.discriminant();
  return j;
}

json to_json(const Config& c) {
  json j;
  j["command"] = c.command;
  j["D_K"] = c.disc;
  j["form"] = c.form;
  j["kind"] = c.kind;
  j["ideal"] = c.ideal;
  j["s_grid"] = c.s_grid;
  j["height_bound"] = c.height_bound;
  j["height_factor"] = c.height_factor;
  j["generator_height"] = c.generator_height;
  j["word_length"] = c.word_length;
  j["ball_radius"] = c.ball_radius;
  j["max_elements"] = c.max_elements;
  j["tol"] = c.tol;
  j["tie_eps"] = c.tie_eps;
  j["zeta_tol"] = c.zeta_tol;
  j["seed"] = c.seed;
  j["include_null"] = c.include_null;
  j["check_stability"] = c.check_stability;
  j["threads"] = c.threads;
  j["oracle_bound"] = c.oracle_bound;
  j["out"] = c.out;
  j["cache_dir"] = c.cache_dir;
  return j;
}

template <class T>
void read_field(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

Config config_from_json(const json& root) {
  const json& j = root.contains("config") ? root.at("config") : root;
  if (!j.is_object()) throw std::invalid_argument("config file: expected a JSON object");
  Config c;
  read_field(j, "command", c.command);
  read_field(j, "D_K", c.disc);
  read_field(j, "form", c.form);
  read_field(j, "kind", c.kind);
  read_field(j, "ideal", c.ideal);
  read_field(j, "s_grid", c.s_grid);
  read_field(j, "height_bound", c.height_bound);
  read_field(j, "height_factor", c.height_factor);
  read_field(j, "generator_height", c.generator_height);
  read_field(j, "word_length", c.word_length);
  read_field(j, "ball_radius", c.ball_radius);
  read_field(j, "max_elements", c.max_elements);
  read_field(j, "tol", c.tol);
  read_field(j, "tie_eps", c.tie_eps);
  read_field(j, "zeta_tol", c.zeta_tol);
  read_field(j, "seed", c.seed);
  read_field(j, "include_null", c.include_null);
  read_field(j, "check_stability", c.check_stability);
  read_field(j, "threads", c.threads);
  read_field(j, "oracle_bound", c.oracle_bound);
  read_field(j, "out", c.out);
  read_field(j, "cache_dir", c.cache_dir);
  return c;
}

json to_json(const GroupDescriptor& G) {
  json j;
  j["kind"] = to_string(G.kind);
  j["ideal_hnf"] = G.ideal ? json(G.ideal->hnf()) : json(nullptr);
  j["ideal_norm"] = G.ideal ? G.ideal->norm() : 1;
  j["index"] = G.index_in_bianchi;
  j["classical_index"] = G.classical_index;
  j["printed_index"] = G.printed_index.str();
  j["printed_index_agrees"] = G.printed_agrees;
  j["stabilizer_index"] = G.stabilizer_index;
  j["iota_G"] = G.iota_G;
  return j;
}

json to_json(const PredictionConstant& p) {
  json j;
  j["value"] = p.value;
  j["provenance"] = to_string(p.provenance);
  json in;
  in["delta"] = p.inputs.delta;
  in["D_K"] = p.inputs.disc;
  in["omega_K"] = p.inputs.omega;
  in["zeta_K_2"] = p.inputs.zeta;
  in["covolume"] = p.inputs.covolume;
  in["index"] = p.inputs.index;
  in["stabilizer_index"] = p.inputs.stabilizer_index;
  in["iota_G"] = p.inputs.iota_G;
  if (p.provenance == Provenance::corollary_gaussian) {
    in["iota_f"] = p.inputs.iota_f;
    in["prime_product"] = p.inputs.prime_product;
  }
  j["inputs"] = in;
  j["reevaluated"] = reevaluate(p);
  return j;
}

json to_json(const CovolumeEstimate& c) {
  json j;
  j["value"] = c.value;
  j["full_group"] = c.full_group;
  j["projective_index"] = c.projective_index;
  j["source"] = c.closed_form ? "closed_form" : "dirichlet_area";
  j["dirichlet_area"] = c.dirichlet_area;
  return j;
}

// Resolved inputs

struct Resolved {
  Field field;
  HermitianForm form;
  GroupDescriptor group;
};

Resolved resolve(const Config& c) {
  Resolved r;
  r.field = Field(c.disc);
  r.form = parse_form(r.field, c.form);
  const GroupKind kind = parse_kind(c.kind);
  if (kind == GroupKind::full) {
    r.group = full_group(r.field);
  } else {
    r.group = congruence_data(parse_ideal(r.field, c.ideal), kind, c.oracle_bound);
  }
  return r;
}

// Generator cache: one JSON file per (D_K, a, b, c, search height).

std::string cache_path(const std::string& dir, const HermitianForm& f, int64_t height) {
  std::ostringstream os;
  os << "automorphs_D" << -f.field().disc() << "_a" << f.a() << "_b" << f.b().x() << "_" << f.b().y() << "_c"
     << f.c() << "_h" << height << ".json";
  return (std::filesystem::path(dir) / os.str()).string();
}

AutomorphSet cached_automorphs(const std::string& dir, const HermitianForm& f, int64_t height, std::ostream& err) {
  const std::string path = cache_path(dir, f, height);
  if (std::filesystem::exists(path)) {
    try {
      std::ifstream in(path);
      const json j = json::parse(in);
      AutomorphSet s;
      s.form = f;
      s.search_height = j.at("search_height").get<int64_t>();
      for (const json& m : j.at("generators")) {
        UniMat g = unimat_from_json(f.field(), m);
        if (!(compose_form(f, g) == f) || g.height() > height)
          throw std::invalid_argument("cached matrix fails verification");
        s.gens.push_back(g);
      }
      s.complete_hint = s.gens.size() > 2;
      if (s.search_height == height && std::is_sorted(s.gens.begin(), s.gens.end())) return s;
    } catch (const std::exception& e) {
      err << "hermrep: ignoring cache file " << path << " (" << e.what() << ")\n";
    }
  }
  AutomorphSet s = find_automorphs(f, height);
  std::filesystem::create_directories(dir);
  json j;
  j["form"] = to_json(f);
  j["search_height"] = s.search_height;
  j["generators"] = json::array();
  for (const UniMat& g : s.gens) j["generators"].push_back(to_json(g));
  std::ofstream(path) << j.dump(1) << "\n";
  return s;
}

SetupOptions setup_options(const Config& c, std::ostream& err) {
  SetupOptions o;
  o.generator_height = c.generator_height;
  o.fuchsian.seed = c.seed;
  o.fuchsian.tol = c.tol;
  o.fuchsian.tie_eps = c.tie_eps;
  o.fuchsian.word_length = c.word_length;
  o.fuchsian.ball_radius = c.ball_radius;
  o.fuchsian.max_elements = static_cast<size_t>(c.max_elements);
  if (!c.cache_dir.empty()) {
    const std::string dir = c.cache_dir;
    o.automorph_source = [dir, &err](const HermitianForm& f, int64_t h) { return cached_automorphs(dir, f, h, err); };
  }
  return o;
}

// Emission

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::invalid_argument("cannot write output file " + path);
  os << content;
}

void emit(const Config& c, const json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  out << text;
  if (!c.out.empty()) write_file(c.out + ".json", text);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit_csv(const Config& c, const ConvergenceReport& rep) {
  if (c.out.empty()) return;
  std::ostringstream os;
  os << "# config " << to_json(c).dump() << "\n";
  os << "s,psi,ratio,predicted,relative_gap\n";
  for (const ReportRow& r : rep.rows)
    os << r.s << "," << r.psi << "," << fmt(r.ratio) << "," << fmt(r.predicted) << "," << fmt(r.relative_gap) << "\n";
  write_file(c.out + ".csv", os.str());
}

json header(const Config& c, const Resolved& r) {
  json j;
  j["config"] = to_json(c);
  j["form"] = to_json(r.form);
  j["group"] = to_json(r.group);
  return j;
}

json prediction_block(const Config& c, const Resolved& r, const GroupSetup& setup) {
  json j;
  const ZetaValue z = dedekind_zeta2(r.field, c.zeta_tol);
  j["zeta_K_2"] = {{"value", z.value}, {"error_bound", z.error_bound}, {"terms", z.terms}};
  const CovolumeEstimate cov = group_covolume(setup);
  json cj = to_json(cov);
  if (r.field.disc() == -4) {
    const HermitianForm prim = setup.normalized.form.primitive_part();
    cj["closed_form"] = covolume_gaussian(prim).str();
    j["iota_f"] = iota_f(prim);
  }
  j["covolume"] = cj;
  const PredictionConstant p = predicted_constant(setup.normalized.form, cov.value, setup.group, c.zeta_tol);
  j["constant"] = to_json(p);
  if (r.field.disc() == -4 && setup.group.kind == GroupKind::full) {
    const HermitianForm& nf = setup.normalized.form;
    const int64_t k = nf.content();
    const PredictionConstant g = corollary_gaussian(nf.primitive_part(), c.zeta_tol);
    json gj = to_json(g);
    gj["content"] = k;
    gj["value_for_form"] = g.value / static_cast<double>(k * k);
    gj["relative_difference"] = std::abs(gj["value_for_form"].get<double>() - p.value) / p.value;
    j["gaussian_corollary"] = gj;
  }
  if (setup.group.kind != GroupKind::full) {
    const PredictionConstant pp = corollary_congruence_printed(setup.normalized.form, cov.value, setup.group,
                                                               c.zeta_tol);
    j["printed_index_constant"] = {{"value", pp.value},
                                   {"index_used", pp.inputs.index},
                                   {"warning", !setup.group.printed_agrees}};
  }
  if (setup.normalized.sign < 0 || !setup.normalized.g.is_identity())
    j["normalization"] = {{"sign", setup.normalized.sign}, {"change_of_variables", to_json(setup.normalized.g)},
                          {"normalized_form", to_json(setup.normalized.form)}};
  return j;
}

CountRequest count_request(const Config& c, const Resolved& r, std::ostream& err) {
  CountRequest req;
  req.form = r.form;
  req.s_grid = c.s_grid;
  req.group = r.group;
  req.height_bound = c.height_bound;
  req.height_factor = c.height_factor;
  req.include_null = c.include_null;
  req.check_stability = c.check_stability;
  req.threads = c.threads;
  req.setup = setup_options(c, err);
  return req;
}

json report_json(const ConvergenceReport& rep) {
  json j;
  j["rows"] = json::array();
  for (const ReportRow& r : rep.rows)
    j["rows"].push_back({{"s", r.s}, {"psi", r.psi}, {"ratio", r.ratio}, {"predicted", r.predicted},
                         {"relative_gap", r.relative_gap}});
  const CountDiagnostics& d = rep.diagnostics;
  j["diagnostics"] = {{"null_orbit_count", d.null_orbit_count},
                      {"unknown_verdicts", d.unknown_verdicts},
                      {"stability_checked", d.stability_checked},
                      {"stable", d.stable},
                      {"stability_psi", d.stability_psi},
                      {"stability_psi_doubled_height", d.stability_psi_doubled},
                      {"generator_height", d.generator_height},
                      {"height_bound", d.height_bound},
                      {"raw_pairs", d.raw_pairs},
                      {"ambiguous_reps", d.ambiguous_reps},
                      {"unit_stabilizers", d.unit_stabilizers},
                      {"projective_index", d.projective_index},
                      {"side_pairings", d.side_pairings},
                      {"dirichlet_area", d.dirichlet_area}};
  j["orbit_base_point"] = "(1,0)";
  return j;
}

// Subcommands

int cmd_predict(const Config& c, std::ostream& out, std::ostream& err) {
  const Resolved r = resolve(c);
  const GroupSetup setup = prepare_group(r.form, r.group, setup_options(c, err));
  json j = header(c, r);
  j["prediction"] = prediction_block(c, r, setup);
  emit(c, j, out);
  return ok;
}

int cmd_count(const Config& c, bool compare, std::ostream& out, std::ostream& err) {
  const Resolved r = resolve(c);
  const CountRequest req = count_request(c, r, err);
  const GroupSetup setup = prepare_group(r.form, r.group, req.setup);
  const ConvergenceReport rep = count_orbits(req, setup);
  json j = header(c, r);
  j["report"] = report_json(rep);
  if (compare) {
    j["prediction"] = prediction_block(c, r, setup);
    const FitSummary s = fit_and_compare(rep, rep.constant);
    j["summary"] = {{"s_max", s.s_max},         {"ratio_at_max", s.ratio_at_max}, {"slope", s.slope},
                    {"intercept", s.intercept}, {"predicted", s.predicted},       {"ratio_gap", s.ratio_gap},
                    {"slope_gap", s.slope_gap}, {"points_used", s.points_used}};
  }
  emit_csv(c, rep);
  emit(c, j, out);
  return ok;
}

int cmd_automorphs(const Config& c, std::ostream& out, std::ostream& err) {
  const Resolved r = resolve(c);
  const NormalizedForm nf = normalize_form(r.form);
  const SetupOptions opt = setup_options(c, err);
  const AutomorphSet s = opt.automorph_source ? opt.automorph_source(nf.form, c.generator_height)
                                              : find_automorphs(nf.form, c.generator_height);
  json j = header(c, r);
  j["normalized_form"] = to_json(nf.form);
  j["search_height"] = s.search_height;
  j["count"] = s.gens.size();
  j["generators"] = json::array();
  json log = json::array();
  bool has_minus = false;
  for (const UniMat& g : s.gens) {
    j["generators"].push_back(to_json(g));
    const bool preserves = compose_form(nf.form, g) == nf.form;
    const bool inverse_present = std::binary_search(s.gens.begin(), s.gens.end(), g.inverse());
    has_minus = has_minus || g.is_minus_identity();
    log.push_back({{"matrix", g.str()}, {"preserves_form", preserves}, {"inverse_present", inverse_present}});
  }
  j["contains_minus_identity"] = has_minus;
  j["verification"] = log;
  const ReciprocitySearch rs = reciprocity_witness(r.form, group_membership(r.group), std::min<int64_t>(c.generator_height, 50));
  j["reciprocity_witness"] = {{"found", rs.witness.has_value()},
                              {"matrix", rs.witness ? json(to_json(*rs.witness)) : json(nullptr)},
                              {"height_bound", rs.height_bound}};
  emit(c, j, out);
  return ok;
}

int cmd_domain(const Config& c, std::ostream& out, std::ostream& err) {
  const Resolved r = resolve(c);
  const GroupSetup setup = prepare_group(r.form, r.group, setup_options(c, err));
  const FuchsianData& fd = setup.restricted;
  json j = header(c, r);
  json poly;
  poly["base"] = {fd.base.real(), fd.base.imag()};
  poly["vertices"] = json::array();
  poly["angles"] = json::array();
  for (const PolygonVertex& v : fd.polygon.vertices) {
    poly["vertices"].push_back({{"x", v.point.real()}, {"y", v.point.imag()}, {"klein_x", v.klein_x},
                                {"klein_y", v.klein_y}, {"ideal", v.ideal}});
    poly["angles"].push_back(v.angle);
  }
  poly["side_pairings"] = fd.side_pairings.size();
  poly["area"] = fd.polygon.area;
  j["domain"] = poly;
  j["covolume"] = to_json(group_covolume(setup));
  emit(c, j, out);
  return ok;
}

int cmd_zeta(const Config& c, std::ostream& out) {
  const Field k(c.disc);
  const ZetaValue z = dedekind_zeta2(k, c.zeta_tol);
  json j;
  j["config"] = to_json(c);
  j["D_K"] = c.disc;
  j["value"] = z.value;
  j["error_bound"] = z.error_bound;
  j["terms"] = z.terms;
  emit(c, j, out);
  return ok;
}

int cmd_index(const Config& c, std::ostream& out) {
  const Field k(c.disc);
  const GroupKind kind = parse_kind(c.kind);
  if (kind == GroupKind::full) throw std::invalid_argument("index: --kind must be level or hecke");
  const QuadIdeal a = parse_ideal(k, c.ideal);
  const GroupDescriptor G = congruence_data(a, kind, c.oracle_bound);
  json j;
  j["oracle"] = G.index_in_bianchi;
  j["classical"] = G.classical_index;
  j["printed_formula"] = G.printed_index.is_integer() ? json(G.printed_index.num()) : json(G.printed_index.str());
  j["warning"] = !G.printed_agrees;
  j["ideal_hnf"] = a.hnf();
  j["ideal_norm"] = a.norm();
  j["config"] = to_json(c);
  emit(c, j, out);
  return ok;
}


void add_common(CLI::App* sub, Config& c, bool counting) {
  sub->add_option("--DK", c.disc, "Fundamental discriminant of K (negative)");
  sub->add_option("--form", c.form,
                  "Form as a,bx,by,c or a,<b>,c with b written in w = (D_K + sqrt(D_K))/2, e.g. 1,0,-2 or "
                  "2,1+w,-3; over Q(i) the letter i is also accepted");
  sub->add_option("--kind", c.kind, "Group: full, level (Gamma(a)) or hecke (Gamma_0(a))");
  sub->add_option("--ideal", c.ideal, "Ideal generators separated by ';', e.g. 1+i or 3;1+w");
  sub->add_option("--generator-height", c.generator_height, "Entry-norm bound of the automorph search");
  sub->add_option("--word-length", c.word_length, "Word length for subgroup balls and witness search");
  sub->add_option("--ball-radius", c.ball_radius, "Displacement radius of subgroup balls");
  sub->add_option("--max-elements", c.max_elements, "Cap on subgroup ball size");
  sub->add_option("--tol", c.tol, "Reduction tolerance");
  sub->add_option("--tie-eps", c.tie_eps, "Distance window treated as a tie");
  sub->add_option("--zeta-tol", c.zeta_tol, "Tail bound target for zeta_K(2)");
  sub->add_option("--seed", c.seed, "Seed of the base point perturbation");
  sub->add_option("--oracle-bound", c.oracle_bound, "Largest ideal norm the index oracle enumerates");
  sub->add_option("--cache-dir", c.cache_dir, "Directory for cached automorph searches");
  sub->add_option("--out", c.out, "Output prefix; writes <prefix>.json (and .csv for counts)");
  if (counting) {
    sub->add_option("--s-grid", c.s_grid, "Ascending values of s")->delimiter(',');
    sub->add_option("--height", c.height_bound, "Height bound on max(N(u), N(v)); 0 uses the factor");
    sub->add_option("--height-factor", c.height_factor, "Height bound as a multiple of max s");
    sub->add_flag("--include-null,!--no-include-null", c.include_null, "Also count orbits of null pairs");
    sub->add_flag("--stability,!--no-stability", c.check_stability, "Re-count the smallest s at doubled height");
    sub->add_option("--threads", c.threads, "Enumeration threads");
  }
}

std::string preload_config_path(const std::vector<std::string>& args) {
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

}  // namespace

QuadInt parse_quadint(const Field& k, const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty ring element");
  QuadInt total(k, 0);
  size_t pos = 0;
  bool first = true;
  const auto skip_space = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  while (pos < s.size()) {
    int64_t sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      if (s[pos] == '-') sign = -1;
      ++pos;
      skip_space();
    } else if (!first) {
      throw std::invalid_argument("ring element '" + text + "': expected + or - at position " + std::to_string(pos));
    }
    first = false;
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    const bool has_digits = pos > start;
    int64_t coeff = has_digits ? parse_int(s.substr(start, pos - start), "ring element") : 1;
    if (pos < s.size() && s[pos] == '*') {
      if (!has_digits) throw std::invalid_argument("ring element '" + text + "': '*' without coefficient");
      ++pos;
      if (pos >= s.size() || (s[pos] != 'w' && s[pos] != 'i'))
        throw std::invalid_argument("ring element '" + text + "': expected w or i after '*'");
    }
    QuadInt unit(k, 1);
    if (pos < s.size() && s[pos] == 'w') {
      unit = omega(k);
      ++pos;
    } else if (pos < s.size() && s[pos] == 'i') {
      if (k.disc() != -4) throw std::invalid_argument("ring element '" + text + "': i is only available for D_K = -4");
      unit = gaussian_i();
      ++pos;
    } else if (!has_digits) {
      throw std::invalid_argument("ring element '" + text + "': malformed term at position " + std::to_string(pos));
    }
    total += unit.scaled(checked_mul(sign, coeff));
    skip_space();
  }
  return total;
}

HermitianForm parse_form(const Field& k, const std::string& text) {
  const std::vector<std::string> parts = split(text, ',');
  if (parts.size() == 4) {
    return {parse_int(parts[0], "form a"), QuadInt(k, parse_int(parts[1], "form bx"), parse_int(parts[2], "form by")),
            parse_int(parts[3], "form c")};
  }
  if (parts.size() == 3) return {parse_int(parts[0], "form a"), parse_quadint(k, parts[1]), parse_int(parts[2], "form c")};
  throw std::invalid_argument("--form expects a,bx,by,c or a,<b>,c (got '" + text + "')");
}

QuadIdeal parse_ideal(const Field& k, const std::string& text) {
  if (trim(text).empty()) throw std::invalid_argument("--ideal is required for level and hecke groups");
  std::vector<QuadInt> gens;
  for (const std::string& g : split(text, ';')) gens.push_back(parse_quadint(k, g));
  bool all_zero = true;
  for (const QuadInt& g : gens) all_zero = all_zero && g.is_zero();
  if (all_zero) throw std::invalid_argument("--ideal must be nonzero");
  return QuadIdeal::from_generators(k, gens);
}

void validate(const Config& c) {
  static const std::set<std::string> commands{"predict", "count", "compare", "automorphs", "domain", "zeta", "index"};
  if (!commands.count(c.command)) throw std::invalid_argument("unknown command '" + c.command + "'");
  if (!is_fundamental_discriminant(c.disc))
    throw std::invalid_argument("--DK " + std::to_string(c.disc) + " is not a negative fundamental discriminant");
  const Field k(c.disc);
  const GroupKind kind = parse_kind(c.kind);
  if (kind != GroupKind::full || c.command == "index") parse_ideal(k, c.ideal);
  if (c.zeta_tol < 1e-12 || !(c.zeta_tol < 1)) throw std::invalid_argument("--zeta-tol must lie in [1e-12, 1)");
  if (c.oracle_bound < 1) throw std::invalid_argument("--oracle-bound must be positive");
  if (c.command == "zeta" || c.command == "index") return;

  const HermitianForm f = parse_form(k, c.form);
  if (f.classify() != FormKind::indefinite)
    throw std::invalid_argument("--form " + c.form + " is not indefinite (discriminant " +
                                std::to_string(f.discriminant()) + ")");
  if (kind != GroupKind::full && f.a() == 0)
    throw std::invalid_argument("congruence groups need a form with a != 0; apply a change of variables first");
  if (c.generator_height < 1) throw std::invalid_argument("--generator-height must be positive");
  if (c.word_length < 1) throw std::invalid_argument("--word-length must be positive");
  if (!(c.ball_radius > 0)) throw std::invalid_argument("--ball-radius must be positive");
  if (c.max_elements < 1) throw std::invalid_argument("--max-elements must be positive");
  if (!(c.tol > 0 && c.tol < 1e-3)) throw std::invalid_argument("--tol must lie in (0, 1e-3)");
  if (!(c.tie_eps >= c.tol && c.tie_eps < 1e-2)) throw std::invalid_argument("--tie-eps must lie in [tol, 1e-2)");
  if (c.command == "count" || c.command == "compare") {
    if (c.s_grid.empty()) throw std::invalid_argument("--s-grid must not be empty");
    if (c.s_grid.front() < 1 || !std::is_sorted(c.s_grid.begin(), c.s_grid.end()) ||
        std::adjacent_find(c.s_grid.begin(), c.s_grid.end()) != c.s_grid.end())
      throw std::invalid_argument("--s-grid must be positive and strictly ascending");
    if (c.command == "compare" && c.s_grid.size() < 3)
      throw std::invalid_argument("compare needs at least 3 grid points in --s-grid");
    if (c.height_bound < 0) throw std::invalid_argument("--height must be non-negative");
    if (c.height_factor < 1) throw std::invalid_argument("--height-factor must be positive");
    if (c.threads < 1) throw std::invalid_argument("--threads must be positive");
  }
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  try {
    const std::string preload = preload_config_path(args);
    if (!preload.empty()) {
      std::ifstream in(preload);
      if (!in) throw std::invalid_argument("cannot read config file " + preload);
      cfg = config_from_json(json::parse(in));
    }
  } catch (const json::exception& e) {
    err << "hermrep: config error: " << e.what() << "\n";
    return config_error;
  } catch (const std::invalid_argument& e) {
    err << "hermrep: config error: " << e.what() << "\n";
    return config_error;
  }

  CLI::App app{"Orbit counts of proper representations by indefinite binary Hermitian forms", "hermrep"};
  app.require_subcommand(1);
  std::string config_path;
  const std::vector<std::pair<std::string, std::string>> subs{
      {"predict", "Predicted growth constant with all intermediate quantities"},
      {"count", "Orbit counts psi(s) over a grid of s"},
      {"compare", "Counts, prediction and gap summary"},
      {"automorphs", "Automorph search with verification log"},
      {"domain", "Dirichlet polygon of the automorph group and its area"},
      {"zeta", "zeta_K(2) with a proven error bound"},
      {"index", "Congruence subgroup index: enumerated and closed forms"}};
  for (const auto& [name, help] : subs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config or report; explicit flags override it");
    if (name == "zeta") {
      sub->add_option("--DK", cfg.disc, "Fundamental discriminant of K (negative)");
      sub->add_option("--tol", cfg.zeta_tol, "Tail bound target (>= 1e-12)");
      sub->add_option("--out", cfg.out, "Output prefix; writes <prefix>.json");
    } else if (name == "index") {
      sub->add_option("--DK", cfg.disc, "Fundamental discriminant of K (negative)");
      sub->add_option("--ideal", cfg.ideal, "Ideal generators separated by ';', e.g. 1+i or 3;1+w");
      sub->add_option("--kind", cfg.kind, "level (Gamma(a)) or hecke (Gamma_0(a))");
      sub->add_option("--oracle-bound", cfg.oracle_bound, "Largest ideal norm the oracle enumerates");
      sub->add_option("--out", cfg.out, "Output prefix; writes <prefix>.json");
    } else {
      add_common(sub, cfg, name == "count" || name == "compare");
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : config_error;
  }
  for (const CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    validate(cfg);
    const Field k(cfg.disc);
    if (cfg.command != "zeta" && cfg.command != "index") cfg.form = form_key(parse_form(k, cfg.form));
  } catch (const std::invalid_argument& e) {
    err << "hermrep: config error: " << e.what() << "\n";
    return config_error;
  } catch (const OracleBoundExceeded& e) {
    err << "hermrep: oracle bound exceeded: " << e.what() << "\n";
    return oracle_bound_error;
  }

  try {
    if (cfg.command == "predict") return cmd_predict(cfg, out, err);
    if (cfg.command == "count") return cmd_count(cfg, false, out, err);
    if (cfg.command == "compare") return cmd_count(cfg, true, out, err);
    if (cfg.command == "automorphs") return cmd_automorphs(cfg, out, err);
    if (cfg.command == "domain") return cmd_domain(cfg, out, err);
    if (cfg.command == "zeta") return cmd_zeta(cfg, out);
    return cmd_index(cfg, out);
  } catch (const OracleBoundExceeded& e) {
    err << "hermrep: oracle bound exceeded: " << e.what() << "\n";
    return oracle_bound_error;
  } catch (const GeometryError& e) {
    err << "hermrep: geometry error: " << e.what()
        << " (try a larger --generator-height or a different --seed)\n";
    return geometry_error;
  } catch (const std::invalid_argument& e) {
    err << "hermrep: config error: " << e.what() << "\n";
    return config_error;
  } catch (const std::exception& e) {
    err << "hermrep: error: " << e.what() << "\n";
    return internal_error;
  }
}

int run_command(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_command(args, std::cout, std::cerr);
}

}  // namespace hermrep::cli
