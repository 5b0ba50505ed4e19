#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hermrep/cli.hpp"

using namespace hermrep;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("hermrep_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("ring element syntax") {
  const Field g(-4), e(-3);
  CHECK(cli::parse_quadint(g, "3+2*w") == QuadInt(g, 3, 2));
  CHECK(cli::parse_quadint(g, "1+i") == QuadInt(g, 3, 1));
  CHECK(cli::parse_quadint(g, "-w") == QuadInt(g, 0, -1));
  CHECK(cli::parse_quadint(g, " 2 - 3w ") == QuadInt(g, 2, -3));
  CHECK(cli::parse_quadint(e, "-7") == QuadInt(e, -7));
  CHECK_THROWS_AS(cli::parse_quadint(e, "1+i"), std::invalid_argument);
  for (const char* bad : {"", "3+", "x", "2**w", "1 2", "w2"}) CHECK_THROWS_AS(cli::parse_quadint(g, bad), std::invalid_argument);
}

TEST_CASE("form and ideal syntax") {
  const Field g(-4);
  const HermitianForm f = cli::parse_form(g, "1,0,0,-2");
  CHECK(f == HermitianForm::diagonal(g, 2));
  CHECK(cli::parse_form(g, "2,1+w,-3") == HermitianForm(2, QuadInt(g, 1, 1), -3));
  CHECK(cli::parse_form(g, "1,0,-2") == f);
  CHECK_THROWS_AS(cli::parse_form(g, "1,2"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_form(g, "1,a,0,2"), std::invalid_argument);
  CHECK(cli::parse_ideal(g, "1+i").norm() == 2);
  CHECK(cli::parse_ideal(g, "3;1+i").is_whole());
  CHECK_THROWS_AS(cli::parse_ideal(g, "0"), std::invalid_argument);
}

TEST_CASE("configuration validation") {
  cli::Config c;
  c.command = "count";
  CHECK_NOTHROW(cli::validate(c));
  c.form = "1,0,0,2";
  CHECK_THROWS_AS(cli::validate(c), std::invalid_argument);
  c.form = "1,0,0,-2";
  c.s_grid = {10, 5};
  CHECK_THROWS_AS(cli::validate(c), std::invalid_argument);
  c.s_grid = {5, 10};
  c.kind = "hecke";
  CHECK_THROWS_AS(cli::validate(c), std::invalid_argument);
  c.ideal = "1+i";
  CHECK_NOTHROW(cli::validate(c));
  c.disc = -12;
  CHECK_THROWS_AS(cli::validate(c), std::invalid_argument);
}

TEST_CASE("predict reports the constant and its inputs") {
  const Run r = run({"predict", "--DK", "-4", "--form", "1,0,0,-2"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["prediction"]["constant"]["value"].get<double>() == doctest::Approx(0.81881).epsilon(1e-5));
  CHECK(j["prediction"]["iota_f"] == 1);
  CHECK(j["prediction"]["covolume"]["value"].get<double>() == doctest::Approx(2 * std::numbers::pi));
  CHECK(j["prediction"]["covolume"]["closed_form"] == "2*pi");
  CHECK(j["prediction"]["gaussian_corollary"]["relative_difference"].get<double>() < 1e-12);
  CHECK(j["config"]["form"] == "1,0,0,-2");
}

TEST_CASE("index reports the enumerated and closed-form values") {
  const Run r = run({"index", "--DK", "-4", "--ideal", "1+i", "--kind", "level"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["oracle"] == 6);
  CHECK(j["classical"] == 6);
  CHECK(j["printed_formula"] == 12);
  CHECK(j["warning"] == true);
}

TEST_CASE("zeta subcommand") {
  const Run r = run({"zeta", "--DK", "-4", "--tol", "1e-10"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(1.5067030).epsilon(1e-7));
  CHECK(j["error_bound"].get<double>() <= 1e-10);
}

TEST_CASE("exit codes") {
  CHECK(run({"count", "--form", "1,0,0,2"}).code == cli::config_error);
  CHECK(run({"count", "--s-grid", "5,3"}).code == cli::config_error);
  CHECK(run({"predict", "--bogus"}).code == cli::config_error);
  CHECK(run({}).code == cli::config_error);
  CHECK(run({"zeta", "--tol", "1e-15"}).code == cli::config_error);
  CHECK(run({"index", "--ideal", "7", "--kind", "level", "--oracle-bound", "10"}).code == cli::oracle_bound_error);
  CHECK(run({"domain", "--form", "1,0,0,-5", "--generator-height", "20"}).code == cli::geometry_error);
  CHECK(run({"predict", "--help"}).code == cli::ok);
}

TEST_CASE("reports embed their config and re-run identically") {
  const auto dir = scratch_dir("roundtrip");
  const std::string prefix = (dir / "rep").string();
  const Run first = run({"compare", "--form", "1,0,-2", "--s-grid", "5,10,15", "--out", prefix});
  REQUIRE(first.code == 0);
  const std::string json1 = slurp(prefix + ".json"), csv1 = slurp(prefix + ".csv");
  CHECK(json1 == first.out);
  CHECK(csv1.rfind("# config ", 0) == 0);
  const Run again = run({"compare", "--config", prefix + ".json"});
  REQUIRE(again.code == 0);
  CHECK(again.out == json1);
  CHECK(slurp(prefix + ".csv") == csv1);
  const json j = json::parse(json1);
  CHECK(j["report"]["rows"].size() == 3);
  CHECK(j["summary"]["predicted"] == j["prediction"]["constant"]["value"]);
}

TEST_CASE("automorph cache") {
  const auto dir = scratch_dir("cache");
  const std::vector<std::string> args{"automorphs", "--form", "1,0,0,-2", "--generator-height", "30",
                                      "--cache-dir", dir.string()};
  const Run first = run(args);
  REQUIRE(first.code == 0);
  const auto file = dir / "automorphs_D4_a1_b0_0_c-2_h30.json";
  CHECK(std::filesystem::exists(file));
  const Run second = run(args);
  CHECK(second.out == first.out);
  std::ofstream(file) << "{\"search_height\": 30, \"generators\": [[[1,0],[1,0],[0,0],[1,0]]]}";
  const Run third = run(args);
  CHECK(third.code == 0);
  CHECK(third.err.find("ignoring cache file") != std::string::npos);
  CHECK(third.out == first.out);
  const json j = json::parse(first.out);
  for (const json& entry : j["verification"]) CHECK(entry["preserves_form"] == true);
}
