#pragma once

// Command-line surface: configuration, parsing of forms and ideals,
// generator cache and report emission. The tools/ binary is a thin wrapper
// around run_command.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hermrep/ring.hpp"
#include "hermrep/forms.hpp"

namespace hermrep::cli {

enum ExitCode : int { ok = 0, internal_error = 1, config_error = 2, oracle_bound_error = 3, geometry_error = 4 };

struct Config {
  std::string command;
  int64_t disc = -4;
  std::string form = "1,0,0,-2";  // a,bx,by,c after resolution
  std::string kind = "full";      // full | level | hecke
  std::string ideal;              // generators separated by ';'
  std::vector<int64_t> s_grid{25, 50, 100, 200};
  int64_t height_bound = 0;       // 0 means height_factor * max(s_grid)
  int64_t height_factor = 4;
  int64_t generator_height = 200;
  int word_length = 8;
  double ball_radius = 12.0;
  int64_t max_elements = 20000;
  double tol = 1e-9;
  double tie_eps = 1e-7;
  double zeta_tol = 1e-12;
  uint64_t seed = 20240601;
  bool include_null = false;
  bool check_stability = true;
  int threads = 1;
  int64_t oracle_bound = kDefaultOracleBound;
  std::string out;                // output prefix; empty writes nothing to disk
  std::string cache_dir;
};

/// Throws std::invalid_argument with an actionable message.
void validate(const Config& c);

/// Element syntax: sums of integer multiples of w (the basis element
/// (D + sqrt(D))/2) and, over Q(i), of i; e.g. "3+2*w", "1-i", "-w".
QuadInt parse_quadint(const Field& k, const std::string& text);

/// "a,bx,by,c" (basis coordinates of b) or "a,<element>,c".
HermitianForm parse_form(const Field& k, const std::string& text);

/// Generators separated by ';', e.g. "1+i" or "3;1+w".
QuadIdeal parse_ideal(const Field& k, const std::string& text);

/// Runs one subcommand; args excludes the program name. Reports go to out,
/// messages to err.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_command(int argc, char** argv);

}  // namespace hermrep::cli
