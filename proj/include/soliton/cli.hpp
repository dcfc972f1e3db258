#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace soliton::cli {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputEnv = "SOLITON_LAB_OUT";

struct RunConfig {
  std::string subcommand;
  int n = 1;
  double t_min = -10.0;
  double t_max = 10.0;
  int samples = 2001;
  double tolerance = 1e-12;
  std::filesystem::path output_dir;
  bool svg = false;

  // geometry
  double t_asymptotic = 1e4;

  // orbits
  std::vector<double> levels;
  double step = 1e-3;
  int random_seeds = 0;
  unsigned seed = 20240601;
  double perturbation = 0.0;

  // flow
  double dt = 1e-2;
  double d_tau = 1e-4;
  double tau_end = 1.0;
  int dump_every = 0;
  std::string initial = "soliton";
  std::string right_boundary = "travelling";
  double bump_amplitude = 0.01;

  // embed
  std::string tag = "both";
  int embed_samples = 1000;

  // verify-all
  std::vector<std::string> only;
  std::vector<std::string> tolerance_overrides;  // "C3=1e-14"

  /// Throws ValidationError naming the first bad field.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Reads a flat key=value file (# comments, blank lines) and returns the
/// equivalent "--key value" tokens.
std::vector<std::string> config_file_tokens(const std::filesystem::path& path);

/// Exit codes: 0 success, 1 validation or usage error (or a failing
/// verify-all), 2 numeric fault.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace soliton::cli
