#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nonspread/analytics.hpp"
#include "nonspread/verify.hpp"

namespace nsp::cli {

enum class Command { Density, Asymmetry, Variance, Verify, Lifetime, Collider, Decompose };
enum class UnitSystem { Compton, SiMixed };
enum class VarianceCoord { Z, U };

const char* to_string(Command c);

// Fully resolved and validated job description. Every field has been checked
// by parse_config before run() sees it.
struct RunConfig {
  Command command = Command::Lifetime;

  std::vector<double> alphas{30.0};
  std::vector<double> abars{0.005};
  double Omega = 0.0;
  Conventions conventions;
  FieldProfile field;
  QuadratureSpec quadrature;

  // density
  StateKind state = StateKind::Free;
  Frame frame = Frame::Lab;
  Window window{0.0, 80.0, 0.0, 60.0};
  int n1 = 200;
  int n2 = 200;
  Normalization normalization = Normalization::Raw;
  double band = 0.5;
  double min_coverage = 0.05;

  // asymmetry and variance
  std::vector<double> times_compton;
  std::vector<double> times_fs;
  TimeBridge bridge = TimeBridge::Reduced;
  VarianceCoord coord = VarianceCoord::Z;
  std::vector<double> etas;

  GateOptions gates;

  // collider
  double omega_over_m = 0.0;
  double a0 = 0.0;
  std::optional<double> gamma0;
  double leak_alpha = 30.0;
  double leak_abar = 1e-2;

  SpacetimePoint point;

  std::string output_path;
  std::uint64_t seed = 0;
  int threads = 0;
  UnitSystem units = UnitSystem::Compton;

  // The resolved configuration, echoed into every output's metadata.
  nlohmann::ordered_json echo;
};

struct ParseOutcome {
  std::optional<RunConfig> config;
  int exit_code = 0;  // meaningful when config is empty: 0 after --help, 2 on usage errors
};

// Flags given on the command line override keys from --config FILE, a flat
// key = value file whose keys are the long flag names without dashes.
ParseOutcome parse_config(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Returns 0 on success, 1 on a numerical failure, 2 on a usage error.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Writes `contents` to a sibling temporary file and renames it over `path`,
// so readers never observe a partially written output.
void write_atomic(const std::string& path, const std::string& contents);

// Shortest round-trip decimal form; identical inputs give identical text.
std::string format_double(double v);

// Metadata block shared by every output: conventions, units and the config echo.
nlohmann::ordered_json metadata(const RunConfig& cfg);

}  // namespace nsp::cli
