#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hullforge/io.hpp"

namespace hullforge {

inline constexpr const char* kDefaultSymbol = "1 - 4*z^2 + 4*w^2 - z^2*w^2";
inline constexpr const char* kReportSchema = "hullforge/1";

enum class Command { verify, jimbo, trace_variety, certify, disc_search };
std::string to_string(Command c);
Command command_from_string(const std::string& name);

// Exit codes of every command.
enum ExitCode : int {
  kExitPass = 0,
  kExitStageFailure = 1,
  kExitDegenerateSymbol = 2,
  kExitFactorization = 3,
  kExitConfig = 4,
};

struct RunConfig {
  Command command = Command::verify;
  std::string symbol = kDefaultSymbol;
  std::vector<std::string> factors;  // empty: the known factorization of the default symbol, else trivial
  int grid_n = 512;
  int degree = 8;
  int K = 8;
  int restarts = 4;
  std::uint64_t seed = 1;
  int threads = 0;
  int max_winding = 3;
  int panel_size = 8;
  int chart_resolution = 64;
  std::map<std::string, double> tolerances;  // overrides of default_tolerances()
  std::filesystem::path output_dir = "hullforge-out";

  std::string point;                 // certify
  std::pair<int, int> winding{1, 0};  // disc-search
  std::string height = "re_p";        // disc-search
};

/// Acceptance thresholds of every stage, keyed by name.
std::map<std::string, double> default_tolerances();

/// Throws ConfigError naming the offending field.
void validate(const RunConfig& cfg);

/// Factor list used for a symbol: the configured one, the known factorization
/// of the default symbol, or the single factor Delta itself.
std::vector<LaurentPoly2> factor_list(const RunConfig& cfg, const LaurentPoly2& p, const LaurentPoly2& delta);

/// Points off T^ = T u G_p(Z): torus points with the height shifted by +-0.5
/// (even indices) and interior points whose w is far from both roots of
/// w^2 = r(z) (odd indices). Deterministic in the seed.
std::vector<SpacePoint> outside_panel(const LaurentPoly2& p, const Rational& r, int count, std::uint64_t seed);

/// Lifted chart samples of G_p(Z), evenly strided through the interior mesh.
std::vector<SpacePoint> annulus_points(const LaurentPoly2& p, const VarietyChart& chart, int count);

struct StageResult {
  std::string name;
  bool passed = false;
  Json details;
};

struct VerifyResult {
  int exit_code = kExitPass;
  std::string failed_stage;  // first failing stage, empty on success
  std::vector<StageResult> stages;
  Json report;
  std::optional<HullReport> hull;
  std::optional<VarietyChart> chart;
  std::vector<ClassResult> classes;
};

/// Runs laurent -> jimbo -> variety -> geometry -> hullcert -> discsearch and
/// stops at the first failing stage. Writes nothing.
VerifyResult run_verify(const RunConfig& cfg);

/// Validates cfg, runs its command, writes report.json and CSVs under
/// cfg.output_dir, and logs a short summary. Errors are mapped to exit codes
/// and reported on err.
int run_command(const RunConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace hullforge
