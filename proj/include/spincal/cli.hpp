#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spincal/integrator.hpp"
#include "spincal/models.hpp"

namespace spincal::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kWallCollision = 2,
  kVerifyFailed = 3,
  kNumericalFailure = 4,
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SpinSource { Spinless, Orbit, RandomSpin, Free };

struct RunConfig {
  std::string name = "run";
  SpaceSpec space;
  SpinSource source = SpinSource::Free;
  std::optional<SpinlessModel> model;
  OrbitSpec orbit;
  double spin_scale = 1.0;
  std::uint64_t seed = 1;
  Vec q;
  Vec p;
  double t_end = 1.0;
  double tol = 1e-10;
  double sample_dt = 0.0;
  std::string method = "direct";
  Gauge gauge = Gauge::Thick;
  std::vector<InvariantSpec> monitors;
  std::vector<double> spectrum_x{0.0, 0.5, 1.0};
  std::string trajectory_path;
  std::string report_path;
  std::string spectrum_path;
  std::string spectrum_report_path;
  /// Canonical JSON text of the entry, used for the config hash.
  std::string canonical;
};

/// Parses one run object; unknown keys and inconsistent fields throw ConfigError.
RunConfig parse_run(const nlohmann::json& obj, std::size_t index = 0, bool many = false);
/// Either a single run object or {"runs": [...]}.
std::vector<RunConfig> parse_runs(const nlohmann::json& doc);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Builds the initial phase point of a run (ConfigError for invalid data).
PhasePoint initial_point(const RunConfig& cfg, const SymmetricSpace& space);

struct VerifyConfig {
  std::vector<SpaceSpec> spaces;
  struct BcCase {
    int n;
    double kappa;
    double x;
  };
  std::vector<BcCase> bc_cases;
  int samples = 20;
  std::uint64_t seed = 1;
  std::string canonical;
};

VerifyConfig parse_verify(const nlohmann::json& doc);
/// Runs the invariant suite; the "pass" field of the result is the verdict.
nlohmann::json run_verify(const VerifyConfig& cfg);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);
/// %.17g
std::string format_double(double v);
/// Writes to a temporary sibling file, then renames over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string trajectory_csv(const SymmetricSpace& space, const Trajectory& traj);
std::string spectrum_csv(const SymmetricSpace& space, const Trajectory& traj,
                         const std::vector<double>& xs);

/// Entry point of the command-line tool.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spincal::cli
