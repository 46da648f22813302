#pragma once

// `hesscap <command> [flags]`: cap, verify <id>, sweep.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hesscap/capacity_lab.hpp"

namespace hesscap {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "HESSCAP_OUTPUT_DIR";

/// Verification ids accepted by `verify`.
const std::vector<std::string>& verify_ids();

/// Parameters from flags or a JSON config file. Unset fields take
/// command-specific defaults.
struct RunConfig {
  std::string command;
  std::string id;
  std::optional<int> n, k, m, profiles, t_points, points;
  std::optional<double> r, R, q, alpha, alpha_scale, beta, slack, r_min, r_max;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> curve;
  std::optional<std::string> out_dir;

  /// Keys: n k m profiles t_points points r R q alpha alpha_scale beta slack
  /// r_min r_max seed curve out. Unknown keys are a usage error.
  static RunConfig from_json(const nlohmann::json& j);
  /// Fields set in `flags` replace those of *this.
  void override_with(const RunConfig& flags);
};

/// Usage error: bad flags, unknown ids, empty ranges.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommandResult {
  VerificationReport report;
  /// Resolved parameters, echoed into the JSON report.
  nlohmann::json params;
  /// Extra files (name, content) written next to the report.
  std::vector<std::pair<std::string, std::string>> files;
  /// Human-readable summary lines for stdout.
  std::vector<std::string> summary;
};

CommandResult run_cap(const RunConfig& cfg);
CommandResult run_verify(const RunConfig& cfg);
CommandResult run_sweep(const RunConfig& cfg);

/// --out, else $HESSCAP_OUTPUT_DIR, else ./hesscap-out.
std::filesystem::path output_dir(const RunConfig& cfg);

/// Writes `<stem>.json` and `<stem>.csv` (plus result.files) into `dir`.
std::vector<std::filesystem::path> write_result(const CommandResult& result, const std::string& stem,
                                                const std::filesystem::path& dir);

/// Entry point. Exit code: 0 iff the report passes; 1 when it fails; 2 for
/// usage and parameter errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hesscap
