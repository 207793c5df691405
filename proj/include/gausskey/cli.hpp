#pragma once

// Command-line front end: configuration, subcommands and CSV/JSON output.
//
// Exit codes: 0 success, 1 configuration or I/O error, 2 domain or
// physicality error.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gausskey/errors.hpp"
#include "gausskey/protocol.hpp"

namespace gausskey::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitDomain = 2;

/// Malformed configuration: bad syntax, unknown key, unparsable value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Command { rate, scan, boundary, critical, converge };
enum class Format { csv, json };

struct RunConfig {
  Command command = Command::rate;
  Protocol protocol = Protocol::no_switching;
  double tau = 0.5;
  double omega = 1.0;
  double g = 0.0;
  double g_prime = 0.0;
  std::optional<double> mu;  ///< empty means asymptotic
  int grid_resolution = 101;
  std::string output_path;   ///< empty means standard output
  Format format = Format::csv;
  bool clamp_nonnegative = false;
  std::optional<double> gradient_step;
  std::optional<double> hessian_step;
  std::vector<double> mu_sweep{1e2, 1e3, 1e4, 1e5, 1e6};
};

/// Applies one key=value setting. Keys: protocol, tau, omega, g, gprime, mu,
/// grid_resolution, output, format, clamp_nonnegative, gradient_step,
/// hessian_step, mu_sweep. Throws ConfigError naming `where` on failure.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value,
                   const std::string& where);

/// Reads a flat key=value file ('#' starts a comment) into `config`.
void apply_config_text(RunConfig& config, std::string_view text, const std::string& source);
void apply_config_file(RunConfig& config, const std::string& path);

/// One row of a scan: a grid point or boundary sample and its rate.
struct ScanRow {
  double g = 0.0;
  double g_prime = 0.0;
  double rate = 0.0;
  bool physical = true;
  bool on_boundary = false;
};

/// Grid points, boundary samples and the origin, sorted by (g, g').
std::vector<ScanRow> scan_rows(const RunConfig& config);

std::string render(const RunConfig& config);  ///< runs the command, returns the output text

/// Parses arguments (without the program name), runs the command and writes
/// the result to `out` or to the configured output file. Diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gausskey::cli
