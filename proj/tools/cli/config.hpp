#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spde::cli {

/// Bad flags or flag values; maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File read/write failure; maps to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  std::string subcommand;
  std::string model = "reaction-diffusion-1d";
  std::string scheme = "exp-euler";
  std::vector<std::size_t> modes;           // empty: subcommand default
  std::vector<std::size_t> steps;           // empty: scheme convention; one value or one per mode
  std::vector<std::size_t> implicit_modes;  // compare only; empty: default ladder
  std::size_t realizations = 40;
  std::uint64_t seed = 1;
  std::optional<std::size_t> reference_modes;
  std::optional<std::size_t> reference_steps;
  std::vector<double> snapshots;  // fractions of T; empty: final time only
  std::string out = ".";
  bool svg = false;
  std::size_t workers = 1;
  std::size_t samples = 100000;

  friend bool operator==(const CliConfig&, const CliConfig&) = default;
};

/// Flags with an optional --config key=value file; flags override file values.
/// Returns nullopt when --help was requested (help text already printed).
std::optional<CliConfig> parse_cli(int argc, const char* const* argv);

/// key=value lines accepted by --config; parse of the rendered text reproduces the config.
std::string render(const CliConfig& config);

/// Applies key=value lines to config. Blank lines and lines starting with '#' are skipped.
void apply_config_text(CliConfig& config, const std::string& text, const std::vector<std::string>& skip_keys = {});

}  // namespace spde::cli
