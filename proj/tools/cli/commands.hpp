#pragma once

#include <cstddef>
#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "spde/experiments.hpp"

namespace spde::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitDivergence = 3,
  kExitStatistical = 4,
};

/// Levels for a ladder of N values; M from --steps or the scheme convention.
std::vector<SchemeLevel> make_levels(const CliConfig& config, Scheme scheme, const std::vector<std::size_t>& modes);

/// Reference level: --reference-modes/--reference-steps or defaults. The default
/// M is lcm(N_ref, or N_ref^2 when any level is implicit, and every level's M).
SchemeLevel make_reference(const CliConfig& config, const std::vector<SchemeLevel>& levels,
                           std::size_t default_modes);

/// Step index nearest to fraction * M for each fraction in [0, 1].
std::vector<std::size_t> snapshot_steps(const std::vector<double>& fractions, std::size_t n_steps);

/// Grid values including the Dirichlet boundary: "x,value" (1D) or "x1,x2,value" (2D).
std::string grid_csv(const SpectralField& field);

int cmd_run(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_converge(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_noise_check(const CliConfig& config, std::ostream& out, std::ostream& err);

/// Prints the error and returns its exit code; rethrows anything unrecognised.
int exit_code_for(std::exception_ptr error, std::ostream& err);

/// Dispatches on config.subcommand and maps exceptions to exit codes.
int run_command(const CliConfig& config, std::ostream& out, std::ostream& err);

}  // namespace spde::cli
