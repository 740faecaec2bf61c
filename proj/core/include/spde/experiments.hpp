#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spde/models.hpp"
#include "spde/schemes.hpp"

namespace spde {

/// A strong-error study. The reference is always exp-euler; every level is
/// driven by the reference's Wiener path (mode truncation + exact coarsening).
struct StudyConfig {
  ModelSpec model;
  std::vector<SchemeLevel> levels;
  SchemeLevel reference;
  std::size_t realizations = 40;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

/// Throws InvalidArgument unless levels share one scheme, the reference is
/// exp-euler with N_ref >= N and M_ref divisible by every M.
void validate(const StudyConfig& config);

struct ErrorRow {
  std::size_t n_modes = 0;
  std::size_t n_steps = 0;
  std::uint64_t rv_count = 0;
  double effort = 0.0;
  double rms_error = 0.0;
  double std_error = 0.0;
};

struct LevelFailure {
  std::size_t n_modes = 0;
  std::size_t n_steps = 0;
  std::size_t step = 0;
  std::string message;
};

struct ErrorTable {
  Scheme scheme = Scheme::exp_euler;
  Dimension dimension = Dimension::one;
  std::vector<ErrorRow> rows;           // sorted by N ascending
  std::vector<LevelFailure> failures;   // pathwise studies only
};

/// RMS of ||X_ref(T) - Y(T)||_H over realizations; std_error by the delta method.
/// Rejects non-globally-Lipschitz models (use run_pathwise_study).
ErrorTable run_convergence_study(const StudyConfig& config);

/// Single-realization version for 2D models; levels that diverge are reported
/// in ErrorTable::failures while the remaining levels are still computed.
ErrorTable run_pathwise_study(const StudyConfig& config);

/// exp-euler 1D: N^2 ln N; implicit-euler 1D and exp-euler 2D: N^3 ln N.
double effort_count(Scheme scheme, std::size_t n_modes, Dimension dim);

enum class Abscissa { modes, effort };

struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t excluded_rows = 0;
};

/// Least squares of ln(rms_error) on -ln(abscissa); slope is the decay rate.
OrderFit fit_order(const ErrorTable& table, Abscissa abscissa);

struct EfficiencyPoint {
  double error_level = 0.0;
  double exp_rv_count = 0.0;
  double implicit_rv_count = 0.0;

  double ratio() const { return implicit_rv_count / exp_rv_count; }
};

/// Standard normals each scheme needs to reach an error level, read off its
/// error-versus-rv_count curve (rows ordered by rv_count, joined by straight
/// segments in log-log space, first crossing wins). Evaluated at every table
/// error inside the overlap [max(min errors), min(max errors)].
struct EfficiencyComparison {
  bool has_overlap = false;
  double overlap_low = 0.0;
  double overlap_high = 0.0;
  std::vector<EfficiencyPoint> points;  // ordered by decreasing error level

  /// Point at the smallest common error level; nullopt without overlap.
  std::optional<EfficiencyPoint> finest() const;
};

/// rv_count needed to reach error <= level along the table's curve; nullopt if never reached.
std::optional<double> rv_count_to_reach(const ErrorTable& table, double level);

EfficiencyComparison compare_efficiency(const ErrorTable& exp_table, const ErrorTable& implicit_table);

struct NoiseCheckConfig {
  ModelSpec model;
  /// 1D: mode n. 2D: diagonal mode (n, n).
  std::vector<std::size_t> modes;
  std::size_t samples = 100000;
  double step_h = 1.0 / 64.0;
  std::uint64_t seed = 0;
  double z_threshold = 4.0;
};

struct NoiseCheckRow {
  std::size_t mode = 0;
  double lambda = 0.0;
  double amplitude = 0.0;
  double analytic_std_convolution = 0.0;
  double sample_std_convolution = 0.0;
  double z_convolution = 0.0;
  double analytic_std_brownian = 0.0;
  double sample_std_brownian = 0.0;
  double z_brownian = 0.0;
  double analytic_correlation = 0.0;
  double sample_correlation = 0.0;
  double z_correlation = 0.0;
  bool pass = true;
};

/// Compares sample moments of b*I and b*dW with their closed forms. Sample s
/// is step 0 of realization s. Std z-scores use the normal-theory standard
/// error of the sample variance; the correlation z-score uses Fisher's transform
/// on the unit-amplitude increments.
std::vector<NoiseCheckRow> run_noise_check(const NoiseCheckConfig& config);

}  // namespace spde
