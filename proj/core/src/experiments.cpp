#include "spde/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <numeric>
#include <string>
#include <thread>

#include "spde/errors.hpp"
#include "spde/noise.hpp"

namespace spde {

void validate(const StudyConfig& config) {
  validate(config.model);
  if (config.levels.empty()) throw InvalidArgument("study: no levels requested");
  if (config.realizations < 1) throw InvalidArgument("study: realizations must be at least 1");
  if (config.workers < 1) throw InvalidArgument("study: workers must be at least 1");
  const SchemeLevel& ref = config.reference;
  if (ref.scheme != Scheme::exp_euler) throw InvalidArgument("study: the reference level must use exp-euler");
  if (ref.n_modes < 1 || ref.n_steps < 1) throw InvalidArgument("study: reference N and M must be at least 1");
  const Scheme scheme = config.levels.front().scheme;
  for (const SchemeLevel& level : config.levels) {
    if (level.scheme != scheme) throw InvalidArgument("study: all levels must use the same scheme");
    if (level.n_modes < 1 || level.n_steps < 1) throw InvalidArgument("study: level N and M must be at least 1");
    if (level.n_modes > ref.n_modes) {
      throw InvalidArgument("study: level N = " + std::to_string(level.n_modes) + " exceeds reference N = " +
                            std::to_string(ref.n_modes));
    }
    if (ref.n_steps % level.n_steps != 0) {
      throw InvalidArgument("study: reference M = " + std::to_string(ref.n_steps) +
                            " is not a multiple of level M = " + std::to_string(level.n_steps));
    }
  }
}

double effort_count(Scheme scheme, std::size_t n_modes, Dimension dim) {
  if (n_modes <= 1) return 0.0;
  const double n = static_cast<double>(n_modes);
  const bool cubic = scheme == Scheme::implicit_euler || dim == Dimension::two;
  return (cubic ? n * n * n : n * n) * std::log(n);
}

namespace {

std::vector<SchemeLevel> sorted_levels(std::vector<SchemeLevel> levels) {
  std::stable_sort(levels.begin(), levels.end(), [](const SchemeLevel& a, const SchemeLevel& b) {
    return a.n_modes != b.n_modes ? a.n_modes < b.n_modes : a.n_steps < b.n_steps;
  });
  return levels;
}

struct LevelOutcome {
  double squared_error = 0.0;
  bool diverged = false;
  std::size_t step = 0;
  std::string message;
};

struct RealizationOutcome {
  std::vector<LevelOutcome> levels;
  std::exception_ptr reference_failure;
};

RealizationOutcome run_realization(const StudyConfig& config, const std::vector<SchemeLevel>& levels,
                                   std::size_t realization) {
  RealizationOutcome outcome;
  outcome.levels.resize(levels.size());
  const ModelSpec& model = config.model;
  const NoiseStreamKey key{config.seed, realization};
  const IncrementBlock fine =
      sample_joint_increments(key, basis(model, config.reference.n_modes), config.reference.n_steps, model.horizon);

  Trajectory reference;
  try {
    reference = integrate(model, config.reference, fine, {});
  } catch (const DivergenceError&) {
    outcome.reference_failure = std::current_exception();
    return outcome;
  }
  const SpectralField& exact = reference.final_state();

  for (std::size_t l = 0; l < levels.size(); ++l) {
    const SchemeLevel& level = levels[l];
    const IncrementBlock modes = level.n_modes == fine.n_modes() ? fine : restrict_modes(fine, level.n_modes);
    const std::vector<double> lambdas = eigenvalues(model.kappa, level.n_modes, model.dimension);
    const IncrementBlock block = coarsen(modes, config.reference.n_steps / level.n_steps, lambdas);
    try {
      const Trajectory approx = integrate(model, level, block, {});
      const double d = h_distance(exact, approx.final_state());
      outcome.levels[l].squared_error = d * d;
    } catch (const DivergenceError& e) {
      outcome.levels[l] = {0.0, true, e.step(), e.what()};
    }
  }
  return outcome;
}

// Realizations are distributed dynamically over workers; results land in
// per-index slots so aggregation order never depends on scheduling.
std::vector<RealizationOutcome> run_all(const StudyConfig& config, const std::vector<SchemeLevel>& levels) {
  std::vector<RealizationOutcome> outcomes(config.realizations);
  std::vector<std::exception_ptr> errors(config.realizations);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t r = next++; r < config.realizations; r = next++) {
      try {
        outcomes[r] = run_realization(config, levels, r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const std::size_t n_workers = std::min(config.workers, config.realizations);
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return outcomes;
}

ErrorTable make_table(const StudyConfig& config, const std::vector<SchemeLevel>& levels) {
  ErrorTable table;
  table.scheme = levels.front().scheme;
  table.dimension = config.model.dimension;
  return table;
}

ErrorRow make_row(const SchemeLevel& level, Dimension dim) {
  ErrorRow row;
  row.n_modes = level.n_modes;
  row.n_steps = level.n_steps;
  row.rv_count = rv_count(level, dim);
  row.effort = effort_count(level.scheme, level.n_modes, dim);
  return row;
}

}  // namespace

ErrorTable run_convergence_study(const StudyConfig& config) {
  validate(config);
  if (!config.model.nonlinearity.globally_lipschitz) {
    throw InvalidArgument("model '" + config.model.name +
                          "' is not globally Lipschitz; strong RMS convergence is not expected. "
                          "Use run_pathwise_study with a single realization instead");
  }
  const std::vector<SchemeLevel> levels = sorted_levels(config.levels);
  const std::vector<RealizationOutcome> outcomes = run_all(config, levels);

  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    if (outcomes[r].reference_failure) {
      throw StudyError("reference trajectory diverged in realization " + std::to_string(r), r,
                       config.reference.n_modes, config.reference.n_steps);
    }
    for (std::size_t l = 0; l < levels.size(); ++l) {
      if (outcomes[r].levels[l].diverged) {
        throw StudyError("realization " + std::to_string(r) + ", level N=" + std::to_string(levels[l].n_modes) +
                             " M=" + std::to_string(levels[l].n_steps) + ": " + outcomes[r].levels[l].message,
                         r, levels[l].n_modes, levels[l].n_steps);
      }
    }
  }

  ErrorTable table = make_table(config, levels);
  const double count = static_cast<double>(outcomes.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    ErrorRow row = make_row(levels[l], config.model.dimension);
    double sum = 0.0;
    for (const auto& o : outcomes) sum += o.levels[l].squared_error;
    const double mean = sum / count;
    double ss = 0.0;
    for (const auto& o : outcomes) {
      const double d = o.levels[l].squared_error - mean;
      ss += d * d;
    }
    row.rms_error = std::sqrt(mean);
    if (outcomes.size() > 1 && mean > 0.0) {
      const double se_mean = std::sqrt(ss / (count - 1.0) / count);
      row.std_error = se_mean / (2.0 * row.rms_error);
    }
    table.rows.push_back(row);
  }
  return table;
}

ErrorTable run_pathwise_study(const StudyConfig& config) {
  validate(config);
  if (config.realizations != 1) throw InvalidArgument("pathwise study: exactly one realization is required");
  if (config.model.dimension != Dimension::two) throw InvalidArgument("pathwise study: requires a 2D model");
  const std::vector<SchemeLevel> levels = sorted_levels(config.levels);
  const RealizationOutcome outcome = run_realization(config, levels, 0);
  if (outcome.reference_failure) {
    throw StudyError("reference trajectory diverged", 0, config.reference.n_modes, config.reference.n_steps);
  }
  ErrorTable table = make_table(config, levels);
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const LevelOutcome& lo = outcome.levels[l];
    if (lo.diverged) {
      table.failures.push_back({levels[l].n_modes, levels[l].n_steps, lo.step, lo.message});
      continue;
    }
    ErrorRow row = make_row(levels[l], config.model.dimension);
    row.rms_error = std::sqrt(lo.squared_error);
    table.rows.push_back(row);
  }
  return table;
}

OrderFit fit_order(const ErrorTable& table, Abscissa abscissa) {
  std::vector<double> xs;
  std::vector<double> ys;
  OrderFit fit;
  for (const ErrorRow& row : table.rows) {
    const double x = abscissa == Abscissa::modes ? static_cast<double>(row.n_modes) : row.effort;
    if (!(row.rms_error > 0.0) || !(x > 0.0) || !std::isfinite(row.rms_error)) {
      ++fit.excluded_rows;
      continue;
    }
    xs.push_back(-std::log(x));
    ys.push_back(std::log(row.rms_error));
  }
  if (xs.size() < 2) throw InvalidArgument("fit_order: fewer than two rows with positive error");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit_order: abscissa values are all equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

std::optional<EfficiencyPoint> EfficiencyComparison::finest() const {
  if (points.empty()) return std::nullopt;
  return points.back();
}

std::optional<double> rv_count_to_reach(const ErrorTable& table, double level) {
  std::vector<ErrorRow> rows = table.rows;
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ErrorRow& a, const ErrorRow& b) { return a.rv_count < b.rv_count; });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].rms_error > level) continue;
    const double rv = static_cast<double>(rows[i].rv_count);
    if (i == 0 || rows[i].rms_error == level || !(rows[i].rms_error > 0.0)) return rv;
    // Segment from rows[i-1] (above level) to rows[i] (at or below), linear in log-log.
    const double e0 = std::log(rows[i - 1].rms_error);
    const double e1 = std::log(rows[i].rms_error);
    const double c0 = std::log(static_cast<double>(rows[i - 1].rv_count));
    const double c1 = std::log(rv);
    const double t = (std::log(level) - e0) / (e1 - e0);
    return std::exp(c0 + t * (c1 - c0));
  }
  return std::nullopt;
}

EfficiencyComparison compare_efficiency(const ErrorTable& exp_table, const ErrorTable& implicit_table) {
  EfficiencyComparison out;
  if (exp_table.rows.empty() || implicit_table.rows.empty()) return out;
  const auto range = [](const ErrorTable& t) {
    const auto [lo, hi] = std::minmax_element(t.rows.begin(), t.rows.end(), [](const ErrorRow& a, const ErrorRow& b) {
      return a.rms_error < b.rms_error;
    });
    return std::pair{lo->rms_error, hi->rms_error};
  };
  const auto [exp_lo, exp_hi] = range(exp_table);
  const auto [imp_lo, imp_hi] = range(implicit_table);
  out.overlap_low = std::max(exp_lo, imp_lo);
  out.overlap_high = std::min(exp_hi, imp_hi);
  if (out.overlap_low > out.overlap_high) return out;
  out.has_overlap = true;

  std::vector<double> levels;
  for (const ErrorTable* t : {&exp_table, &implicit_table}) {
    for (const ErrorRow& row : t->rows) {
      if (row.rms_error >= out.overlap_low && row.rms_error <= out.overlap_high) levels.push_back(row.rms_error);
    }
  }
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (double level : levels) {
    out.points.push_back({level, *rv_count_to_reach(exp_table, level), *rv_count_to_reach(implicit_table, level)});
  }
  return out;
}

std::vector<NoiseCheckRow> run_noise_check(const NoiseCheckConfig& config) {
  if (config.samples < 4) throw InvalidArgument("noise check: at least 4 samples are required");
  if (config.modes.empty()) throw InvalidArgument("noise check: no modes selected");
  if (!(config.step_h > 0.0)) throw InvalidArgument("noise check: step size must be positive");
  validate(config.model);

  const ModelSpec& model = config.model;
  const bool two_d = model.dimension == Dimension::two;
  const double n = static_cast<double>(config.samples);
  std::vector<NoiseCheckRow> rows;
  std::vector<double> unit_dw(config.samples);
  std::vector<double> unit_i(config.samples);

  for (std::size_t mode : config.modes) {
    if (mode < 1) throw InvalidArgument("noise check: modes are 1-based");
    NoiseCheckRow row;
    row.mode = mode;
    const double nn = static_cast<double>(mode);
    row.lambda = model.kappa * std::numbers::pi * std::numbers::pi * (two_d ? 2.0 * nn * nn : nn * nn);
    row.amplitude = model.noise_amplitude(mode, two_d ? mode : 0);
    const JointIncrementLaw law = joint_increment_law(row.lambda, config.step_h);
    const ModeIndex index = two_d ? ModeIndex{mode, mode} : ModeIndex{mode, 0};
    const double sqrt_h = std::sqrt(config.step_h);

    for (std::size_t s = 0; s < config.samples; ++s) {
      const auto [z0, z1] = standard_normal_pair({config.seed, s}, index, 0);
      unit_dw[s] = sqrt_h * z0;
      unit_i[s] = (law.covariance / sqrt_h) * z0 + law.conditional_std * z1;
    }

    const auto moments = [&](const std::vector<double>& v, double scale) {
      double mean = 0.0;
      for (double x : v) mean += scale * x;
      mean /= n;
      double ss = 0.0;
      for (double x : v) ss += (scale * x - mean) * (scale * x - mean);
      return std::pair{mean, ss / (n - 1.0)};
    };
    const auto z_variance = [&](double sample_var, double analytic_var) {
      if (analytic_var == 0.0) return sample_var == 0.0 ? 0.0 : HUGE_VAL;
      return (sample_var - analytic_var) / (analytic_var * std::sqrt(2.0 / (n - 1.0)));
    };

    const double b = row.amplitude;
    const auto [mi, var_i] = moments(unit_i, b);
    const auto [mw, var_w] = moments(unit_dw, b);
    row.analytic_std_convolution = std::abs(b) * std::sqrt(law.var_convolution);
    row.sample_std_convolution = std::sqrt(var_i);
    row.z_convolution = z_variance(var_i, b * b * law.var_convolution);
    row.analytic_std_brownian = std::abs(b) * std::sqrt(law.var_brownian);
    row.sample_std_brownian = std::sqrt(var_w);
    row.z_brownian = z_variance(var_w, b * b * law.var_brownian);

    const auto [mi1, vi1] = moments(unit_i, 1.0);
    const auto [mw1, vw1] = moments(unit_dw, 1.0);
    double cov = 0.0;
    for (std::size_t s = 0; s < config.samples; ++s) cov += (unit_i[s] - mi1) * (unit_dw[s] - mw1);
    cov /= (n - 1.0);
    row.analytic_correlation = law.correlation();
    row.sample_correlation = std::clamp(cov / std::sqrt(vi1 * vw1), -1.0, 1.0);
    row.z_correlation = (std::atanh(row.sample_correlation) - std::atanh(row.analytic_correlation)) * std::sqrt(n - 3.0);

    row.pass = std::abs(row.z_convolution) < config.z_threshold && std::abs(row.z_brownian) < config.z_threshold &&
               std::abs(row.z_correlation) < config.z_threshold;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace spde
