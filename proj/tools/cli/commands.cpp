#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <numeric>
#include <ostream>

#include "csv.hpp"
#include "spde/errors.hpp"
#include "svg.hpp"

namespace spde::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::size_t> kExpLadder = {4, 8, 16, 32};
const std::vector<std::size_t> kImplicitLadder = {2, 4, 8, 16};
const std::vector<std::size_t> kNoiseModes = {1, 16, 256};

fs::path prepare_out_dir(const CliConfig& config) {
  const fs::path dir(config.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + config.out + "'");
  return dir;
}

std::string fixed3(double v) { return format_fixed(v, 3); }

void print_table(std::ostream& out, const std::string& label, const ErrorTable& table) {
  out << label << " (" << to_string(table.scheme) << ")\n";
  out << "  N        M        rv_count     effort          rms_error        std_error\n";
  for (const ErrorRow& row : table.rows) {
    out << "  " << row.n_modes << '\t' << row.n_steps << '\t' << row.rv_count << '\t' << std::llround(row.effort)
        << '\t' << format_number(row.rms_error) << '\t' << format_number(row.std_error) << '\n';
  }
  for (const LevelFailure& f : table.failures) {
    out << "  N=" << f.n_modes << " M=" << f.n_steps << " diverged at step " << f.step << '\n';
  }
}

void print_fit(std::ostream& out, const ErrorTable& table) {
  try {
    const OrderFit by_modes = fit_order(table, Abscissa::modes);
    const OrderFit by_effort = fit_order(table, Abscissa::effort);
    out << "  fitted order vs N: " << fixed3(by_modes.slope) << ", vs effort: " << fixed3(by_effort.slope) << '\n';
  } catch (const InvalidArgument&) {
    out << "  fitted order: not enough rows with positive error\n";
  }
}

PlotSeries series_for(const ErrorTable& table) {
  PlotSeries s;
  s.label = std::string(to_string(table.scheme));
  for (const ErrorRow& row : table.rows) s.points.emplace_back(row.effort, row.rms_error);
  try {
    s.slope = fit_order(table, Abscissa::effort).slope;
  } catch (const InvalidArgument&) {
  }
  return s;
}

}  // namespace

std::vector<SchemeLevel> make_levels(const CliConfig& config, Scheme scheme, const std::vector<std::size_t>& modes) {
  if (!config.steps.empty() && config.steps.size() != 1 && config.steps.size() != modes.size()) {
    throw UsageError("--steps needs one value or one value per mode");
  }
  std::vector<SchemeLevel> levels;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i] < 1) throw UsageError("mode counts must be at least 1");
    SchemeLevel level = conventional_level(scheme, modes[i]);
    if (!config.steps.empty()) level.n_steps = config.steps.size() == 1 ? config.steps[0] : config.steps[i];
    if (level.n_steps < 1) throw UsageError("step counts must be at least 1");
    levels.push_back(level);
  }
  return levels;
}

SchemeLevel make_reference(const CliConfig& config, const std::vector<SchemeLevel>& levels,
                           std::size_t default_modes) {
  SchemeLevel ref;
  ref.scheme = Scheme::exp_euler;
  ref.n_modes = config.reference_modes.value_or(default_modes);
  if (ref.n_modes < 1) throw UsageError("--reference-modes must be at least 1");
  if (config.reference_steps) {
    ref.n_steps = *config.reference_steps;
  } else {
    bool implicit = false;
    for (const auto& l : levels) implicit = implicit || l.scheme == Scheme::implicit_euler;
    std::size_t m = implicit ? ref.n_modes * ref.n_modes : ref.n_modes;
    for (const auto& l : levels) m = std::lcm(m, l.n_steps);
    ref.n_steps = m;
  }
  return ref;
}

std::vector<std::size_t> snapshot_steps(const std::vector<double>& fractions, std::size_t n_steps) {
  std::vector<std::size_t> out;
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw UsageError("snapshot fractions must lie in [0, 1]");
    out.push_back(static_cast<std::size_t>(std::llround(f * static_cast<double>(n_steps))));
  }
  if (out.empty()) out.push_back(n_steps);
  return out;
}

std::string grid_csv(const SpectralField& field) {
  const std::size_t n = field.n_modes();
  const CollocationGrid grid = synthesize(field);
  const auto values = grid.values();
  const auto x = [n](std::size_t j) { return format_number(static_cast<double>(j) / static_cast<double>(n + 1)); };
  std::string out;
  if (field.dimension() == Dimension::one) {
    out = "x,value\n";
    for (std::size_t j = 0; j <= n + 1; ++j) {
      const double v = (j == 0 || j == n + 1) ? 0.0 : values[j - 1];
      out += x(j) + ',' + format_number(v) + '\n';
    }
  } else {
    out = "x1,x2,value\n";
    for (std::size_t j = 0; j <= n + 1; ++j) {
      for (std::size_t k = 0; k <= n + 1; ++k) {
        const bool boundary = j == 0 || k == 0 || j == n + 1 || k == n + 1;
        const double v = boundary ? 0.0 : values[(j - 1) * n + (k - 1)];
        out += x(j) + ',' + x(k) + ',' + format_number(v) + '\n';
      }
    }
  }
  return out;
}

int cmd_run(const CliConfig& config, std::ostream& out, std::ostream&) {
  const ModelSpec model = builtin_model(config.model);
  const Scheme scheme = parse_scheme(config.scheme);
  if (config.modes.size() > 1) throw UsageError("run takes a single --modes value");
  const std::size_t n = config.modes.empty() ? (model.dimension == Dimension::one ? 1000 : 64) : config.modes[0];
  const SchemeLevel level = make_levels(config, scheme, {n}).front();
  const std::vector<std::size_t> steps = snapshot_steps(config.snapshots, level.n_steps);

  const Trajectory trajectory = integrate(model, level, NoiseStreamKey{config.seed, 0}, steps);
  const fs::path dir = prepare_out_dir(config);

  std::string manifest = "key,value\n";
  manifest += "model," + model.name + '\n';
  manifest += "scheme," + std::string(to_string(scheme)) + '\n';
  manifest += "seed," + std::to_string(config.seed) + '\n';
  manifest += "realization,0\n";
  manifest += "n_modes," + std::to_string(level.n_modes) + '\n';
  manifest += "n_steps," + std::to_string(level.n_steps) + '\n';
  manifest += "rv_count," + std::to_string(trajectory.rv_count) + '\n';
  for (std::size_t k : steps) {
    const std::string file = "run_step_" + std::to_string(k) + ".csv";
    write_file(dir / file, grid_csv(trajectory.snapshots.at(k)));
    const double t = model.horizon * static_cast<double>(k) / static_cast<double>(level.n_steps);
    manifest += "snapshot," + file + '\n';
    manifest += "snapshot_time," + format_number(t) + '\n';
  }
  write_file(dir / "manifest.csv", manifest);
  out << "run: " << model.name << ' ' << to_string(scheme) << " N=" << level.n_modes << " M=" << level.n_steps
      << " rv_count=" << trajectory.rv_count << " snapshots=" << steps.size() << " -> " << dir.string() << '\n';
  return kExitOk;
}

int cmd_converge(const CliConfig& config, std::ostream& out, std::ostream& err) {
  StudyConfig study;
  study.model = builtin_model(config.model);
  const Scheme scheme = parse_scheme(config.scheme);
  const bool two_d = study.model.dimension == Dimension::two;
  const std::vector<std::size_t> modes =
      !config.modes.empty() ? config.modes : (scheme == Scheme::implicit_euler ? kImplicitLadder : kExpLadder);
  study.levels = make_levels(config, scheme, modes);
  const std::size_t default_ref = (two_d || scheme == Scheme::implicit_euler) ? 64 : 128;
  study.reference = make_reference(config, study.levels, default_ref);
  study.seed = config.seed;
  study.workers = config.workers;
  study.realizations = config.realizations;

  ErrorTable table;
  if (!study.model.nonlinearity.globally_lipschitz) {
    if (config.realizations != 1) {
      err << "note: " << study.model.name << " is not globally Lipschitz; running a single-path study\n";
    }
    study.realizations = 1;
    table = run_pathwise_study(study);
  } else {
    table = run_convergence_study(study);
  }

  const fs::path dir = prepare_out_dir(config);
  write_file(dir / "error_table.csv", error_table_csv(table));
  if (config.svg) {
    write_file(dir / "convergence.svg",
               loglog_svg(study.model.name + ": error vs effort", "effort (up to a constant)", "RMS error",
                          {series_for(table)}));
  }
  print_table(out, study.model.name, table);
  print_fit(out, table);
  for (const LevelFailure& f : table.failures) err << "level N=" << f.n_modes << ": " << f.message << '\n';
  return kExitOk;
}

int cmd_compare(const CliConfig& config, std::ostream& out, std::ostream&) {
  const ModelSpec model = builtin_model(config.model);
  if (model.dimension != Dimension::one || !model.nonlinearity.globally_lipschitz) {
    throw UsageError("compare needs a 1D globally Lipschitz model");
  }
  const std::vector<SchemeLevel> exp_levels =
      make_levels(config, Scheme::exp_euler, config.modes.empty() ? kExpLadder : config.modes);
  CliConfig implicit_config = config;
  implicit_config.steps.clear();
  const std::vector<SchemeLevel> implicit_levels = make_levels(
      implicit_config, Scheme::implicit_euler, config.implicit_modes.empty() ? kImplicitLadder : config.implicit_modes);

  std::vector<SchemeLevel> all = exp_levels;
  all.insert(all.end(), implicit_levels.begin(), implicit_levels.end());
  const SchemeLevel reference = make_reference(config, all, 128);

  StudyConfig study;
  study.model = model;
  study.reference = reference;
  study.seed = config.seed;
  study.workers = config.workers;
  study.realizations = config.realizations;

  study.levels = exp_levels;
  const ErrorTable exp_table = run_convergence_study(study);
  study.levels = implicit_levels;
  const ErrorTable implicit_table = run_convergence_study(study);
  const EfficiencyComparison comparison = compare_efficiency(exp_table, implicit_table);

  const fs::path dir = prepare_out_dir(config);
  write_file(dir / "error_table_exp-euler.csv", error_table_csv(exp_table));
  write_file(dir / "error_table_implicit-euler.csv", error_table_csv(implicit_table));
  write_file(dir / "comparison.csv", comparison_csv(comparison));
  if (config.svg) {
    write_file(dir / "comparison.svg", loglog_svg(model.name + ": error vs effort", "effort (up to a constant)",
                                                  "RMS error", {series_for(exp_table), series_for(implicit_table)}));
  }

  print_table(out, model.name, exp_table);
  print_fit(out, exp_table);
  print_table(out, model.name, implicit_table);
  print_fit(out, implicit_table);
  if (!comparison.has_overlap) {
    out << "no comparable error levels: the two error ranges do not overlap\n";
  } else {
    out << "standard normals needed per error level (exp-euler vs implicit-euler):\n";
    for (const EfficiencyPoint& p : comparison.points) {
      out << "  eps=" << format_number(p.error_level) << "  " << format_fixed(p.exp_rv_count, 1) << " vs "
          << format_fixed(p.implicit_rv_count, 1) << "  ratio " << fixed3(p.ratio()) << '\n';
    }
  }
  return kExitOk;
}

int cmd_noise_check(const CliConfig& config, std::ostream& out, std::ostream& err) {
  NoiseCheckConfig check;
  check.model = builtin_model(config.model);
  check.modes = config.modes.empty() ? kNoiseModes : config.modes;
  check.samples = config.samples;
  if (config.steps.size() > 1) throw UsageError("noise-check takes a single --steps value");
  const std::size_t m = config.steps.empty() ? 64 : config.steps[0];
  if (m < 1) throw UsageError("--steps must be at least 1");
  check.step_h = check.model.horizon / static_cast<double>(m);
  check.seed = config.seed;

  const std::vector<NoiseCheckRow> rows = run_noise_check(check);
  const fs::path dir = prepare_out_dir(config);
  write_file(dir / "noise_check.csv", noise_check_csv(rows));

  std::string failing;
  for (const NoiseCheckRow& r : rows) {
    out << "mode " << r.mode << ": std(I) " << format_number(r.sample_std_convolution) << " vs "
        << format_number(r.analytic_std_convolution) << " (z=" << fixed3(r.z_convolution) << "), corr "
        << format_number(r.sample_correlation) << " vs " << format_number(r.analytic_correlation)
        << " (z=" << fixed3(r.z_correlation) << ")" << (r.pass ? "" : "  FAIL") << '\n';
    if (!r.pass) failing += (failing.empty() ? "" : ",") + std::to_string(r.mode);
  }
  if (!failing.empty()) {
    err << "statistical validation failed for modes " << failing << '\n';
    return kExitStatistical;
  }
  return kExitOk;
}

int exit_code_for(std::exception_ptr error, std::ostream& err) {
  try {
    std::rethrow_exception(error);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const StudyError& e) {
    err << "study failed: " << e.what() << '\n';
    return kExitDivergence;
  }
}

int run_command(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.subcommand == "run") return cmd_run(config, out, err);
    if (config.subcommand == "converge") return cmd_converge(config, out, err);
    if (config.subcommand == "compare") return cmd_compare(config, out, err);
    if (config.subcommand == "noise-check") return cmd_noise_check(config, out, err);
    err << "unknown subcommand '" << config.subcommand << "'\n";
    return kExitUsage;
  } catch (...) {
    return exit_code_for(std::current_exception(), err);
  }
}

}  // namespace spde::cli
