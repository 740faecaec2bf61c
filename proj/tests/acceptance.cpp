// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "cli/csv.hpp"
#include "oracles.hpp"
#include "spde/errors.hpp"
#include "spde/experiments.hpp"
#include "spde/noise.hpp"

using namespace spde;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;
  std::function<Outcome()> check;
};

std::string fmt(double v) { return cli::format_number(v); }

// Study outputs shared between criteria 5, 6, 7 and 10.
struct Outputs {
  ErrorTable exp_table;
  ErrorTable implicit_table;
  ErrorTable pathwise_table;
  std::string noise_csv;
};
Outputs outputs;

constexpr std::uint64_t kSeed = 1;

StudyConfig exp_study(std::size_t workers) {
  StudyConfig config;
  config.model = builtin_model("reaction-diffusion-1d");
  for (std::size_t n : {4U, 8U, 16U, 32U}) config.levels.push_back(conventional_level(Scheme::exp_euler, n));
  config.reference = {128, 128, Scheme::exp_euler};
  config.realizations = 40;
  config.seed = kSeed;
  config.workers = workers;
  return config;
}

StudyConfig implicit_study(std::size_t workers) {
  StudyConfig config = exp_study(workers);
  config.levels.clear();
  for (std::size_t n : {2U, 4U, 8U, 16U}) config.levels.push_back(conventional_level(Scheme::implicit_euler, n));
  config.reference = {64, 4096, Scheme::exp_euler};
  return config;
}

StudyConfig pathwise_study(std::size_t workers) {
  StudyConfig config;
  config.model = builtin_model("allen-cahn-2d");
  for (std::size_t n : {4U, 8U, 16U, 32U}) config.levels.push_back(conventional_level(Scheme::exp_euler, n));
  config.reference = {64, 64, Scheme::exp_euler};
  config.realizations = 1;
  config.seed = kSeed;
  config.workers = workers;
  return config;
}

NoiseCheckConfig noise_config() {
  NoiseCheckConfig config;
  config.model = builtin_model("reaction-diffusion-1d");
  config.modes = {1, 16, 256};
  config.samples = 200000;
  config.step_h = 1.0 / 64.0;
  config.seed = kSeed;
  return config;
}

const ErrorRow& row_for(const ErrorTable& table, std::size_t n) {
  for (const ErrorRow& row : table.rows) {
    if (row.n_modes == n) return row;
  }
  throw InvalidArgument("no row for N = " + std::to_string(n));
}

Outcome transforms() {
  double worst = 0.0;
  for (std::size_t n : {1U, 2U, 3U, 31U, 64U, 127U, 500U, 1000U, 1023U, 1024U}) {
    const auto c = oracle::random_coefficients(n, n);
    const auto grid = synthesize(SpectralField(Dimension::one, n, c));
    const auto back = analyze(grid);
    worst = std::max(worst, oracle::max_abs_diff(back.coefficients(), c));
    const std::vector<double> values(grid.values().begin(), grid.values().end());
    worst = std::max(worst, oracle::max_abs_diff(values, oracle::synthesize_1d(c)));
    worst = std::max(worst, oracle::max_abs_diff(back.coefficients(), oracle::analyze_1d(values)));
  }
  for (std::size_t n : {1U, 2U, 17U, 32U, 63U, 64U}) {
    const auto c = oracle::random_coefficients(n * n, 1000 + n);
    const auto grid = synthesize(SpectralField(Dimension::two, n, c));
    worst = std::max(worst, oracle::max_abs_diff(analyze(grid).coefficients(), c));
    worst = std::max(worst, oracle::max_abs_diff(grid.values(), oracle::synthesize_2d(c, n)));
  }
  return {worst <= 1e-10, "max abs deviation " + fmt(worst)};
}

Outcome heat_flow() {
  const auto model = without_noise(without_nonlinearity(builtin_model("reaction-diffusion-1d")));
  const std::size_t n = 8;
  const auto lambdas = eigenvalues(model.kappa, n, Dimension::one);
  double worst = 0.0;
  for (std::size_t m : {1U, 7U, 64U}) {
    const auto traj = integrate(model, {n, m, Scheme::exp_euler}, NoiseStreamKey{kSeed, 0}, {});
    for (std::size_t k = 1; k <= n; ++k) {
      const double exact = model.initial_coefficient(k, 0) * std::exp(-lambdas[k - 1] * model.horizon);
      worst = std::max(worst, std::abs(traj.final_state()[k - 1] - exact));
    }
  }
  return {worst <= 1e-12, "max abs deviation " + fmt(worst)};
}

Outcome noise_law() {
  const auto rows = run_noise_check(noise_config());
  outputs.noise_csv = cli::noise_check_csv(rows);
  Outcome outcome{true, ""};
  for (const auto& row : rows) {
    const double rel = std::abs(row.sample_std_convolution / row.analytic_std_convolution - 1.0);
    const double dcorr = std::abs(row.sample_correlation - row.analytic_correlation);
    outcome.pass = outcome.pass && rel <= 0.02 && dcorr <= 0.01;
    outcome.detail += "mode " + std::to_string(row.mode) + ": std rel " + cli::format_fixed(100.0 * rel, 3) +
                      "%, corr diff " + cli::format_fixed(dcorr, 5) + "; ";
  }
  return outcome;
}

Outcome coupling() {
  const auto lambdas = eigenvalues(0.01, 64, Dimension::one);
  double worst = 0.0;
  for (std::uint64_t r = 0; r < 8; ++r) {
    const auto fine = sample_joint_increments({kSeed, r}, lambdas, 64, 1.0);
    const auto direct = coarsen(fine, 8, lambdas);
    const auto two_four = coarsen(coarsen(fine, 2, lambdas), 4, lambdas);
    const auto four_two = coarsen(coarsen(fine, 4, lambdas), 2, lambdas);
    for (std::size_t k = 0; k < direct.n_steps(); ++k) {
      for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double scale = std::max(1.0, std::abs(direct.convolution(i, k)));
        worst = std::max(worst, std::abs(two_four.convolution(i, k) - direct.convolution(i, k)) / scale);
        worst = std::max(worst, std::abs(four_two.convolution(i, k) - direct.convolution(i, k)) / scale);
        worst = std::max(worst, std::abs(two_four.brownian(i, k) - direct.brownian(i, k)) / scale);
      }
    }
  }
  Outcome outcome{worst <= 1e-14, "associativity deviation " + fmt(worst) + "; "};

  const std::size_t samples = 100000;
  const double fine_h = 1.0 / 64.0;
  const std::size_t factor = 8;
  const double se = std::sqrt(2.0 / static_cast<double>(samples - 1));
  for (double lambda : {lambdas[0], lambdas[15], 0.01 * std::numbers::pi * std::numbers::pi * 256.0 * 256.0}) {
    const std::vector<double> one = {lambda};
    double sum_i = 0.0, sum_ii = 0.0, sum_w = 0.0, sum_ww = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      const auto coarse = coarsen(sample_joint_increments({kSeed + 1, s}, one, factor, fine_h * factor), factor, one);
      const double in = coarse.convolution(0, 0);
      const double w = coarse.brownian(0, 0);
      sum_i += in;
      sum_ii += in * in;
      sum_w += w;
      sum_ww += w * w;
    }
    const double n = static_cast<double>(samples);
    const double var_i = (sum_ii - sum_i * sum_i / n) / (n - 1.0);
    const double var_w = (sum_ww - sum_w * sum_w / n) / (n - 1.0);
    const auto ref = oracle::ou_step_moments(lambda, fine_h * factor);
    const double z_i = (var_i - ref.var_convolution) / (se * ref.var_convolution);
    const double z_w = (var_w - ref.var_brownian) / (se * ref.var_brownian);
    outcome.pass = outcome.pass && std::abs(z_i) <= 3.0 && std::abs(z_w) <= 3.0;
    outcome.detail += "lambda " + cli::format_fixed(lambda, 3) + ": z(I) " + cli::format_fixed(z_i, 2) + ", z(dW) " +
                      cli::format_fixed(z_w, 2) + "; ";
  }
  return outcome;
}

Outcome slope_check(const ErrorTable& table, std::size_t n_target, double target_error) {
  const double slope = fit_order(table, Abscissa::modes).slope;
  const double err = row_for(table, n_target).rms_error;
  const double factor = std::max(err / target_error, target_error / err);
  return {slope >= 0.75 && slope <= 1.25 && factor <= 2.0,
          "slope " + cli::format_fixed(slope, 3) + ", RMS at N=" + std::to_string(n_target) + " " +
              cli::format_fixed(err, 4) + " (target " + cli::format_fixed(target_error, 4) + ")"};
}

Outcome exp_order() {
  outputs.exp_table = run_convergence_study(exp_study(1));
  return slope_check(outputs.exp_table, 16, 0.0417);
}

Outcome implicit_order() {
  outputs.implicit_table = run_convergence_study(implicit_study(1));
  return slope_check(outputs.implicit_table, 8, 0.0837);
}

Outcome efficiency() {
  if (outputs.exp_table.rows.empty() || outputs.implicit_table.rows.empty()) return {false, "criteria 5-6 produced no tables"};
  const auto cmp = compare_efficiency(outputs.exp_table, outputs.implicit_table);
  if (!cmp.has_overlap) return {false, "error ranges do not overlap"};
  bool dominated = true;
  for (const auto& p : cmp.points) dominated = dominated && p.exp_rv_count < p.implicit_rv_count;
  const auto finest = *cmp.finest();
  return {dominated && finest.ratio() >= 4.0,
          std::to_string(cmp.points.size()) + " common levels, finest eps " + cli::format_fixed(finest.error_level, 4) +
              " ratio " + cli::format_fixed(finest.ratio(), 2)};
}

Outcome effort_table() {
  const std::vector<long long> exp_effort = {22, 133, 710, 3549, 17035, 79496, 363408, 1635339, 7268174, 31979969};
  const std::vector<long long> imp_effort = {6, 88, 1064, 11356, 113565, 1090226, 10175444};
  long long worst = 0;
  for (std::size_t i = 0; i < exp_effort.size(); ++i) {
    worst = std::max(worst, std::llabs(std::llround(effort_count(Scheme::exp_euler, std::size_t{4} << i, Dimension::one)) -
                                       exp_effort[i]));
  }
  for (std::size_t i = 0; i < imp_effort.size(); ++i) {
    worst = std::max(worst, std::llabs(std::llround(effort_count(Scheme::implicit_euler, std::size_t{2} << i,
                                                                 Dimension::one)) -
                                       imp_effort[i]));
  }
  return {worst <= 1, "17 entries, max deviation " + std::to_string(worst)};
}

Outcome pathwise() {
  outputs.pathwise_table = run_pathwise_study(pathwise_study(1));
  const auto& rows = outputs.pathwise_table.rows;
  if (!outputs.pathwise_table.failures.empty() || rows.size() != 4) return {false, "some levels diverged"};
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) decreasing = decreasing && rows[i + 1].rms_error < rows[i].rms_error;
  const double slope = fit_order(outputs.pathwise_table, Abscissa::modes).slope;
  return {decreasing && slope >= 0.6 && slope <= 1.4,
          std::string(decreasing ? "strictly decreasing" : "not monotone") + ", slope " + cli::format_fixed(slope, 3)};
}

Outcome determinism() {
  std::vector<std::string> differing;
  const auto same = [&](const char* what, const std::string& a, const std::string& b) {
    if (a != b) differing.emplace_back(what);
  };
  const auto exp3 = run_convergence_study(exp_study(3));
  const auto imp3 = run_convergence_study(implicit_study(3));
  same("exp-euler table", cli::error_table_csv(outputs.exp_table), cli::error_table_csv(exp3));
  same("implicit-euler table", cli::error_table_csv(outputs.implicit_table), cli::error_table_csv(imp3));
  same("comparison", cli::comparison_csv(compare_efficiency(outputs.exp_table, outputs.implicit_table)),
       cli::comparison_csv(compare_efficiency(exp3, imp3)));
  same("pathwise table", cli::error_table_csv(outputs.pathwise_table),
       cli::error_table_csv(run_pathwise_study(pathwise_study(3))));
  same("noise check", outputs.noise_csv, cli::noise_check_csv(run_noise_check(noise_config())));
  std::string detail = differing.empty() ? "5 CSV outputs identical with 3 workers" : "differs:";
  for (const auto& d : differing) detail += " " + d;
  return {differing.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "transform correctness", 5.0, transforms},
      {2, "heat-flow exactness", 1.0, heat_flow},
      {3, "noise law", 30.0, noise_law},
      {4, "coupling exactness", 30.0, coupling},
      {5, "exp-euler strong order", 300.0, exp_order},
      {6, "implicit-euler strong order", 600.0, implicit_order},
      {7, "efficiency dominance", 60.0, efficiency},
      {8, "effort table fidelity", 1.0, effort_table},
      {9, "2D pathwise study", 600.0, pathwise},
      {10, "determinism across worker counts", 1200.0, determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.time_limit_s) {
      outcome.pass = false;
      outcome.detail += " [over time limit " + cli::format_fixed(c.time_limit_s, 0) + " s]";
    }
    if (!outcome.pass) ++failures;
    std::printf("%s criterion %d (%s): %s (%.2f s)\n", outcome.pass ? "PASS" : "FAIL", c.id, c.title,
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
