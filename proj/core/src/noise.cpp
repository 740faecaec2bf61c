#include "spde/noise.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "spde/errors.hpp"
#include "spde/philox.hpp"

namespace spde {

namespace {

constexpr std::uint64_t kMaxCounterWord = std::numeric_limits<std::uint32_t>::max();

// Taylor coefficients of (1 - e^{-2x})/(2x) - ((1 - e^{-x})/x)^2, starting at x^2.
constexpr std::array<double, 18> kConditionalSeries = {
    1.0 / 12.0,
    -1.0 / 12.0,
    17.0 / 360.0,
    -7.0 / 360.0,
    43.0 / 6720.0,
    -107.0 / 60480.0,
    769.0 / 1814400.0,
    -163.0 / 1814400.0,
    4097.0 / 239500800.0,
    -709.0 / 239500800.0,
    6827.0 / 14529715200.0,
    -15019.0 / 217945728000.0,
    19661.0 / 2092278988800.0,
    -1139.0 / 951035904000.0,
    458753.0 / 3201186852864000.0,
    -51739.0 / 3201186852864000.0,
    233017.0 / 135161222676480000.0,
    -495161.0 / 2838385676206080000.0,
};

// Var(I | dW) / h as a function of x = lambda h.
double conditional_variance_ratio(double x) {
  if (x < 0.5) {
    double sum = 0.0;
    for (auto it = kConditionalSeries.rbegin(); it != kConditionalSeries.rend(); ++it) sum = sum * x + *it;
    return sum * x * x;
  }
  const double a = -std::expm1(-2.0 * x) / (2.0 * x);
  const double b = -std::expm1(-x) / x;
  return a - b * b;
}

void require_positive(double value, const char* name, const char* where) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidArgument(std::string(where) + ": " + name + " must be positive and finite");
  }
}

}  // namespace

std::array<double, 2> standard_normal_pair(const NoiseStreamKey& key, ModeIndex mode, std::uint64_t step) {
  if (step > kMaxCounterWord || key.realization > kMaxCounterWord || mode.n == 0 || mode.n - 1 > kMaxCounterWord ||
      (mode.m != 0 && mode.m - 1 > kMaxCounterWord)) {
    throw InvalidArgument("standard_normal_pair: index exceeds the 32-bit counter range");
  }
  const PhiloxCounter counter = {static_cast<std::uint32_t>(step),
                                 static_cast<std::uint32_t>(mode.m == 0 ? 0 : mode.m - 1),
                                 static_cast<std::uint32_t>(mode.n - 1),
                                 static_cast<std::uint32_t>(key.realization)};
  const PhiloxKey k = {static_cast<std::uint32_t>(key.seed), static_cast<std::uint32_t>(key.seed >> 32)};
  const PhiloxCounter r = philox4x32_10(counter, k);
  const double u1 = uniform_open01((static_cast<std::uint64_t>(r[1]) << 32) | r[0]);
  const double u2 = uniform_open01((static_cast<std::uint64_t>(r[3]) << 32) | r[2]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

double JointIncrementLaw::correlation() const {
  const double denom = std::sqrt(var_brownian * var_convolution);
  return denom > 0.0 ? covariance / denom : 0.0;
}

JointIncrementLaw joint_increment_law(double lambda, double h) {
  require_positive(lambda, "lambda", "joint_increment_law");
  require_positive(h, "h", "joint_increment_law");
  const double x = lambda * h;
  JointIncrementLaw law;
  law.var_brownian = h;
  law.var_convolution = -std::expm1(-2.0 * x) / (2.0 * lambda);
  law.covariance = -std::expm1(-x) / lambda;
  const double ratio = conditional_variance_ratio(x);
  if (!(ratio >= 0.0) || !std::isfinite(ratio)) {
    throw InternalError("joint_increment_law: covariance is not positive semidefinite for lambda*h = " +
                        std::to_string(x));
  }
  law.conditional_std = std::sqrt(ratio * h);
  return law;
}

double increment_std(double b, double lambda, double h) {
  require_positive(lambda, "lambda", "increment_std");
  require_positive(h, "h", "increment_std");
  return std::abs(b) * std::sqrt(-std::expm1(-2.0 * lambda * h) / (2.0 * lambda));
}

IncrementBlock::IncrementBlock(Dimension dim, std::size_t modes_per_axis, std::size_t n_steps, double step_h)
    : dim_(dim),
      modes_per_axis_(modes_per_axis),
      n_steps_(n_steps),
      step_h_(step_h),
      brownian_(spde::mode_count(dim, modes_per_axis) * n_steps, 0.0),
      convolution_(spde::mode_count(dim, modes_per_axis) * n_steps, 0.0) {
  if (modes_per_axis < 1 || n_steps < 1) throw InvalidArgument("IncrementBlock: modes and steps must be >= 1");
  require_positive(step_h, "step size", "IncrementBlock");
}

namespace {

IncrementBlock sample_modes(const NoiseStreamKey& key, Dimension dim, std::size_t modes_per_axis,
                            std::span<const double> lambdas, std::size_t n_steps, double horizon) {
  if (n_steps < 1) throw InvalidArgument("sample_joint_increments: need at least one step");
  require_positive(horizon, "horizon", "sample_joint_increments");
  const double h = horizon / static_cast<double>(n_steps);
  IncrementBlock block(dim, modes_per_axis, n_steps, h);
  const std::size_t count = block.mode_count();
  if (lambdas.size() != count) throw InvalidArgument("sample_joint_increments: eigenvalue count mismatch");

  std::vector<ModeIndex> modes(count);
  std::vector<JointIncrementLaw> laws(count);
  for (std::size_t i = 0; i < count; ++i) {
    modes[i] = dim == Dimension::one ? ModeIndex{i + 1, 0} : ModeIndex{i / modes_per_axis + 1, i % modes_per_axis + 1};
    laws[i] = joint_increment_law(lambdas[i], h);
  }
  const double sqrt_h = std::sqrt(h);
  for (std::size_t k = 0; k < n_steps; ++k) {
    for (std::size_t i = 0; i < count; ++i) {
      const auto [z0, z1] = standard_normal_pair(key, modes[i], k);
      block.brownian(i, k) = sqrt_h * z0;
      block.convolution(i, k) = (laws[i].covariance / sqrt_h) * z0 + laws[i].conditional_std * z1;
    }
  }
  return block;
}

}  // namespace

IncrementBlock sample_joint_increments(const NoiseStreamKey& key, const SineBasis& basis, std::size_t n_steps,
                                       double horizon) {
  return sample_modes(key, basis.dimension(), basis.n_modes(), basis.eigenvalues(), n_steps, horizon);
}

IncrementBlock sample_joint_increments(const NoiseStreamKey& key, std::span<const double> lambdas,
                                       std::size_t n_steps, double horizon) {
  if (lambdas.empty()) throw InvalidArgument("sample_joint_increments: no modes requested");
  return sample_modes(key, Dimension::one, lambdas.size(), lambdas, n_steps, horizon);
}

IncrementBlock coarsen(const IncrementBlock& block, std::size_t factor, std::span<const double> lambdas) {
  if (factor < 1 || block.n_steps() % factor != 0) {
    throw InvalidArgument("coarsen: factor " + std::to_string(factor) + " does not divide " +
                          std::to_string(block.n_steps()) + " steps");
  }
  const std::size_t count = block.mode_count();
  if (lambdas.size() != count) throw InvalidArgument("coarsen: eigenvalue count mismatch");
  const std::size_t coarse_steps = block.n_steps() / factor;
  IncrementBlock out(block.dimension(), block.n_modes(), coarse_steps, block.step_h() * static_cast<double>(factor));

  std::vector<double> decay(count);
  for (std::size_t i = 0; i < count; ++i) {
    require_positive(lambdas[i], "lambda", "coarsen");
    decay[i] = std::exp(-lambdas[i] * block.step_h());
  }
  // Horner form: I <- e^{-lambda h} I + I_j accumulates sum_j e^{-lambda h (factor-1-j)} I_j.
  for (std::size_t c = 0; c < coarse_steps; ++c) {
    for (std::size_t j = 0; j < factor; ++j) {
      const std::size_t k = c * factor + j;
      for (std::size_t i = 0; i < count; ++i) {
        out.brownian(i, c) += block.brownian(i, k);
        out.convolution(i, c) = decay[i] * out.convolution(i, c) + block.convolution(i, k);
      }
    }
  }
  return out;
}

IncrementBlock restrict_modes(const IncrementBlock& block, std::size_t modes_per_axis) {
  if (modes_per_axis < 1 || modes_per_axis > block.n_modes()) {
    throw InvalidArgument("restrict_modes: requested " + std::to_string(modes_per_axis) + " modes from a block of " +
                          std::to_string(block.n_modes()));
  }
  IncrementBlock out(block.dimension(), modes_per_axis, block.n_steps(), block.step_h());
  const std::size_t src_axis = block.n_modes();
  for (std::size_t k = 0; k < block.n_steps(); ++k) {
    for (std::size_t i = 0; i < out.mode_count(); ++i) {
      const std::size_t src =
          block.dimension() == Dimension::one ? i : (i / modes_per_axis) * src_axis + (i % modes_per_axis);
      out.brownian(i, k) = block.brownian(src, k);
      out.convolution(i, k) = block.convolution(src, k);
    }
  }
  return out;
}

}  // namespace spde
