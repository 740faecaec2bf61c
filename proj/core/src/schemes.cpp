#include "spde/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spde/errors.hpp"

namespace spde {

std::string_view to_string(Scheme scheme) noexcept {
  return scheme == Scheme::exp_euler ? "exp-euler" : "implicit-euler";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "exp-euler") return Scheme::exp_euler;
  if (text == "implicit-euler") return Scheme::implicit_euler;
  throw InvalidArgument("unknown scheme '" + std::string(text) + "'; valid: exp-euler, implicit-euler");
}

SchemeLevel conventional_level(Scheme scheme, std::size_t n_modes) {
  if (n_modes < 1) throw InvalidArgument("conventional_level: mode count must be at least 1");
  return {n_modes, scheme == Scheme::exp_euler ? n_modes : n_modes * n_modes, scheme};
}

std::uint64_t rv_count(const SchemeLevel& level, Dimension dim) noexcept {
  return static_cast<std::uint64_t>(mode_count(dim, level.n_modes)) * level.n_steps;
}

const SpectralField& Trajectory::final_state() const {
  const auto it = snapshots.find(level.n_steps);
  if (it == snapshots.end()) throw InvalidArgument("Trajectory: final state was not recorded");
  return it->second;
}

Stepper::Stepper(const ModelSpec& model, std::size_t n_modes, double h, Scheme scheme)
    : scheme_(scheme),
      h_(h),
      multiplier_(spde::eigenvalues(model.kappa, n_modes, model.dimension)),
      drift_(model.dimension, n_modes, model.nonlinearity),
      drift_values_(multiplier_.size()) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("Stepper: step size must be positive");
  for (double& m : multiplier_) {
    m = scheme == Scheme::exp_euler ? std::exp(-m * h) : 1.0 / (1.0 + m * h);
  }
}

void Stepper::step(std::span<double> state, std::span<const double> scaled_noise, std::size_t step_index) {
  if (state.size() != size() || scaled_noise.size() != size()) {
    throw InvalidArgument("Stepper::step: state/noise size does not match the mode count");
  }
  try {
    drift_.apply(state, drift_values_);
  } catch (const EvaluationError& e) {
    throw DivergenceError(std::string(to_string(scheme_)) + " diverged at step " + std::to_string(step_index) +
                              ": " + e.what(),
                          step_index);
  }
  bool finite = true;
  if (scheme_ == Scheme::exp_euler) {
    for (std::size_t i = 0; i < state.size(); ++i) {
      state[i] = multiplier_[i] * (state[i] + h_ * drift_values_[i]) + scaled_noise[i];
      finite = finite && std::isfinite(state[i]);
    }
  } else {
    for (std::size_t i = 0; i < state.size(); ++i) {
      state[i] = multiplier_[i] * (state[i] + h_ * drift_values_[i] + scaled_noise[i]);
      finite = finite && std::isfinite(state[i]);
    }
  }
  if (!finite) {
    throw DivergenceError(std::string(to_string(scheme_)) + " produced a non-finite coefficient at step " +
                              std::to_string(step_index),
                          step_index);
  }
}

namespace {

SpectralField single_step(const SpectralField& state, const ModelSpec& model, double h,
                          std::span<const double> noise, std::size_t step_index, Scheme scheme) {
  if (state.dimension() != model.dimension) throw InvalidArgument("step: field and model dimension differ");
  Stepper stepper(model, state.n_modes(), h, scheme);
  SpectralField out = state;
  stepper.step(out.coefficients(), noise, step_index);
  return out;
}

}  // namespace

SpectralField exp_euler_step(const SpectralField& state, const ModelSpec& model, double h,
                             std::span<const double> noise_term, std::size_t step_index) {
  return single_step(state, model, h, noise_term, step_index, Scheme::exp_euler);
}

SpectralField implicit_euler_step(const SpectralField& state, const ModelSpec& model, double h,
                                  std::span<const double> wiener_term, std::size_t step_index) {
  return single_step(state, model, h, wiener_term, step_index, Scheme::implicit_euler);
}

Trajectory integrate(const ModelSpec& model, const SchemeLevel& level, const IncrementBlock& block,
                     std::span<const std::size_t> snapshot_steps) {
  if (level.n_modes < 1 || level.n_steps < 1) throw InvalidArgument("integrate: N and M must be at least 1");
  if (block.dimension() != model.dimension || block.n_modes() != level.n_modes ||
      block.n_steps() != level.n_steps) {
    throw InvalidArgument("integrate: increment block shape does not match the level");
  }
  for (std::size_t s : snapshot_steps) {
    if (s > level.n_steps) {
      throw InvalidArgument("integrate: snapshot step " + std::to_string(s) + " exceeds M = " +
                            std::to_string(level.n_steps));
    }
  }
  validate(model, level.n_modes);

  const double h = model.horizon / static_cast<double>(level.n_steps);
  if (std::abs(block.step_h() - h) > 1e-12 * h) throw InvalidArgument("integrate: block step size differs from T/M");

  const auto wanted = [&](std::size_t k) {
    return k == level.n_steps || std::find(snapshot_steps.begin(), snapshot_steps.end(), k) != snapshot_steps.end();
  };

  Trajectory trajectory;
  trajectory.level = level;
  trajectory.rv_count = rv_count(level, model.dimension);

  SpectralField state = initial_field(model, level.n_modes);
  if (wanted(0)) trajectory.snapshots.emplace(0, state);

  const std::vector<double> amplitudes = noise_amplitudes(model, level.n_modes);
  std::vector<double> scaled(amplitudes.size());
  Stepper stepper(model, level.n_modes, h, level.scheme);
  for (std::size_t k = 0; k < level.n_steps; ++k) {
    const auto raw = level.scheme == Scheme::exp_euler ? block.convolution_step(k) : block.brownian_step(k);
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = amplitudes[i] * raw[i];
    stepper.step(state.coefficients(), scaled, k);
    if (wanted(k + 1)) trajectory.snapshots.insert_or_assign(k + 1, state);
  }
  return trajectory;
}

Trajectory integrate(const ModelSpec& model, const SchemeLevel& level, const NoiseStreamKey& key,
                     std::span<const std::size_t> snapshot_steps) {
  const IncrementBlock block = sample_joint_increments(key, basis(model, level.n_modes), level.n_steps, model.horizon);
  return integrate(model, level, block, snapshot_steps);
}

}  // namespace spde
