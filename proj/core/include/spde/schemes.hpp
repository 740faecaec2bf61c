#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "spde/models.hpp"
#include "spde/noise.hpp"
#include "spde/spectral.hpp"

namespace spde {

enum class Scheme { exp_euler, implicit_euler };

std::string_view to_string(Scheme scheme) noexcept;
/// Accepts "exp-euler" and "implicit-euler".
Scheme parse_scheme(std::string_view text);

struct SchemeLevel {
  std::size_t n_modes = 1;
  std::size_t n_steps = 1;
  Scheme scheme = Scheme::exp_euler;

  friend bool operator==(const SchemeLevel&, const SchemeLevel&) = default;
};

/// exp-euler uses M = N, implicit-euler M = N^2.
SchemeLevel conventional_level(Scheme scheme, std::size_t n_modes);

/// Standard normals consumed: one per stored mode per step.
std::uint64_t rv_count(const SchemeLevel& level, Dimension dim) noexcept;

struct Trajectory {
  SchemeLevel level;
  std::map<std::size_t, SpectralField> snapshots;
  std::uint64_t rv_count = 0;

  /// Throws InvalidArgument if the final step was not recorded.
  const SpectralField& final_state() const;
};

/// One-step operator for a fixed (model, N, h, scheme); holds e^{-lambda h} or
/// 1/(1 + lambda h) and the Nemytskii workspace. One per trajectory.
class Stepper {
 public:
  Stepper(const ModelSpec& model, std::size_t n_modes, double h, Scheme scheme);

  std::size_t size() const noexcept { return multiplier_.size(); }

  /// Advances state in place. scaled_noise is b * I (exp-euler) or b * dW (implicit-euler).
  /// Throws DivergenceError carrying step_index on a non-finite result.
  void step(std::span<double> state, std::span<const double> scaled_noise, std::size_t step_index);

 private:
  Scheme scheme_;
  double h_;
  std::vector<double> multiplier_;
  NemytskiiOperator drift_;
  std::vector<double> drift_values_;
};

/// Y' = e^{-lambda h} (Y + h P_N F(Y)) + noise_term.
SpectralField exp_euler_step(const SpectralField& state, const ModelSpec& model, double h,
                             std::span<const double> noise_term, std::size_t step_index = 0);

/// Y' = (Y + h P_N F(Y) + wiener_term) / (1 + lambda h).
SpectralField implicit_euler_step(const SpectralField& state, const ModelSpec& model, double h,
                                  std::span<const double> wiener_term, std::size_t step_index = 0);

/// Integrates from P_N xi over level.n_steps steps driven by block, which must
/// have exactly level.n_modes modes and level.n_steps steps. snapshot_steps
/// must lie in [0, M]; the final step is always recorded.
Trajectory integrate(const ModelSpec& model, const SchemeLevel& level, const IncrementBlock& block,
                     std::span<const std::size_t> snapshot_steps);

/// Samples the increments for (N, M) under key and integrates.
Trajectory integrate(const ModelSpec& model, const SchemeLevel& level, const NoiseStreamKey& key,
                     std::span<const std::size_t> snapshot_steps);

}  // namespace spde
