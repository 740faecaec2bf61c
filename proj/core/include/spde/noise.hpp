#pragma once

// Joint sampling of per-mode Brownian increments dW ~ N(0, h) and
// Ornstein-Uhlenbeck convolution increments I = int_step e^{-lambda (t_{k+1} - s)} d beta_s.
//
// Stream layout: every (mode, step) pair owns one Philox4x32-10 block with
//   counter = {step, m - 1, n - 1, realization}   (m - 1 = 0 in 1D)
//   key     = {seed & 0xffffffff, seed >> 32}
// The four output words form two 64-bit integers, mapped to uniforms in (0,1)
// and then to two standard normals z0, z1 by Box-Muller (z0 uses cos, z1 sin).
// The pair is coloured into (dW, I) by the Cholesky factor of the 2x2 joint
// covariance, so dW depends on z0 only:
//   dW = sqrt(h) z0
//   I  = (Cov / sqrt(h)) z0 + sqrt(Var(I) - Cov^2 / h) z1.
// Because the counter carries the mode indices themselves (not a position in
// a particular truncation), values are identical whatever set of modes or
// steps is requested.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spde/spectral.hpp"

namespace spde {

struct NoiseStreamKey {
  std::uint64_t seed = 0;
  std::uint64_t realization = 0;

  friend bool operator==(const NoiseStreamKey&, const NoiseStreamKey&) = default;
};

/// 1-based mode index; m = 0 marks a 1D mode.
struct ModeIndex {
  std::size_t n = 1;
  std::size_t m = 0;
};

/// The two standard normals assigned to (mode, step) under key.
std::array<double, 2> standard_normal_pair(const NoiseStreamKey& key, ModeIndex mode, std::uint64_t step);

/// Second moments of (dW, I) over one step of length h for decay rate lambda.
struct JointIncrementLaw {
  double var_brownian = 0.0;
  double var_convolution = 0.0;
  double covariance = 0.0;
  /// sqrt(Var(I) - Cov^2 / Var(dW)), evaluated without cancellation for small lambda h.
  double conditional_std = 0.0;

  double correlation() const;
};

JointIncrementLaw joint_increment_law(double lambda, double h);

/// |b| sqrt((1 - e^{-2 lambda h}) / (2 lambda)): std of the scaled convolution increment.
double increment_std(double b, double lambda, double h);

/// Per-mode, per-step samples (unit amplitude). Storage is step-major.
class IncrementBlock {
 public:
  IncrementBlock(Dimension dim, std::size_t modes_per_axis, std::size_t n_steps, double step_h);

  Dimension dimension() const noexcept { return dim_; }
  std::size_t n_modes() const noexcept { return modes_per_axis_; }
  std::size_t mode_count() const noexcept { return spde::mode_count(dim_, modes_per_axis_); }
  std::size_t n_steps() const noexcept { return n_steps_; }
  double step_h() const noexcept { return step_h_; }

  double& brownian(std::size_t mode, std::size_t step) { return brownian_[step * mode_count() + mode]; }
  double brownian(std::size_t mode, std::size_t step) const { return brownian_[step * mode_count() + mode]; }
  double& convolution(std::size_t mode, std::size_t step) { return convolution_[step * mode_count() + mode]; }
  double convolution(std::size_t mode, std::size_t step) const {
    return convolution_[step * mode_count() + mode];
  }

  std::span<const double> brownian_step(std::size_t step) const {
    return std::span<const double>(brownian_).subspan(step * mode_count(), mode_count());
  }
  std::span<const double> convolution_step(std::size_t step) const {
    return std::span<const double>(convolution_).subspan(step * mode_count(), mode_count());
  }

  friend bool operator==(const IncrementBlock&, const IncrementBlock&) = default;

 private:
  Dimension dim_;
  std::size_t modes_per_axis_;
  std::size_t n_steps_;
  double step_h_;
  std::vector<double> brownian_;
  std::vector<double> convolution_;
};

/// Samples all modes of basis over n_steps steps of horizon / n_steps.
IncrementBlock sample_joint_increments(const NoiseStreamKey& key, const SineBasis& basis, std::size_t n_steps,
                                       double horizon);

/// 1D form: lambdas[i] belongs to mode i + 1.
IncrementBlock sample_joint_increments(const NoiseStreamKey& key, std::span<const double> lambdas,
                                       std::size_t n_steps, double horizon);

/// Exact composition of factor consecutive steps. lambdas in the block's mode order.
IncrementBlock coarsen(const IncrementBlock& block, std::size_t factor, std::span<const double> lambdas);

/// Keeps the first modes_per_axis modes per axis.
IncrementBlock restrict_modes(const IncrementBlock& block, std::size_t modes_per_axis);

}  // namespace spde
