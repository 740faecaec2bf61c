#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spde/spectral.hpp"

namespace spde {

/// Point in [0,1] (x2 unused) or [0,1]^2.
struct Position {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// Pointwise drift f(x, y) defining the Nemytskii operator (F(v))(x) = f(x, v(x)).
struct Nonlinearity {
  std::string label;
  std::function<double(Position, double)> f;
  /// Bound K on |df/dy| when known.
  std::optional<double> lipschitz_in_y;
  bool globally_lipschitz = true;

  double operator()(Position x, double y) const { return f(x, y); }

  static Nonlinearity zero();
  static Nonlinearity constant(double value);
  /// f(x, y) = slope * y.
  static Nonlinearity linear(double slope);
};

/// Mode index (n, m) -> real; m is 0 for 1D models. Indices are 1-based.
using ModeRule = std::function<double(std::size_t n, std::size_t m)>;

struct Rates {
  double gamma = 0.5;
  double theta = 0.5;
};

struct ModelSpec {
  std::string name;
  Dimension dimension = Dimension::one;
  double kappa = 1.0;
  double horizon = 1.0;
  ModeRule noise_amplitude;
  ModeRule initial_coefficient;
  Nonlinearity nonlinearity;
  Rates rates;
};

/// Checks the model's standing assumptions; with n_modes > 0 also checks that
/// the noise amplitudes and initial coefficients are finite for those modes.
void validate(const ModelSpec& model, std::size_t n_modes = 0);

SineBasis basis(const ModelSpec& model, std::size_t n_modes);

/// b for every stored mode of an N-mode field, in storage order.
std::vector<double> noise_amplitudes(const ModelSpec& model, std::size_t n_modes);

/// Coefficients of P_N xi.
SpectralField initial_field(const ModelSpec& model, std::size_t n_modes);

/// Built-ins: reaction-diffusion-1d, spatial-linear-1d, allen-cahn-2d.
ModelSpec builtin_model(std::string_view name);
std::span<const std::string_view> builtin_model_names();

ModelSpec without_nonlinearity(ModelSpec model);
ModelSpec without_noise(ModelSpec model);

/// Partial sum over n <= n_max of n^epsilon b_n^2 (1D models).
double weighted_noise_sum(const ModelSpec& model, double epsilon, std::size_t n_max);

struct NemytskiiOptions {
  /// Zero output modes above 2N/3 per axis.
  bool dealias = false;
};

/// Collocation approximation of P_N F(v): synthesize, apply f pointwise, analyze.
/// Reuses one transform and scratch buffer; not safe to share across threads.
class NemytskiiOperator {
 public:
  NemytskiiOperator(Dimension dim, std::size_t n_modes, Nonlinearity nonlinearity,
                    NemytskiiOptions options = {});

  std::size_t size() const noexcept { return transform_.size(); }

  /// out may alias coefficients. Throws EvaluationError on a non-finite f value.
  void apply(std::span<const double> coefficients, std::span<double> out);

 private:
  SineTransform transform_;
  Nonlinearity nonlinearity_;
  NemytskiiOptions options_;
  std::vector<Position> positions_;
  std::vector<double> values_;
};

SpectralField nemytskii_apply(const SpectralField& field, const Nonlinearity& nonlinearity,
                              NemytskiiOptions options = {});

}  // namespace spde
