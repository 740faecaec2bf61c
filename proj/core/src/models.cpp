#include "spde/models.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "spde/errors.hpp"

namespace spde {

Nonlinearity Nonlinearity::zero() {
  return {"0", [](Position, double) { return 0.0; }, 0.0, true};
}

Nonlinearity Nonlinearity::constant(double value) {
  return {std::to_string(value), [value](Position, double) { return value; }, 0.0, true};
}

Nonlinearity Nonlinearity::linear(double slope) {
  return {std::to_string(slope) + "*y", [slope](Position, double y) { return slope * y; },
          std::abs(slope), true};
}

void validate(const ModelSpec& model, std::size_t n_modes) {
  const auto fail = [&](const std::string& why) {
    throw InvalidArgument("model '" + model.name + "': " + why);
  };
  if (!(model.kappa > 0.0) || !std::isfinite(model.kappa)) fail("kappa must be positive and finite");
  if (!(model.horizon > 0.0) || !std::isfinite(model.horizon)) fail("horizon T must be positive and finite");
  if (!(model.rates.gamma >= 0.5 && model.rates.gamma < 1.0)) fail("gamma must lie in [1/2, 1)");
  if (!(model.rates.theta > 0.0 && model.rates.theta <= 0.5)) fail("theta must lie in (0, 1/2]");
  if (!model.noise_amplitude) fail("missing noise amplitude rule");
  if (!model.initial_coefficient) fail("missing initial coefficient rule");
  if (!model.nonlinearity.f) fail("missing nonlinearity");
  if (n_modes == 0) return;

  const bool two_d = model.dimension == Dimension::two;
  for (std::size_t n = 1; n <= n_modes; ++n) {
    const std::size_t m_end = two_d ? n_modes : 1;
    for (std::size_t m = 1; m <= m_end; ++m) {
      const std::size_t mi = two_d ? m : 0;
      if (!std::isfinite(model.noise_amplitude(n, mi))) {
        fail("noise amplitude for mode " + std::to_string(n) + " is not finite");
      }
      if (!std::isfinite(model.initial_coefficient(n, mi))) {
        fail("initial coefficient for mode " + std::to_string(n) + " is not finite");
      }
    }
  }
}

SineBasis basis(const ModelSpec& model, std::size_t n_modes) {
  return SineBasis(model.dimension, model.kappa, n_modes);
}

namespace {

template <typename Fn>
std::vector<double> evaluate_rule(Dimension dim, std::size_t n_modes, Fn&& rule) {
  std::vector<double> out;
  out.reserve(mode_count(dim, n_modes));
  if (dim == Dimension::one) {
    for (std::size_t n = 1; n <= n_modes; ++n) out.push_back(rule(n, 0));
  } else {
    for (std::size_t n = 1; n <= n_modes; ++n) {
      for (std::size_t m = 1; m <= n_modes; ++m) out.push_back(rule(n, m));
    }
  }
  return out;
}

}  // namespace

std::vector<double> noise_amplitudes(const ModelSpec& model, std::size_t n_modes) {
  if (n_modes < 1) throw InvalidArgument("noise_amplitudes: mode count must be at least 1");
  return evaluate_rule(model.dimension, n_modes, model.noise_amplitude);
}

SpectralField initial_field(const ModelSpec& model, std::size_t n_modes) {
  if (n_modes < 1) throw InvalidArgument("initial_field: mode count must be at least 1");
  return SpectralField(model.dimension, n_modes,
                       evaluate_rule(model.dimension, n_modes, model.initial_coefficient));
}

namespace {

constexpr std::array<std::string_view, 3> kBuiltinNames = {"reaction-diffusion-1d", "spatial-linear-1d",
                                                           "allen-cahn-2d"};

// xi = sin(pi x)/sqrt(2) +- (3 sqrt(2)/5) sin(3 pi x) = (1/2) e_1 +- (3/5) e_3.
ModeRule two_mode_initial(double third) {
  return [third](std::size_t n, std::size_t) {
    if (n == 1) return 0.5;
    if (n == 3) return third;
    return 0.0;
  };
}

ModelSpec reaction_diffusion_1d() {
  ModelSpec model;
  model.name = "reaction-diffusion-1d";
  model.dimension = Dimension::one;
  model.kappa = 1.0 / 100.0;
  model.horizon = 1.0;
  model.noise_amplitude = [](std::size_t n, std::size_t) {
    return std::pow(static_cast<double>(n), -0.55) / 3.5;
  };
  model.initial_coefficient = two_mode_initial(3.0 / 5.0);
  // sup |df/dy| = sup |5 (y^2 - 2y - 1) / (1 + y^2)^2| ~ 6.3726
  model.nonlinearity = {"5(1-y)/(1+y^2)",
                        [](Position, double y) { return 5.0 * (1.0 - y) / (1.0 + y * y); }, 6.38,
                        true};
  model.rates = {0.5, 0.5};
  return model;
}

ModelSpec spatial_linear_1d() {
  ModelSpec model;
  model.name = "spatial-linear-1d";
  model.dimension = Dimension::one;
  model.kappa = 1.0 / 50.0;
  model.horizon = 1.0;
  model.noise_amplitude = [](std::size_t n, std::size_t) {
    return std::pow(static_cast<double>(n), -0.6) / 5.0;
  };
  model.initial_coefficient = two_mode_initial(-3.0 / 5.0);
  model.nonlinearity = {"(3.8x^2-2)y",
                        [](Position x, double y) { return (3.8 * x.x1 * x.x1 - 2.0) * y; }, 2.0, true};
  model.rates = {0.5, 0.5};
  return model;
}

ModelSpec allen_cahn_2d() {
  ModelSpec model;
  model.name = "allen-cahn-2d";
  model.dimension = Dimension::two;
  model.kappa = 1.0 / 10.0;
  model.horizon = 1.0;
  model.noise_amplitude = [](std::size_t n, std::size_t m) { return 1.0 / static_cast<double>(n + m); };
  // sin(pi x1) sin(pi x2) = e_{1,1} / 2
  model.initial_coefficient = [](std::size_t n, std::size_t m) { return n == 1 && m == 1 ? 0.5 : 0.0; };
  model.nonlinearity = {"y-y^3", [](Position, double y) { return y - y * y * y; }, std::nullopt, false};
  model.rates = {0.5, 0.5};
  return model;
}

}  // namespace

ModelSpec builtin_model(std::string_view name) {
  if (name == kBuiltinNames[0]) return reaction_diffusion_1d();
  if (name == kBuiltinNames[1]) return spatial_linear_1d();
  if (name == kBuiltinNames[2]) return allen_cahn_2d();
  std::string valid;
  for (auto n : kBuiltinNames) {
    if (!valid.empty()) valid += ", ";
    valid += n;
  }
  throw InvalidArgument("unknown model '" + std::string(name) + "'; valid names: " + valid);
}

std::span<const std::string_view> builtin_model_names() { return kBuiltinNames; }

ModelSpec without_nonlinearity(ModelSpec model) {
  model.nonlinearity = Nonlinearity::zero();
  return model;
}

ModelSpec without_noise(ModelSpec model) {
  model.noise_amplitude = [](std::size_t, std::size_t) { return 0.0; };
  return model;
}

double weighted_noise_sum(const ModelSpec& model, double epsilon, std::size_t n_max) {
  if (model.dimension != Dimension::one) throw InvalidArgument("weighted_noise_sum: 1D models only");
  double sum = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double b = model.noise_amplitude(n, 0);
    sum += std::pow(static_cast<double>(n), epsilon) * b * b;
  }
  return sum;
}

NemytskiiOperator::NemytskiiOperator(Dimension dim, std::size_t n_modes, Nonlinearity nonlinearity,
                                     NemytskiiOptions options)
    : transform_(dim, n_modes),
      nonlinearity_(std::move(nonlinearity)),
      options_(options),
      values_(mode_count(dim, n_modes)) {
  if (!nonlinearity_.f) throw InvalidArgument("NemytskiiOperator: missing nonlinearity");
  positions_.reserve(values_.size());
  if (dim == Dimension::one) {
    for (std::size_t j = 1; j <= n_modes; ++j) positions_.push_back({CollocationGrid::point(j, n_modes), 0.0});
  } else {
    for (std::size_t j = 1; j <= n_modes; ++j) {
      for (std::size_t k = 1; k <= n_modes; ++k) {
        positions_.push_back({CollocationGrid::point(j, n_modes), CollocationGrid::point(k, n_modes)});
      }
    }
  }
}

void NemytskiiOperator::apply(std::span<const double> coefficients, std::span<double> out) {
  transform_.synthesize(coefficients, values_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = nonlinearity_.f(positions_[i], values_[i]);
    if (!std::isfinite(v)) {
      throw EvaluationError("nonlinearity '" + nonlinearity_.label + "' returned a non-finite value at grid index " +
                                std::to_string(i),
                            i);
    }
    values_[i] = v;
  }
  transform_.analyze(values_, out);

  if (options_.dealias) {
    const std::size_t n_modes = transform_.n_modes();
    const std::size_t keep = (2 * n_modes) / 3;
    if (transform_.dimension() == Dimension::one) {
      for (std::size_t n = keep; n < n_modes; ++n) out[n] = 0.0;
    } else {
      for (std::size_t n = 0; n < n_modes; ++n) {
        for (std::size_t m = 0; m < n_modes; ++m) {
          if (n >= keep || m >= keep) out[n * n_modes + m] = 0.0;
        }
      }
    }
  }
}

SpectralField nemytskii_apply(const SpectralField& field, const Nonlinearity& nonlinearity,
                              NemytskiiOptions options) {
  NemytskiiOperator op(field.dimension(), field.n_modes(), nonlinearity, options);
  SpectralField out(field.dimension(), field.n_modes());
  op.apply(field.coefficients(), out.coefficients());
  return out;
}

}  // namespace spde
