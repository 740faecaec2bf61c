#include "spde/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "spde/errors.hpp"

namespace spde {

namespace {

void require_modes(std::size_t n_modes, const char* what) {
  if (n_modes < 1) {
    throw InvalidArgument(std::string(what) + ": mode count must be at least 1");
  }
}

}  // namespace

std::vector<double> eigenvalues(double kappa, std::size_t n_modes, Dimension dim) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw InvalidArgument("eigenvalues: kappa must be positive and finite");
  }
  require_modes(n_modes, "eigenvalues");
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  std::vector<double> out;
  out.reserve(mode_count(dim, n_modes));
  if (dim == Dimension::one) {
    for (std::size_t n = 1; n <= n_modes; ++n) {
      const double nn = static_cast<double>(n);
      out.push_back(kappa * nn * nn * pi2);
    }
  } else {
    for (std::size_t n = 1; n <= n_modes; ++n) {
      for (std::size_t m = 1; m <= n_modes; ++m) {
        const double nn = static_cast<double>(n);
        const double mm = static_cast<double>(m);
        out.push_back(kappa * pi2 * (nn * nn + mm * mm));
      }
    }
  }
  return out;
}

SineBasis::SineBasis(Dimension dim, double kappa, std::size_t n_modes)
    : dim_(dim), kappa_(kappa), n_modes_(n_modes), eigenvalues_(spde::eigenvalues(kappa, n_modes, dim)) {}

SpectralField::SpectralField(Dimension dim, std::size_t n_modes)
    : dim_(dim), n_modes_(n_modes), coefficients_(mode_count(dim, n_modes), 0.0) {
  require_modes(n_modes, "SpectralField");
}

SpectralField::SpectralField(Dimension dim, std::size_t n_modes, std::vector<double> coefficients)
    : dim_(dim), n_modes_(n_modes), coefficients_(std::move(coefficients)) {
  require_modes(n_modes, "SpectralField");
  if (coefficients_.size() != mode_count(dim, n_modes)) {
    throw InvalidArgument("SpectralField: coefficient count " + std::to_string(coefficients_.size()) +
                          " does not match " + std::to_string(mode_count(dim, n_modes)) + " modes");
  }
}

double SpectralField::mode(std::size_t n, std::size_t m) const {
  if (n < 1 || n > n_modes_ || (dim_ == Dimension::two && (m < 1 || m > n_modes_))) {
    throw InvalidArgument("SpectralField::mode: index out of range");
  }
  return dim_ == Dimension::one ? coefficients_[n - 1] : coefficients_[(n - 1) * n_modes_ + (m - 1)];
}

double SpectralField::h_norm() const noexcept {
  double sum = 0.0;
  for (double c : coefficients_) sum += c * c;
  return std::sqrt(sum);
}

bool SpectralField::all_finite() const noexcept {
  return std::all_of(coefficients_.begin(), coefficients_.end(), [](double c) { return std::isfinite(c); });
}

CollocationGrid::CollocationGrid(Dimension dim, std::size_t n_points)
    : dim_(dim), n_points_(n_points), values_(mode_count(dim, n_points), 0.0) {
  require_modes(n_points, "CollocationGrid");
}

CollocationGrid::CollocationGrid(Dimension dim, std::size_t n_points, std::vector<double> values)
    : dim_(dim), n_points_(n_points), values_(std::move(values)) {
  require_modes(n_points, "CollocationGrid");
  if (values_.size() != mode_count(dim, n_points)) {
    throw InvalidArgument("CollocationGrid: value count does not match grid size");
  }
}

std::vector<double> CollocationGrid::points() const {
  std::vector<double> out(n_points_);
  for (std::size_t j = 1; j <= n_points_; ++j) out[j - 1] = point(j, n_points_);
  return out;
}

namespace detail {

// In-place RODFT00 plan. FFTW's RODFT00 computes Y_k = 2 sum_j X_j sin(pi (j+1)(k+1) / (n+1))
// along each transformed axis.
struct SinePlan {
  fftw_plan plan = nullptr;

  SinePlan() = default;
  SinePlan(const SinePlan&) = delete;
  SinePlan& operator=(const SinePlan&) = delete;
  ~SinePlan() {
    if (plan != nullptr) fftw_destroy_plan(plan);
  }
};

}  // namespace detail

namespace {

std::shared_ptr<const detail::SinePlan> cached_plan(Dimension dim, std::size_t n) {
  // FFTW's planner is not thread-safe; plan execution is.
  static std::mutex mutex;
  static std::map<std::pair<int, std::size_t>, std::shared_ptr<const detail::SinePlan>> cache;

  std::lock_guard lock(mutex);
  const auto key = std::make_pair(static_cast<int>(dim), n);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const std::size_t total = mode_count(dim, n);
  double* scratch = fftw_alloc_real(total);
  auto plan = std::make_shared<detail::SinePlan>();
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  const int ni = static_cast<int>(n);
  if (dim == Dimension::one) {
    plan->plan = fftw_plan_r2r_1d(ni, scratch, scratch, FFTW_RODFT00, flags);
  } else {
    plan->plan = fftw_plan_r2r_2d(ni, ni, scratch, scratch, FFTW_RODFT00, FFTW_RODFT00, flags);
  }
  fftw_free(scratch);
  if (plan->plan == nullptr) throw InternalError("SineTransform: FFTW failed to create a DST-I plan");
  cache.emplace(key, plan);
  return plan;
}

}  // namespace

SineTransform::SineTransform(Dimension dim, std::size_t n_modes) : dim_(dim), n_modes_(n_modes) {
  require_modes(n_modes, "SineTransform");
  plan_ = cached_plan(dim, n_modes);
}

void SineTransform::execute(std::span<const double> in, std::span<double> out, double scale) const {
  if (in.size() != size() || out.size() != size()) {
    throw InvalidArgument("SineTransform: span size does not match transform size");
  }
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  fftw_execute_r2r(plan_->plan, out.data(), out.data());
  for (double& v : out) v *= scale;
}

void SineTransform::synthesize(std::span<const double> coefficients, std::span<double> values) const {
  // 1D: sqrt(2) sum c_n sin = (sqrt(2)/2) RODFT00.  2D: 2 sum c sin sin = (2/4) RODFT00.
  const double scale = dim_ == Dimension::one ? std::numbers::sqrt2 / 2.0 : 0.5;
  execute(coefficients, values, scale);
}

void SineTransform::analyze(std::span<const double> values, std::span<double> coefficients) const {
  const double np1 = static_cast<double>(n_modes_ + 1);
  const double scale =
      dim_ == Dimension::one ? 1.0 / (std::numbers::sqrt2 * np1) : 1.0 / (2.0 * np1 * np1);
  execute(values, coefficients, scale);
}

CollocationGrid synthesize(const SpectralField& field) {
  CollocationGrid grid(field.dimension(), field.n_modes());
  SineTransform(field.dimension(), field.n_modes()).synthesize(field.coefficients(), grid.values());
  return grid;
}

SpectralField analyze(const CollocationGrid& grid) {
  SpectralField field(grid.dimension(), grid.n_points());
  SineTransform(grid.dimension(), grid.n_points()).analyze(grid.values(), field.coefficients());
  return field;
}

SpectralField project(const SpectralField& field, std::size_t n_target) {
  if (n_target < 1) throw InvalidArgument("project: target mode count must be at least 1");
  SpectralField out(field.dimension(), n_target);
  const std::size_t shared = std::min(n_target, field.n_modes());
  if (field.dimension() == Dimension::one) {
    std::copy_n(field.coefficients().begin(), shared, out.coefficients().begin());
  } else {
    for (std::size_t n = 0; n < shared; ++n) {
      for (std::size_t m = 0; m < shared; ++m) {
        out[n * n_target + m] = field[n * field.n_modes() + m];
      }
    }
  }
  return out;
}

double h_distance(const SpectralField& a, const SpectralField& b) {
  if (a.dimension() != b.dimension()) throw InvalidArgument("h_distance: dimension mismatch");
  const std::size_t n = std::max(a.n_modes(), b.n_modes());
  const SpectralField pa = a.n_modes() == n ? a : project(a, n);
  const SpectralField pb = b.n_modes() == n ? b : project(b, n);
  double sum = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = pa[i] - pb[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace spde
