#pragma once

// Sine eigenbasis of the Dirichlet Laplacian on (0,1) and (0,1)^2.
//
// 1D basis functions are e_n(x) = sqrt(2) sin(n pi x), n = 1..N, with
// eigenvalues kappa n^2 pi^2. The 2D basis is the tensor product
// e_{n,m}(x1, x2) = 2 sin(n pi x1) sin(m pi x2) with eigenvalues
// kappa pi^2 (n^2 + m^2). 2D coefficients are stored row-major, n outer.
//
// Collocation uses the DST-I grid x_j = j / (N + 1), j = 1..N per axis.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace spde {

enum class Dimension : int { one = 1, two = 2 };

/// Number of stored coefficients for N modes per axis.
constexpr std::size_t mode_count(Dimension dim, std::size_t n_modes) noexcept {
  return dim == Dimension::one ? n_modes : n_modes * n_modes;
}

/// Eigenvalues in storage order. Throws InvalidArgument for kappa <= 0 or N == 0.
std::vector<double> eigenvalues(double kappa, std::size_t n_modes, Dimension dim);

class SineBasis {
 public:
  SineBasis(Dimension dim, double kappa, std::size_t n_modes);

  Dimension dimension() const noexcept { return dim_; }
  double kappa() const noexcept { return kappa_; }
  std::size_t n_modes() const noexcept { return n_modes_; }
  std::size_t size() const noexcept { return eigenvalues_.size(); }
  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }

 private:
  Dimension dim_;
  double kappa_;
  std::size_t n_modes_;
  std::vector<double> eigenvalues_;
};

/// Coefficients of a function in the sine eigenbasis.
class SpectralField {
 public:
  SpectralField(Dimension dim, std::size_t n_modes);
  SpectralField(Dimension dim, std::size_t n_modes, std::vector<double> coefficients);

  Dimension dimension() const noexcept { return dim_; }
  std::size_t n_modes() const noexcept { return n_modes_; }
  std::size_t size() const noexcept { return coefficients_.size(); }

  std::span<const double> coefficients() const noexcept { return coefficients_; }
  std::span<double> coefficients() noexcept { return coefficients_; }

  double operator[](std::size_t i) const { return coefficients_[i]; }
  double& operator[](std::size_t i) { return coefficients_[i]; }

  /// 1-based mode access; m is ignored in 1D.
  double mode(std::size_t n, std::size_t m = 1) const;

  /// L^2 norm of the represented function (Parseval: Euclidean norm of coefficients).
  double h_norm() const noexcept;

  bool all_finite() const noexcept;

  friend bool operator==(const SpectralField&, const SpectralField&) = default;

 private:
  Dimension dim_;
  std::size_t n_modes_;
  std::vector<double> coefficients_;
};

/// Function values on the interior collocation grid (boundary values are zero).
class CollocationGrid {
 public:
  CollocationGrid(Dimension dim, std::size_t n_points);
  CollocationGrid(Dimension dim, std::size_t n_points, std::vector<double> values);

  Dimension dimension() const noexcept { return dim_; }
  std::size_t n_points() const noexcept { return n_points_; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// Interior points j / (N + 1), j = 1..N, along one axis.
  std::vector<double> points() const;

  static double point(std::size_t j, std::size_t n_points) noexcept {
    return static_cast<double>(j) / static_cast<double>(n_points + 1);
  }

 private:
  Dimension dim_;
  std::size_t n_points_;
  std::vector<double> values_;
};

namespace detail {
struct SinePlan;
}

/// DST-I based synthesis/analysis for a fixed (dimension, N). Copies share the
/// underlying FFTW plan; execution is safe from multiple threads.
class SineTransform {
 public:
  SineTransform(Dimension dim, std::size_t n_modes);

  Dimension dimension() const noexcept { return dim_; }
  std::size_t n_modes() const noexcept { return n_modes_; }
  std::size_t size() const noexcept { return mode_count(dim_, n_modes_); }

  /// values[j] = sum_n c_n e_n(x_j). Spans must have size() entries and may alias.
  void synthesize(std::span<const double> coefficients, std::span<double> values) const;
  /// Exact inverse of synthesize on the collocation grid.
  void analyze(std::span<const double> values, std::span<double> coefficients) const;

 private:
  void execute(std::span<const double> in, std::span<double> out, double scale) const;

  Dimension dim_;
  std::size_t n_modes_;
  std::shared_ptr<const detail::SinePlan> plan_;
};

CollocationGrid synthesize(const SpectralField& field);
SpectralField analyze(const CollocationGrid& grid);

/// Galerkin projection onto n_target modes per axis: truncates or zero-pads.
SpectralField project(const SpectralField& field, std::size_t n_target);

/// ||a - b||_H in coefficient space, zero-padding the coarser field.
double h_distance(const SpectralField& a, const SpectralField& b);

}  // namespace spde
