#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spde {

/// Bad caller input: nonpositive sizes, unknown names, mismatched shapes.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A nonlinearity produced a non-finite value at a collocation point.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::size_t grid_index)
      : std::runtime_error(what), grid_index_(grid_index) {}

  std::size_t grid_index() const noexcept { return grid_index_; }

 private:
  std::size_t grid_index_;
};

/// A time stepper produced a non-finite coefficient.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Invariant violation inside the library (e.g. a non-PSD covariance).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A Monte Carlo study failed; names the realization and level involved.
class StudyError : public std::runtime_error {
 public:
  StudyError(const std::string& what, std::size_t realization,
             std::size_t level_modes, std::size_t level_steps)
      : std::runtime_error(what),
        realization_(realization),
        level_modes_(level_modes),
        level_steps_(level_steps) {}

  std::size_t realization() const noexcept { return realization_; }
  std::size_t level_modes() const noexcept { return level_modes_; }
  std::size_t level_steps() const noexcept { return level_steps_; }

 private:
  std::size_t realization_;
  std::size_t level_modes_;
  std::size_t level_steps_;
};

}  // namespace spde
