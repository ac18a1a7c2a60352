#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcrate {

/// Base of every error raised by the library. The CLI maps the category
/// to its exit code.
class Error : public std::runtime_error {
 public:
  enum class Category { Config, Numerical };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(Category::Numerical, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(Category::Config, what) {}
};

// linear algebra
class ShapeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonFiniteError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DefinitenessError : public NumericalError {
 public:
  DefinitenessError(const std::string& what, std::size_t pivot)
      : NumericalError(what), pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class SingularityError : public NumericalError {
 public:
  SingularityError(const std::string& what, std::size_t index)
      : NumericalError(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class SymmetryError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// problems
class DegenerateInstanceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OracleFailureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnsupportedConfigurationError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class SpecError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// framework / algorithms / schedules / bench
class WeightError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class RankError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ScheduleError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InsufficientDataError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace pcrate
