#pragma once

#include <stdexcept>
#include <string>

namespace sis {

/// Base for every error raised by the library. `category()` drives the
/// CLI exit code: argument errors exit 1, data errors 2, numerical 3.
class Error : public std::runtime_error {
 public:
  enum class Category { argument, data, numerical };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what)
      : Error(Category::argument, what) {}
};

/// Response or covariate value outside the family's support.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(Category::data, what) {}
};

/// Mean on or outside the boundary of the range of b'.
class BoundaryError : public Error {
 public:
  explicit BoundaryError(const std::string& what)
      : Error(Category::data, what) {}
};

/// Constant covariate column; the slope is unidentified.
class DegenerateFeatureError : public Error {
 public:
  DegenerateFeatureError(const std::string& what, long column)
      : Error(Category::data, what), column_(column) {}
  long column() const noexcept { return column_; }

 private:
  long column_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(Category::data, what) {}
};

/// exp(theta) would overflow (Poisson with theta above the clamp).
class SaturationError : public Error {
 public:
  explicit SaturationError(const std::string& what)
      : Error(Category::numerical, what) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what)
      : Error(Category::numerical, what) {}
};

}  // namespace sis
