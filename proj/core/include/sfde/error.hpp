#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace sfde {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (e.g. gamma(x <= 0)).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or precondition violation on an operation's inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An iterative evaluation failed to reach its accuracy target.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A state component became non-finite or exceeded the blow-up bound.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t node, std::optional<std::size_t> path = std::nullopt)
      : Error(what), node_(node), path_(path) {}

  std::size_t node() const noexcept { return node_; }
  std::optional<std::size_t> path() const noexcept { return path_; }

 private:
  std::size_t node_;
  std::optional<std::size_t> path_;
};

}  // namespace sfde
