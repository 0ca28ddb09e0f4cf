#pragma once

#include <stdexcept>
#include <string>

namespace rootops {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction request (unsupported family/rank/kind combination,
/// dimension mismatch, bad flag value).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Evaluation hit a pole: a denominator magnitude fell below the guard
/// threshold. Carries the node kind that triggered it.
class PoleError : public Error {
 public:
  PoleError(std::string node_kind, const std::string& what)
      : Error(what), node_kind_(std::move(node_kind)) {}
  const std::string& node_kind() const { return node_kind_; }

 private:
  std::string node_kind_;
};

/// Interior-point sampling exhausted its rejection budget.
class SamplingError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized expression or config file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace rootops
