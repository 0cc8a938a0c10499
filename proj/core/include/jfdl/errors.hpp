#pragma once

#include <stdexcept>
#include <string>

namespace jfdl {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A Solution violates one of the structural constraints of its Instance.
class InvalidSolutionError : public Error {
 public:
  using Error::Error;
};

/// An operation needs planar coordinates but the instance has none.
class MissingCoordinatesError : public Error {
 public:
  using Error::Error;
};

/// Sum of equality/lower regional bounds exceeds the total demand, so the
/// regional gadget cannot be built for any facility set.
class GadgetInfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Enumeration-based solver refused because the search space exceeds its cap.
class InstanceTooLargeError : public Error {
 public:
  using Error::Error;
};

/// Random facility initialization failed to find a feasible subset within
/// the retry cap.
class NoFeasibleInitializationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (instance JSON, point CSV, cost CSV, ...).
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace jfdl
