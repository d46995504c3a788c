#pragma once

#include <stdexcept>

namespace dlab {

/// A model produced values outside its own contract (e.g. a non-positive gap).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to reach its stated accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dlab
