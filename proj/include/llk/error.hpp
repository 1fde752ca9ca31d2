#pragma once

#include <stdexcept>
#include <string>

namespace llk {

// Input outside the mathematical domain of an operation (bad parameter,
// invalid distribution, dimension mismatch).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The operation exists but is not defined for this kind (Heaviside
// derivative, scalar evaluation of CReLU).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Non-finite values produced during an iterative procedure.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  long iteration() const noexcept { return iteration_; }

 private:
  long iteration_;
};

// Malformed external input (CSV tables, model files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace llk
