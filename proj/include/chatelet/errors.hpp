#pragma once

#include <stdexcept>
#include <string>

namespace chatelet {

// Every error raised by the library derives from one of the std exception
// families so callers can catch broadly; the CLI maps the concrete types to
// exit codes.

/// A checked 128-bit (or 64-bit) computation would have wrapped.
class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// An enumeration was asked to visit more points than its budget allows.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid positivity certification stayed inconclusive at maximum refinement.
class CertificationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The instance violates a hypothesis (reducible cubic, non-positive form
/// value inside the region, boundary bound).
class InstanceInvalid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Form values at the requested dilation no longer fit the 64-bit fast path.
class ScaleLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed instance file (missing key, wrong shape, non-integer entry).
class InstanceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chatelet
