#ifndef PTOSC_ERRORS_HPP
#define PTOSC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ptosc {

// Error taxonomy used across the library. The CLI maps these onto exit codes:
// usage-type errors -> 2, numerical/domain errors -> 3, I/O errors -> 4.

struct InvalidArgument : std::invalid_argument {
  explicit InvalidArgument(const std::string& msg) : std::invalid_argument(msg) {}
};

struct Unsupported : std::invalid_argument {
  explicit Unsupported(const std::string& msg) : std::invalid_argument(msg) {}
};

struct OverflowError : std::runtime_error {
  explicit OverflowError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalFailure : std::runtime_error {
  explicit NumericalFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct RangeTooSmall : std::runtime_error {
  explicit RangeTooSmall(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested impurity frequency lies outside the existence window of the
// localized mode.
struct NoPseudoBoundState : std::runtime_error {
  explicit NoPseudoBoundState(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ptosc

#endif
