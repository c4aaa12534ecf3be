#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rri {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kIriSpeed = 80.0 / 3.6;  // fixed reference speed, m/s

// Bad input data or precondition violation (CLI exit code 1).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure mid-computation, e.g. a singular solve (CLI exit code 2).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Execution policy for kernels that have an OpenMP path. Serial is the
// reference path; tests assert bitwise-equal outputs between the two.
enum class Exec { Serial, Parallel };

// Shortest-g float formatting used by every CSV writer ("%.9g").
std::string format_g9(double v);

}  // namespace rri
