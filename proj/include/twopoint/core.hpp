#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace twopoint {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Tolerances shared across modules.
namespace tol {
inline constexpr double kPole = 1e-12;        // rejection distance from a pole
inline constexpr double kCritical = 1e-12;    // |f'| below this is a critical point
inline constexpr double kCluster = 1e-7;      // root clustering radius
inline constexpr double kCommonRoot = 1e-9;   // numerator/denominator root separation
inline constexpr double kBoundaryGuard = 1e-6;
inline constexpr double kSlack = -1e-10;      // "inequality holds" threshold
}  // namespace tol

enum class ErrorKind {
  PoleAtPoint,
  CriticalPoint,
  DegenerateEquation,
  InvalidMap,
  CoincidentPoints,
  UnsupportedDomain,
  DegeneratePair,
  ZeroParameter,
  CoincidentImages,
  ParameterOutOfRange,
  DuplicatePoints,
  ContinuationFailed,
  PlateOverlap,
  PlateOutsideDomain,
  PlateOnAxis,
  GridTooCoarse,
  BudgetExhausted,
  RadiusTooLarge,
  InvalidInput,
  IoError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PoleAtPoint: return "PoleAtPoint";
    case ErrorKind::CriticalPoint: return "CriticalPoint";
    case ErrorKind::DegenerateEquation: return "DegenerateEquation";
    case ErrorKind::InvalidMap: return "InvalidMap";
    case ErrorKind::CoincidentPoints: return "CoincidentPoints";
    case ErrorKind::UnsupportedDomain: return "UnsupportedDomain";
    case ErrorKind::DegeneratePair: return "DegeneratePair";
    case ErrorKind::ZeroParameter: return "ZeroParameter";
    case ErrorKind::CoincidentImages: return "CoincidentImages";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::DuplicatePoints: return "DuplicatePoints";
    case ErrorKind::ContinuationFailed: return "ContinuationFailed";
    case ErrorKind::PlateOverlap: return "PlateOverlap";
    case ErrorKind::PlateOutsideDomain: return "PlateOutsideDomain";
    case ErrorKind::PlateOnAxis: return "PlateOnAxis";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::RadiusTooLarge: return "RadiusTooLarge";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Pseudo-hyperbolic distance |z1 - z2| / |1 - conj(z1) z2|.
inline double pseudo_distance(Complex z1, Complex z2) {
  return std::abs(z1 - z2) / std::abs(1.0 - std::conj(z1) * z2);
}

}  // namespace twopoint
