#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace curvflow {

// Every failure the library reports derives from Error so callers (the CLI in
// particular) can map them to exit codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class SizeGuardError : public Error {
 public:
  using Error::Error;
};

class FluxQuantizationError : public Error {
 public:
  using Error::Error;
};

class OutOfScopeError : public Error {
 public:
  using Error::Error;
};

class NotApplicableError : public Error {
 public:
  using Error::Error;
};

class StepFailureError : public Error {
 public:
  using Error::Error;
};

class QuantizationViolationError : public Error {
 public:
  using Error::Error;
};

/// Raised when a plaquette holonomy has an eigenvalue too close to -1 for the
/// principal logarithm to be trusted.
class CurvatureExtractionError : public Error {
 public:
  CurvatureExtractionError(std::size_t face, double angle)
      : Error("curvature extraction failed at face " + std::to_string(face) +
              ": holonomy eigen-angle " + std::to_string(angle) +
              " rad is within the branch-cut guard band"),
        face_(face),
        angle_(angle) {}

  std::size_t face() const noexcept { return face_; }
  double angle() const noexcept { return angle_; }

 private:
  std::size_t face_;
  double angle_;
};

}  // namespace curvflow
