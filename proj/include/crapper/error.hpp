#pragma once

#include <stdexcept>
#include <string>

namespace crapper {

enum class ErrorKind {
  NonZeroMean,
  OutOfDomain,
  OutOfRange,
  GridMismatch,
  SingularSystem,
  SelfIntersecting,
  OriginOnCurve,
  CurvesTooClose,
  DegeneratePatch,
  PatchTouchesBoundary,
  DegenerateParametrization,
  NoConvergence,
  SingularJacobian,
  InnerNotConverged,
  NoBracket,
  VersionError,
  IoError,
  InvalidInput,
};

const char* to_string(ErrorKind kind);

// Every failure in the library is reported through this type; callers
// switch on kind() instead of catching a hierarchy.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace crapper
