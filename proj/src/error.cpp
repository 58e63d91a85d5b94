#include "crapper/error.hpp"

namespace crapper {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonZeroMean: return "NonZeroMean";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::SelfIntersecting: return "SelfIntersecting";
    case ErrorKind::OriginOnCurve: return "OriginOnCurve";
    case ErrorKind::CurvesTooClose: return "CurvesTooClose";
    case ErrorKind::DegeneratePatch: return "DegeneratePatch";
    case ErrorKind::PatchTouchesBoundary: return "PatchTouchesBoundary";
    case ErrorKind::DegenerateParametrization: return "DegenerateParametrization";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::InnerNotConverged: return "InnerNotConverged";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::VersionError: return "VersionError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Error";
}

}  // namespace crapper
