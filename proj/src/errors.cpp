#include "cftspec/errors.hpp"

namespace cftspec {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InvalidModel: return "invalid-model";
    case ErrorKind::FusionIntegrality: return "fusion-integrality";
    case ErrorKind::InsufficientCutoff: return "insufficient-cutoff";
    case ErrorKind::NonElliptic: return "non-elliptic-data";
    case ErrorKind::UndefinedDimension: return "undefined-dimension";
    case ErrorKind::Inconsistency: return "inconsistency";
    case ErrorKind::WindowTooSmall: return "window-too-small";
    case ErrorKind::InvalidCover: return "invalid-cover";
    case ErrorKind::EmbeddingViolation: return "embedding-violation";
    case ErrorKind::RefinePath: return "refine-path";
    case ErrorKind::KindMismatch: return "kind-mismatch";
    case ErrorKind::IdentityViolation: return "identity-violation";
    case ErrorKind::NotSeparating: return "not-separating";
    case ErrorKind::Cocycle: return "cocycle-error";
    case ErrorKind::HypothesisViolation: return "hypothesis-violation";
  }
  return "unknown";
}

}  // namespace cftspec
