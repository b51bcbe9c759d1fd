#include "qafold/errors.hpp"

namespace qafold {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::encoding: return "encoding";
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::plan: return "plan";
    case ErrorKind::penalty: return "penalty";
    case ErrorKind::embedding: return "embedding";
    case ErrorKind::stage: return "stage";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::capacity: return 3;
    case ErrorKind::stage:
    case ErrorKind::embedding: return 4;
    default: return 2;
  }
}

}  // namespace qafold
