#include "conespec/error.hpp"

namespace conespec {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Bracket: return "bracket";
    case ErrorKind::BranchJump: return "branch_jump";
    case ErrorKind::Inconclusive: return "inconclusive";
    case ErrorKind::NoiseFloor: return "noise_floor";
    case ErrorKind::Refusal: return "refusal";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace conespec
