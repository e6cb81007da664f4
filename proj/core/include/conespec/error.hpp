#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace conespec {

enum class ErrorKind {
  Domain,        // argument outside an operation's precondition
  Pole,          // gamma at a nonpositive integer
  Convergence,   // series or iteration budget exhausted
  Bracket,       // no sign change / scan exhausted
  BranchJump,    // ambiguous continuation window
  Inconclusive,  // numerical classification within noise
  NoiseFloor,    // data too close to double-precision floor
  Refusal,       // deliberate precondition refusal (e.g. sharpness for beta <= pi/2)
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures of a numerical procedure rather than of its inputs.
  bool numerical() const noexcept {
    return kind_ != ErrorKind::Domain && kind_ != ErrorKind::Refusal &&
           kind_ != ErrorKind::Pole;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::Domain, what);
}

}  // namespace conespec
