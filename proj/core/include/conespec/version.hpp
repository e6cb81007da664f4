#pragma once

namespace conespec {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace conespec
