#pragma once

namespace funtf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace funtf
