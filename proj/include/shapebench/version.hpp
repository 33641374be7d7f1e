#pragma once

namespace shapebench {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace shapebench
