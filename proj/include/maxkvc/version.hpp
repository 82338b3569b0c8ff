#pragma once

namespace maxkvc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace maxkvc
