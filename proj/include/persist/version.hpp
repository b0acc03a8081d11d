#pragma once

namespace persist {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace persist
