#pragma once

namespace ranknorm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ranknorm
