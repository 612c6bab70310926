#pragma once

namespace obstacle {

inline constexpr const char* kVersion = "0.1.0";

} // namespace obstacle
