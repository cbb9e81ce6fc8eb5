#pragma once

namespace dsi {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace dsi
