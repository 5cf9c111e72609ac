#pragma once

namespace dplab {
inline constexpr const char* kVersion = "0.1.0";
}
