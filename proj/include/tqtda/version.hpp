#pragma once

namespace tqtda {
inline constexpr const char* kVersion = "0.1.0";
}
