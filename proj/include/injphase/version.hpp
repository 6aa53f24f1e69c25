#pragma once

namespace injphase {
inline constexpr const char* kVersion = "0.1.0";
}
