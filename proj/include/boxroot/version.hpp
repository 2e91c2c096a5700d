#pragma once

namespace boxroot {
inline constexpr const char* kVersion = "0.1.0";
}
