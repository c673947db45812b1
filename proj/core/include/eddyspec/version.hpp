#pragma once

namespace eddyspec {
inline constexpr const char* kVersion = "0.1.0";
}
