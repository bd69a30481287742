#pragma once

namespace cazsl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cazsl
