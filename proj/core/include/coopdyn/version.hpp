#pragma once

namespace coopdyn {

inline constexpr const char* kVersion = "0.1.0";

} // namespace coopdyn
