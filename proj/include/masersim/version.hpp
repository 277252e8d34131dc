#pragma once

namespace masersim {

inline constexpr const char* kVersion = "0.1.0";

} // namespace masersim
