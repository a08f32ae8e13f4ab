#pragma once

namespace najulia {

inline constexpr const char* kVersion = "0.1.0";

} // namespace najulia
