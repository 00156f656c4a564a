#pragma once

namespace gprank {

inline constexpr const char* kVersion = "0.1.0";

} // namespace gprank
