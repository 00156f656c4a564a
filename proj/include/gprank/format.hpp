#pragma once

#include <cstdio>
#include <string>

namespace gprank {

// Shortest-form float text with fixed precision; used everywhere a double is
// written to CSV or a label so reruns produce identical bytes.
inline std::string fmt_g(double value, int precision = 12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    return buf;
}

} // namespace gprank
