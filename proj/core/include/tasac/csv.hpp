#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace tasac {

/// Shortest round-trip-exact double formatting, shared by every file writer:
/// the printed text parses back to the identical bits, and identical values
/// always print identically, so emitted files diff cleanly.
inline std::string csv_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace tasac
