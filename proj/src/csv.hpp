#pragma once

#include <cstdio>
#include <string>

namespace barker {

/// Shortest round-trippable decimal text for a double.  All numeric CSV
/// output goes through this so files are byte-stable across runs.
inline void append_double(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

inline std::string format_double(double v) {
    std::string s;
    append_double(s, v);
    return s;
}

/// Writes a whole file at once; throws on failure.
void write_file(const std::string& path, const std::string& contents);

}  // namespace barker
