#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include "bates/errors.hpp"

namespace bates {

// Shortest round-trippable decimal form (17 significant digits).
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open output file: " + path);
    os << text;
}

} // namespace bates
