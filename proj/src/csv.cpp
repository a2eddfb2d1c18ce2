#include "nlab/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace nlab::csv {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    // try 15 digits first so simple values stay readable, fall back to 17
    std::snprintf(buf, sizeof buf, "%.15g", v);
    if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string boolean(bool v) { return v ? "true" : "false"; }

std::string join(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    return out;
}

}  // namespace nlab::csv
