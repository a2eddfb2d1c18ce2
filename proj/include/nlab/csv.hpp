// csv.hpp — deterministic number formatting for CSV/JSON output.
#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace nlab::csv {

/// Shortest round-trip representation ("%.17g"); NaN prints as "nan".
std::string num(double v);
std::string boolean(bool v);
std::string join(const std::vector<std::string>& cells);

}  // namespace nlab::csv
