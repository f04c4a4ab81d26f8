#pragma once

#include <string>
#include <string_view>

namespace stratmc {

/// Shortest round-trip text is not used on purpose: every value is written with
/// exactly 17 significant digits so tables line up across platforms.
std::string format_double(double x);

/// Parses the whole of `text` as a double. Throws ConfigInvalid.
double parse_double(std::string_view text);

}  // namespace stratmc
