#include "stratmc/format.hpp"

#include <array>
#include <charconv>
#include <string>

#include "stratmc/error.hpp"

namespace stratmc {

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return {buf.data(), res.ptr};
}

double parse_double(std::string_view text) {
  double x = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, x);
  if (res.ec != std::errc{} || res.ptr != last || first == last)
    throw Error(ErrorCode::ConfigInvalid, "not a number: '" + std::string(text) + "'");
  return x;
}

}  // namespace stratmc
