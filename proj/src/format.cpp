#include "certus/format.hpp"

#include <array>
#include <charconv>

namespace certus {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // also folds -0
  std::array<char, 400> buffer{};
  auto [end, ec] =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value, std::chars_format::fixed);
  return std::string(buffer.data(), end);
}

}  // namespace certus
