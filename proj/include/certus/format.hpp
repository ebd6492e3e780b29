#pragma once

#include <string>

namespace certus {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

}  // namespace certus
