#pragma once

#include <string_view>

#include "certus/fuzzy.hpp"

namespace certus {

/// Reads a ladder override: a mapping from each of the seven canonical names
/// to a set literal such as "trapezoid(0.5, 0.6, 0.8, 0.9)" or a list of
/// [x, mu] breakpoints. YAML or JSON. Throws DocumentError.
Ladder load_ladder(std::string_view source);

}  // namespace certus
