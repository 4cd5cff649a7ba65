#pragma once

#include <string_view>

#include "excesslex/grammar.hpp"

namespace excesslex::detail {

// Raw SEQUITUR output before the reduction pass.
Grammar sequitur_grammar(std::u32string_view text);

// Raw Re-Pair output before the reduction pass.
Grammar repair_grammar(std::u32string_view text);

}  // namespace excesslex::detail
