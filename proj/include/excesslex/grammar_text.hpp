#pragma once

#include <string>
#include <string_view>

#include "excesslex/grammar.hpp"

namespace excesslex {

// Line-oriented interchange format, UTF-8, one rule per line, R0 first:
//
//   R0 -> R1 "ab" R2
//   R1 -> "x\"y"
//
// Consecutive terminals are written as one double-quoted run; inside a run
// only `"`, `\` and newline are escaped (as \", \\ and \n).
std::string to_text(const Grammar& grammar);

// Throws Error(parse_error) with the byte offset of the first problem.
Grammar parse_grammar_text(std::string_view text);

}  // namespace excesslex
