#pragma once

#include <string>
#include <string_view>

namespace excesslex::utf8 {

// Strict decoder: rejects overlong forms, surrogates and values above
// U+10FFFF. Throws Error(invalid_encoding) with the offending byte offset.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

}  // namespace excesslex::utf8
