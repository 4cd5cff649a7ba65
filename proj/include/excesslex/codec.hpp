#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "excesslex/grammar.hpp"
#include "excesslex/infer.hpp"

namespace excesslex {

// Bit stream written most significant bit first and zero-padded to a whole
// byte. `length_bits` counts the bits before the padding.
struct BinaryCode {
  std::vector<std::uint8_t> bytes;
  std::size_t length_bits = 0;

  bool operator==(const BinaryCode&) const = default;
};

// Layout, after canonicalization:
//   "GBC1" (32 bits)
//   varint alphabet size, then each code point in ascending order as a varint
//   varint rule count
//   per rule: varint symbol count, then per symbol one flag bit
//             (1 = terminal, 0 = nonterminal) and a varint index
//             (rank in the alphabet, or rule id)
// A varint is a little-endian sequence of 7-bit groups, each written as an
// 8-bit unit whose top bit marks that another group follows.
BinaryCode encode(const Grammar& grammar);

// Inverse of encode. The result is canonical. Throws Error(malformed_code)
// with the byte offset of the first violation, including nonzero padding,
// trailing bytes and non-minimal varints.
Grammar decode(std::span<const std::uint8_t> bytes);
inline Grammar decode(const BinaryCode& code) { return decode(code.bytes); }

// c in the diagnostic bound bits <= ||G|| * (c + log2 ||G||), measured as the
// maximum over the codec test suite (grammars up to ~10^5 symbols). The
// maximum, 89, comes from a one-symbol grammar over U+10FFFD. Varint indices
// grow like (8/7) log2 ||G||, so this is an empirical constant, not a bound
// for arbitrarily large grammars.
inline constexpr double kGammaConstant = 89.0;

double gamma_bound_bits(std::size_t grammar_length, double c = kGammaConstant);

struct CodeLengthReport {
  std::size_t input_length = 0;
  std::size_t code_length_bits = 0;
  std::size_t grammar_length = 0;
  double bits_per_character = 0.0;
  double gamma_bound_bits = 0.0;
};

// Infers a grammar with `algorithm`, encodes it and reports the lengths.
CodeLengthReport code_length_report(std::u32string_view text, Algorithm algorithm);

// Length in bits of the code for `text` under `algorithm`.
std::size_t code_length_bits(std::u32string_view text, Algorithm algorithm);

}  // namespace excesslex
