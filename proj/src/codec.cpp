#include "excesslex/codec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "excesslex/error.hpp"

namespace excesslex {

namespace {

constexpr std::uint32_t kMagic = 0x47424331;  // "GBC1"
constexpr char32_t kMaxScalar = 0x10FFFF;

class BitWriter {
 public:
  void bit(bool b) {
    if (bits_ % 8 == 0) bytes_.push_back(0);
    if (b) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bits_ % 8));
    ++bits_;
  }

  void bits(std::uint64_t value, int width) {
    for (int i = width - 1; i >= 0; --i) bit((value >> i) & 1u);
  }

  void varint(std::uint64_t value) {
    do {
      const std::uint64_t group = value & 0x7f;
      value >>= 7;
      bits((value ? 0x80u : 0u) | group, 8);
    } while (value);
  }

  BinaryCode finish() && { return {std::move(bytes_), bits_}; }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bits_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_ / 8; }

  [[noreturn]] void fail(const std::string& what, std::size_t bit_pos) const {
    throw Error(ErrorCode::malformed_code, what, bit_pos / 8);
  }

  bool bit() {
    if (pos_ >= bytes_.size() * 8) fail("unexpected end of code", pos_);
    const bool b = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
    ++pos_;
    return b;
  }

  std::uint64_t bits(int width) {
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | (bit() ? 1u : 0u);
    return v;
  }

  std::uint64_t varint() {
    const std::size_t start = pos_;
    std::uint64_t value = 0;
    for (int shift = 0;; shift += 7) {
      if (shift > 56) fail("varint too long", start);
      const std::size_t at = pos_;
      const std::uint64_t unit = bits(8);
      const std::uint64_t group = unit & 0x7f;
      if (shift > 0 && group == 0 && !(unit & 0x80)) fail("non-minimal varint", at);
      value |= group << shift;
      if (!(unit & 0x80)) return value;
    }
  }

  void finish() {
    const std::size_t total = bytes_.size() * 8;
    if (total - pos_ >= 8) fail("trailing data after grammar", pos_);
    while (pos_ < total) {
      const std::size_t at = pos_;
      if (bit()) fail("nonzero padding", at);
    }
  }

  std::size_t position() const { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

BinaryCode encode(const Grammar& grammar) {
  const Grammar g = canonicalize(grammar);
  const std::set<char32_t> alphabet_set = g.alphabet();
  const std::vector<char32_t> alphabet(alphabet_set.begin(), alphabet_set.end());

  BitWriter out;
  out.bits(kMagic, 32);
  out.varint(alphabet.size());
  for (char32_t cp : alphabet) out.varint(cp);
  out.varint(g.rule_count());
  for (const Production& p : g.rules()) {
    out.varint(p.size());
    for (const Symbol& s : p) {
      out.bit(s.is_terminal());
      if (s.is_terminal()) {
        const auto rank = std::lower_bound(alphabet.begin(), alphabet.end(), s.code_point()) - alphabet.begin();
        out.varint(static_cast<std::uint64_t>(rank));
      } else {
        out.varint(s.rule());
      }
    }
  }
  return std::move(out).finish();
}

Grammar decode(std::span<const std::uint8_t> bytes) {
  BitReader in(bytes);
  if (in.bits(32) != kMagic) in.fail("bad magic", 0);

  std::size_t at = in.position();
  const std::uint64_t alphabet_size = in.varint();
  if (alphabet_size > kMaxScalar + 1) in.fail("alphabet too large", at);
  std::vector<char32_t> alphabet;
  for (std::uint64_t i = 0; i < alphabet_size; ++i) {
    at = in.position();
    const std::uint64_t cp = in.varint();
    if (cp > kMaxScalar || (cp >= 0xD800 && cp <= 0xDFFF)) in.fail("code point is not a Unicode scalar value", at);
    if (!alphabet.empty() && cp <= alphabet.back()) in.fail("alphabet not strictly ascending", at);
    alphabet.push_back(static_cast<char32_t>(cp));
  }

  at = in.position();
  const std::uint64_t rule_count = in.varint();
  if (rule_count == 0) in.fail("grammar without rules", at);
  // Every rule needs at least 9 bits, which bounds plausible counts.
  if (rule_count > bytes.size() * 8) in.fail("rule count exceeds code size", at);

  std::vector<Production> rules(rule_count);
  std::vector<bool> used(alphabet.size(), false);
  for (auto& p : rules) {
    at = in.position();
    const std::uint64_t length = in.varint();
    if (length == 0) in.fail("empty production", at);
    if (length > bytes.size() * 8) in.fail("production length exceeds code size", at);
    p.reserve(length);
    for (std::uint64_t k = 0; k < length; ++k) {
      const bool terminal = in.bit();
      at = in.position();
      const std::uint64_t index = in.varint();
      if (terminal) {
        if (index >= alphabet.size()) in.fail("terminal rank out of range", at);
        used[index] = true;
        p.push_back(Symbol::terminal(alphabet[index]));
      } else {
        if (index >= rule_count) in.fail("rule reference out of range", at);
        p.push_back(Symbol::nonterminal(static_cast<RuleId>(index)));
      }
    }
  }
  in.finish();
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    in.fail("alphabet lists an unused code point", 4);
  }

  Grammar g(std::move(rules));
  try {
    topological_order(g);
  } catch (const Error&) {
    in.fail("rule references form a cycle", in.position());
  }
  return canonicalize(g);
}

double gamma_bound_bits(std::size_t grammar_length, double c) {
  const double n = static_cast<double>(grammar_length);
  return n * (c + std::log2(n));
}

std::size_t code_length_bits(std::u32string_view text, Algorithm algorithm) {
  InferenceConfig config;
  config.algorithm = algorithm;
  return encode(infer(text, config)).length_bits;
}

CodeLengthReport code_length_report(std::u32string_view text, Algorithm algorithm) {
  if (text.empty()) throw Error(ErrorCode::empty_input, "code length of an empty text");
  InferenceConfig config;
  config.algorithm = algorithm;
  const Grammar g = infer(text, config);
  const BinaryCode code = encode(g);
  CodeLengthReport r;
  r.input_length = text.size();
  r.code_length_bits = code.length_bits;
  r.grammar_length = grammar_length(g);
  r.bits_per_character = static_cast<double>(code.length_bits) / static_cast<double>(text.size());
  r.gamma_bound_bits = gamma_bound_bits(r.grammar_length);
  return r;
}

}  // namespace excesslex
