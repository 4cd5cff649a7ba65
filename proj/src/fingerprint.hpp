#pragma once

// Internal helpers shared by the grammar passes.

#include <cstdint>
#include <vector>

#include "excesslex/grammar.hpp"

namespace excesslex::detail {

inline std::uint64_t digram_key(Symbol a, Symbol b) {
  // Injective while code points and rule ids stay below 2^31.
  return (a.key() << 32) | b.key();
}

// Polynomial hash modulo the Mersenne prime 2^61 - 1.
class Mod61 {
 public:
  static constexpr std::uint64_t kMod = (std::uint64_t{1} << 61) - 1;
  static constexpr std::uint64_t kBase = 1'000'003;

  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    __extension__ using U128 = unsigned __int128;
    const U128 p = static_cast<U128>(a) * b;
    std::uint64_t r = static_cast<std::uint64_t>(p & kMod) + static_cast<std::uint64_t>(p >> 61);
    if (r >= kMod) r -= kMod;
    return r;
  }
  static std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = a + b;
    if (r >= kMod) r -= kMod;
    return r;
  }
  static std::uint64_t pow(std::uint64_t base, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }
};

struct Fingerprint {
  std::size_t length = 0;
  std::uint64_t hash = 0;
  std::uint64_t power = 1;  // kBase^length
};

// Hash of each rule's terminal expansion, computed bottom-up without
// materialising the expansions.
inline std::vector<Fingerprint> expansion_fingerprints(const Grammar& grammar) {
  std::vector<Fingerprint> fp(grammar.rule_count());
  for (RuleId id : topological_order(grammar)) {
    Fingerprint acc;
    for (const Symbol& s : grammar.rule(id)) {
      if (s.is_terminal()) {
        acc.hash = Mod61::add(Mod61::mul(acc.hash, Mod61::kBase), static_cast<std::uint64_t>(s.code_point()) + 1);
        acc.power = Mod61::mul(acc.power, Mod61::kBase);
        acc.length += 1;
      } else {
        const Fingerprint& c = fp[s.rule()];
        acc.hash = Mod61::add(Mod61::mul(acc.hash, c.power), c.hash);
        acc.power = Mod61::mul(acc.power, c.power);
        acc.length += c.length;
      }
    }
    fp[id] = acc;
  }
  return fp;
}

}  // namespace excesslex::detail
