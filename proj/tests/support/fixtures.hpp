#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "excesslex/grammar.hpp"
#include "excesslex/grammar_text.hpp"
#include "excesslex/random.hpp"

namespace fixtures {

inline constexpr char32_t kWoodchuck[] = U"shouldawoodchuckchuckifawoodchuckcouldchuckwood";
inline constexpr char kWoodchuckSpaced[] = "should a woodchuck chuck if a woodchuck could chuck wood";

// Two-level grammar matching the orthographic words.
inline excesslex::Grammar word_grammar() {
  return excesslex::parse_grammar_text(
      "R0 -> R5 R1 R7 R6 R2 R1 R7 R4 R6 R3\n"
      "R1 -> \"a\"\n"
      "R2 -> \"if\"\n"
      "R3 -> \"wood\"\n"
      "R4 -> \"could\"\n"
      "R5 -> \"should\"\n"
      "R6 -> \"chuck\"\n"
      "R7 -> \"woodchuck\"\n");
}

// Irreducible grammar for the same string.
inline excesslex::Grammar irreducible_grammar() {
  return excesslex::parse_grammar_text(
      "R0 -> \"sh\" R1 R4 R2 \"if\" R4 \"c\" R1 R2 R3\n"
      "R1 -> \"ould\"\n"
      "R2 -> \"chuck\"\n"
      "R3 -> \"wood\"\n"
      "R4 -> \"a\" R3 R2\n");
}

// All strings of the given length over the first k letters.
inline std::vector<std::u32string> all_strings(std::size_t length, std::size_t k) {
  std::vector<std::u32string> out;
  std::u32string s(length, U'a');
  while (true) {
    out.push_back(s);
    std::size_t i = 0;
    while (i < length && s[i] == static_cast<char32_t>(U'a' + k - 1)) s[i++] = U'a';
    if (i == length) break;
    ++s[i];
  }
  return out;
}

// Longest substring with two (possibly overlapping) occurrences, by scanning
// every pair of start positions.
inline std::size_t brute_longest_repeat(const std::u32string& v) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      std::size_t l = 0;
      while (j + l < v.size() && v[i + l] == v[j + l]) ++l;
      best = std::max(best, l);
    }
  }
  return best;
}

// Smallest grammar length by enumerating vocabularies.
//
// A smallest grammar can be taken with pairwise distinct expansions, every
// non-initial rule used at least twice and every production of length >= 2.
// Its non-initial expansions then form a set W of strings of length >= 2
// with two disjoint occurrences in v, |W| <= (|v| - 2) / 2, and the length is
// the sum over w in W + {v} of the shortest parse of w into terminals and
// the other members of W. Minimising that sum over all such W gives L(v).
class BruteForceGrammar {
 public:
  explicit BruteForceGrammar(std::u32string v) : v_(std::move(v)) {
    for (std::size_t len = 2; 2 * len <= v_.size(); ++len) {
      for (std::size_t i = 0; i + len <= v_.size(); ++i) {
        std::u32string w = v_.substr(i, len);
        if (std::find(words_.begin(), words_.end(), w) != words_.end()) continue;
        std::size_t disjoint = 0;
        for (std::size_t p = 0; p + len <= v_.size();) {
          if (v_.compare(p, len, w) == 0) {
            ++disjoint;
            p += len;
          } else {
            ++p;
          }
        }
        if (disjoint >= 2) words_.push_back(std::move(w));
      }
    }
  }

  std::size_t candidates() const { return words_.size(); }

  std::size_t length() {
    best_ = v_.size();
    const std::size_t max_size = v_.size() >= 2 ? (v_.size() - 2) / 2 : 0;
    std::vector<std::size_t> chosen;
    extend(chosen, 0, max_size);
    return best_;
  }

 private:
  std::size_t parse(const std::u32string& w, const std::vector<std::size_t>& chosen, std::size_t skip) const {
    std::vector<std::size_t> f(w.size() + 1, std::numeric_limits<std::size_t>::max());
    f[0] = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (f[i] == std::numeric_limits<std::size_t>::max()) continue;
      f[i + 1] = std::min(f[i + 1], f[i] + 1);
      for (std::size_t c : chosen) {
        if (c == skip) continue;
        const std::u32string& x = words_[c];
        if (i + x.size() <= w.size() && w.compare(i, x.size(), x) == 0) {
          f[i + x.size()] = std::min(f[i + x.size()], f[i] + 1);
        }
      }
    }
    return f[w.size()];
  }

  std::size_t total(const std::vector<std::size_t>& chosen) const {
    std::size_t sum = parse(v_, chosen, words_.size());
    for (std::size_t c : chosen) sum += parse(words_[c], chosen, c);
    return sum;
  }

  void extend(std::vector<std::size_t>& chosen, std::size_t from, std::size_t max_size) {
    best_ = std::min(best_, total(chosen));
    if (chosen.size() == max_size) return;
    for (std::size_t c = from; c < words_.size(); ++c) {
      // Each further word costs at least two symbols and rule 0 keeps two.
      if (2 * (chosen.size() + 1) + 2 > best_) return;
      chosen.push_back(c);
      extend(chosen, c + 1, max_size);
      chosen.pop_back();
    }
  }

  std::u32string v_;
  std::vector<std::u32string> words_;
  std::size_t best_ = 0;
};

inline std::size_t brute_min_grammar_length(const std::u32string& v) { return BruteForceGrammar(v).length(); }

// Random acyclic grammar: rule i refers only to rules j > i. Some rules may
// be unreachable from rule 0.
inline excesslex::Grammar random_grammar(excesslex::Rng& rng, std::size_t rules, std::size_t max_production,
                                         const std::u32string& alphabet) {
  using excesslex::Symbol;
  std::vector<excesslex::Production> out(rules);
  for (std::size_t i = 0; i < rules; ++i) {
    const std::size_t len = 1 + rng.below(max_production);
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t later = rules - i - 1;
      if (later > 0 && rng.below(3) == 0) {
        out[i].push_back(Symbol::nonterminal(static_cast<excesslex::RuleId>(i + 1 + rng.below(later))));
      } else {
        out[i].push_back(Symbol::terminal(alphabet[rng.below(alphabet.size())]));
      }
    }
  }
  return excesslex::Grammar(std::move(out));
}

inline std::u32string random_text(excesslex::Rng& rng, std::size_t length, const std::u32string& alphabet) {
  std::u32string s(length, U' ');
  for (auto& c : s) c = alphabet[rng.below(alphabet.size())];
  return s;
}

}  // namespace fixtures
