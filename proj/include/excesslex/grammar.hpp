#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace excesslex {

using RuleId = std::uint32_t;

// A grammar symbol: either a terminal code point or a reference to a rule.
class Symbol {
 public:
  static constexpr Symbol terminal(char32_t cp) { return Symbol(true, static_cast<std::uint32_t>(cp)); }
  static constexpr Symbol nonterminal(RuleId id) { return Symbol(false, id); }

  constexpr bool is_terminal() const noexcept { return terminal_; }
  constexpr bool is_nonterminal() const noexcept { return !terminal_; }
  constexpr char32_t code_point() const noexcept { return static_cast<char32_t>(value_); }
  constexpr RuleId rule() const noexcept { return value_; }

  // Injective packing used as a hash key.
  constexpr std::uint64_t key() const noexcept {
    return (static_cast<std::uint64_t>(value_) << 1) | (terminal_ ? 1u : 0u);
  }

  constexpr auto operator<=>(const Symbol&) const = default;

 private:
  constexpr Symbol(bool terminal, std::uint32_t value) : terminal_(terminal), value_(value) {}

  bool terminal_;
  std::uint32_t value_;
};

using Production = std::vector<Symbol>;

Production terminals(std::u32string_view text);

// Straight-line grammar: rule 0 is the initial rule and every rule id indexes
// `rules()`. Construction rejects empty productions and dangling references;
// acyclicity is checked by the operations that walk the grammar.
class Grammar {
 public:
  explicit Grammar(std::vector<Production> rules);

  static Grammar single_rule(std::u32string_view text);

  const std::vector<Production>& rules() const noexcept { return rules_; }
  const Production& rule(RuleId id) const { return rules_.at(id); }
  std::size_t rule_count() const noexcept { return rules_.size(); }

  // Terminal code points used by the productions.
  std::set<char32_t> alphabet() const;

  bool operator==(const Grammar&) const = default;

 private:
  std::vector<Production> rules_;
};

// Rules ordered so that every rule appears after all rules it references.
// Throws Error(cycle_detected) when the reference graph has a cycle.
std::vector<RuleId> topological_order(const Grammar& grammar);

// Length of the terminal string each rule derives.
std::vector<std::size_t> expansion_lengths(const Grammar& grammar);

std::u32string expand(const Grammar& grammar);
std::u32string expand_rule(const Grammar& grammar, RuleId id);

// Total number of symbols over all productions.
std::size_t grammar_length(const Grammar& grammar);

// grammar_length minus the length of the initial production.
std::size_t vocabulary_length(const Grammar& grammar);

struct AdmissibilityResult {
  bool admissible = false;
  std::vector<std::string> reasons;

  explicit operator bool() const noexcept { return admissible; }
};

AdmissibilityResult check_admissible(const Grammar& grammar, std::u32string_view text);

struct IrreducibilityReport {
  // Condition 1: pairs of rules deriving the same terminal string.
  std::vector<std::pair<RuleId, RuleId>> duplicate_expansion_pairs;
  // Condition 2: non-initial rules referenced fewer than two times.
  std::vector<RuleId> underused_nonterminals;
  // Condition 3: symbol sequences of length >= 2 with at least two
  // non-overlapping occurrences across the productions, with that count.
  std::vector<std::pair<Production, std::size_t>> repeated_strings;

  bool empty() const noexcept {
    return duplicate_expansion_pairs.empty() && underused_nonterminals.empty() &&
           repeated_strings.empty();
  }
};

IrreducibilityReport check_irreducible(const Grammar& grammar);

// Number of references to each rule across all productions.
std::vector<std::size_t> use_counts(const Grammar& grammar);

// Renumbers rules by first use in a depth-first pre-order walk from rule 0
// and drops unreachable rules.
Grammar canonicalize(const Grammar& grammar);

struct TokenSpan {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive
  std::size_t depth = 1;
  RuleId rule = 0;

  bool operator==(const TokenSpan&) const = default;
};

// Stretch of text produced by terminals of the initial rule.
struct TokenGap {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const TokenGap&) const = default;
};

struct Tokenization {
  std::size_t text_length = 0;
  std::vector<TokenSpan> spans;  // pre-order: by start, parents before children
  std::vector<TokenGap> gaps;

  std::vector<TokenSpan> spans_at_depth(std::size_t depth) const;
  std::size_t max_depth() const;
};

// Hierarchical segmentation induced by the nonterminals of the grammar.
// `max_depth` of nullopt descends all the way down.
Tokenization tokenize(const Grammar& grammar, std::optional<std::size_t> max_depth);

}  // namespace excesslex
