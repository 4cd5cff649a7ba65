#pragma once

#include <cstddef>
#include <string_view>

#include "excesslex/grammar.hpp"

namespace excesslex {

enum class Algorithm { online, repair, exact };

std::string_view to_string(Algorithm algorithm);
// Accepts "online", "repair" and "exact"; throws Error(invalid_spec).
Algorithm parse_algorithm(std::string_view name);

// Among equally frequent digrams, the one whose first occurrence comes
// first (by rule id, then position) wins.
enum class TieBreak { leftmost_first_occurrence };

inline constexpr std::size_t kDefaultExactBudget = 14;
inline constexpr std::size_t kMaxExactBudget = 16;

struct InferenceConfig {
  Algorithm algorithm = Algorithm::repair;
  std::size_t exact_length_budget = kDefaultExactBudget;
  TieBreak tie_break = TieBreak::leftmost_first_occurrence;

  // Throws Error(invalid_spec) when the budget exceeds kMaxExactBudget.
  void validate() const;
};

struct MinimalGrammarResult {
  Grammar grammar;
  std::size_t length = 0;             // ||G|| of a smallest grammar
  std::size_t vocabulary_length = 0;  // ||G|| minus the initial production
  bool proof_of_minimality = false;
};

// Online digram-uniqueness inference (SEQUITUR family) followed by
// reduce_to_irreducible. Requires a non-empty text.
Grammar infer_online(std::u32string_view text);

// Offline most-frequent-digram replacement (Re-Pair family) followed by
// reduce_to_irreducible. Requires a non-empty text.
Grammar infer_repair(std::u32string_view text);

// Rewrites an admissible grammar into an irreducible one for the same string
// without increasing its length: inlines rules used fewer than twice, merges
// rules with equal expansions and extracts repeated digrams, to a fixpoint.
// Returns the input unchanged when it is already irreducible; otherwise the
// result is canonicalized.
Grammar reduce_to_irreducible(const Grammar& grammar);

// Exhaustive branch-and-bound search for a grammar of minimal length. The
// returned grammar is irreducible and canonical; among minimal grammars the
// one with the fewest rules, then the smallest text form, is chosen from the
// candidates the search enumerates.
// Throws Error(budget_exceeded) when |text| > budget or budget > 16.
MinimalGrammarResult minimal_grammar_exact(std::u32string_view text,
                                           std::size_t budget = kDefaultExactBudget);

// Dispatches on config.algorithm.
Grammar infer(std::u32string_view text, const InferenceConfig& config);

}  // namespace excesslex
