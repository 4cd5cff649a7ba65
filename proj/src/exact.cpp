// Exhaustive smallest-grammar search for short strings.
//
// A grammar is determined, up to the choice of parses, by the set W of
// strings its non-initial rules expand to. Its least length for a given W is
// the sum over x in W and v of the fewest pieces x splits into, each piece a
// single terminal or another member of W. Only substrings with at least two
// non-overlapping occurrences in v can belong to a smallest grammar (a rule
// used once can be inlined at no cost), so the search ranges over subsets of
// those. Candidates are decided shortest first, which fixes the cost of a
// word at the moment it is taken.

#include <algorithm>
#include <bit>
#include <map>
#include <string>

#include "excesslex/error.hpp"
#include "excesslex/grammar_text.hpp"
#include "excesslex/infer.hpp"

namespace excesslex {

namespace {

using Mask = std::uint64_t;

class ExactSearch {
 public:
  explicit ExactSearch(std::u32string_view text) : text_(text) {
    collect_candidates();
    targets_.push_back(text_);
    for (const auto& c : candidates_) targets_.push_back(c);
    ends_.resize(targets_.size());
    for (std::size_t t = 0; t < targets_.size(); ++t) {
      const std::u32string& x = targets_[t];
      ends_[t].assign(x.size() + 1, 0);
      for (std::size_t k = 0; k < candidates_.size(); ++k) {
        if (t == k + 1) continue;
        const std::u32string& w = candidates_[k];
        for (std::size_t pos = x.find(w); pos != std::u32string::npos; pos = x.find(w, pos + 1)) {
          ends_[t][pos + w.size()] |= Mask{1} << k;
        }
      }
    }
  }

  MinimalGrammarResult solve() {
    best_ = text_.size();
    const Mask all = candidates_.empty() ? 0 : (~Mask{0} >> (64 - candidates_.size()));
    search(0, 0, 0, all);

    std::optional<Grammar> chosen;
    std::string chosen_text;
    for (Mask w : ties_) {
      Grammar g = canonicalize(reduce_to_irreducible(build(w)));
      std::string repr = to_text(g);
      if (!chosen || g.rule_count() < chosen->rule_count() ||
          (g.rule_count() == chosen->rule_count() && repr < chosen_text)) {
        chosen = std::move(g);
        chosen_text = std::move(repr);
      }
    }
    MinimalGrammarResult result{*chosen, grammar_length(*chosen), vocabulary_length(*chosen), true};
    if (result.length != best_) {
      throw Error(ErrorCode::invalid_grammar, "exact search produced an inconsistent grammar");
    }
    return result;
  }

 private:
  void collect_candidates() {
    const std::size_t n = text_.size();
    std::map<std::pair<std::size_t, std::u32string>, bool> seen;
    for (std::size_t len = 2; 2 * len <= n; ++len) {
      for (std::size_t i = 0; i + len <= n; ++i) {
        std::u32string w(text_.substr(i, len));
        if (seen.contains({len, w})) continue;
        std::size_t count = 0;
        for (std::size_t pos = text_.find(w); pos != std::u32string::npos; pos = text_.find(w, pos + len)) ++count;
        seen[{len, w}] = count >= 2;
      }
    }
    for (const auto& [key, repeated] : seen) {
      if (repeated) candidates_.push_back(key.second);
    }
    if (candidates_.size() > 64) {
      throw Error(ErrorCode::budget_exceeded, "too many repeated substrings for exact search");
    }
  }

  // Fewest pieces for target t using words in `allowed`.
  std::size_t parse(std::size_t t, Mask allowed) const {
    const std::size_t len = targets_[t].size();
    std::size_t f[kMaxExactBudget + 1];
    f[0] = 0;
    for (std::size_t j = 1; j <= len; ++j) {
      std::size_t b = f[j - 1] + 1;
      for (Mask m = ends_[t][j] & allowed; m; m &= m - 1) {
        const std::size_t k = static_cast<std::size_t>(std::countr_zero(m));
        b = std::min(b, f[j - candidates_[k].size()] + 1);
      }
      f[j] = b;
    }
    return f[len];
  }

  void search(std::size_t i, Mask chosen, std::size_t cost, Mask remaining) {
    if (i == candidates_.size()) {
      const std::size_t total = cost + parse(0, chosen);
      if (total < best_) {
        best_ = total;
        ties_.clear();
      }
      if (total == best_) ties_.push_back(chosen);
      return;
    }
    if (cost + parse(0, chosen | remaining) > best_) return;
    const Mask bit = Mask{1} << i;
    const std::size_t own = parse(i + 1, chosen);
    // The initial rule needs at least one more symbol.
    if (cost + own + 1 <= best_) search(i + 1, chosen | bit, cost + own, remaining & ~bit);
    search(i + 1, chosen, cost, remaining & ~bit);
  }

  Production parse_production(std::size_t t, Mask allowed, const std::vector<RuleId>& rule_of) const {
    const std::u32string& x = targets_[t];
    const std::size_t len = x.size();
    std::vector<std::size_t> f(len + 1, 0);
    std::vector<int> via(len + 1, -1);
    for (std::size_t j = 1; j <= len; ++j) {
      f[j] = f[j - 1] + 1;
      for (Mask m = ends_[t][j] & allowed; m; m &= m - 1) {
        const std::size_t k = static_cast<std::size_t>(std::countr_zero(m));
        const std::size_t c = f[j - candidates_[k].size()] + 1;
        if (c < f[j]) {
          f[j] = c;
          via[j] = static_cast<int>(k);
        }
      }
    }
    Production out;
    for (std::size_t j = len; j > 0;) {
      if (via[j] < 0) {
        out.push_back(Symbol::terminal(x[j - 1]));
        --j;
      } else {
        out.push_back(Symbol::nonterminal(rule_of[via[j]]));
        j -= candidates_[via[j]].size();
      }
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  Grammar build(Mask w) const {
    std::vector<RuleId> rule_of(candidates_.size(), 0);
    RuleId next = 1;
    for (std::size_t k = 0; k < candidates_.size(); ++k) {
      if (w >> k & 1) rule_of[k] = next++;
    }
    std::vector<Production> rules;
    rules.push_back(parse_production(0, w, rule_of));
    for (std::size_t k = 0; k < candidates_.size(); ++k) {
      if (w >> k & 1) rules.push_back(parse_production(k + 1, w, rule_of));
    }
    return canonicalize(Grammar(std::move(rules)));
  }

  std::u32string text_;
  std::vector<std::u32string> candidates_;  // by length, then code points
  std::vector<std::u32string> targets_;     // text, then candidates
  std::vector<std::vector<Mask>> ends_;     // ends_[t][j]: candidates ending at j in target t
  std::size_t best_ = 0;
  std::vector<Mask> ties_;
};

}  // namespace

MinimalGrammarResult minimal_grammar_exact(std::u32string_view text, std::size_t budget) {
  if (budget > kMaxExactBudget) {
    throw Error(ErrorCode::budget_exceeded, "exact search budget above " + std::to_string(kMaxExactBudget));
  }
  if (text.size() > budget) {
    throw Error(ErrorCode::budget_exceeded,
                "text of length " + std::to_string(text.size()) + " exceeds exact budget " + std::to_string(budget));
  }
  if (text.empty()) throw Error(ErrorCode::empty_input, "exact search needs a non-empty text");
  return ExactSearch(text).solve();
}

}  // namespace excesslex
