#include "excesslex/grammar.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "excesslex/error.hpp"
#include "excesslex/utf8.hpp"
#include "fingerprint.hpp"

namespace excesslex {

Production terminals(std::u32string_view text) {
  Production out;
  out.reserve(text.size());
  for (char32_t cp : text) out.push_back(Symbol::terminal(cp));
  return out;
}

Grammar::Grammar(std::vector<Production> rules) : rules_(std::move(rules)) {
  if (rules_.empty()) {
    throw Error(ErrorCode::invalid_grammar, "grammar has no initial rule");
  }
  for (std::size_t id = 0; id < rules_.size(); ++id) {
    if (rules_[id].empty()) {
      throw Error(ErrorCode::invalid_grammar, "rule R" + std::to_string(id) + " has an empty production");
    }
    for (const Symbol& s : rules_[id]) {
      if (s.is_nonterminal() && s.rule() >= rules_.size()) {
        throw Error(ErrorCode::invalid_grammar,
                    "rule R" + std::to_string(id) + " references undefined R" + std::to_string(s.rule()));
      }
    }
  }
}

Grammar Grammar::single_rule(std::u32string_view text) {
  std::vector<Production> rules;
  rules.push_back(terminals(text));
  return Grammar(std::move(rules));
}

std::set<char32_t> Grammar::alphabet() const {
  std::set<char32_t> out;
  for (const auto& p : rules_) {
    for (const Symbol& s : p) {
      if (s.is_terminal()) out.insert(s.code_point());
    }
  }
  return out;
}

std::vector<RuleId> topological_order(const Grammar& grammar) {
  const std::size_t n = grammar.rule_count();
  enum : unsigned char { unvisited, active, done };
  std::vector<unsigned char> state(n, unvisited);
  std::vector<RuleId> order;
  order.reserve(n);
  // Explicit stack of (rule, next symbol index); grammars can be deep.
  std::vector<std::pair<RuleId, std::size_t>> stack;
  for (RuleId root = 0; root < n; ++root) {
    if (state[root] != unvisited) continue;
    stack.emplace_back(root, 0);
    state[root] = active;
    while (!stack.empty()) {
      auto& [id, idx] = stack.back();
      const Production& p = grammar.rule(id);
      if (idx == p.size()) {
        state[id] = done;
        order.push_back(id);
        stack.pop_back();
        continue;
      }
      const Symbol s = p[idx++];
      if (s.is_terminal()) continue;
      if (state[s.rule()] == active) {
        throw Error(ErrorCode::cycle_detected, "rule R" + std::to_string(s.rule()) + " derives itself");
      }
      if (state[s.rule()] == unvisited) {
        state[s.rule()] = active;
        stack.emplace_back(s.rule(), 0);
      }
    }
  }
  return order;
}

std::vector<std::size_t> expansion_lengths(const Grammar& grammar) {
  std::vector<std::size_t> len(grammar.rule_count(), 0);
  for (RuleId id : topological_order(grammar)) {
    std::size_t total = 0;
    for (const Symbol& s : grammar.rule(id)) total += s.is_terminal() ? 1 : len[s.rule()];
    len[id] = total;
  }
  return len;
}

namespace {

void expand_into(const Grammar& grammar, RuleId root, std::u32string& out) {
  std::vector<std::pair<RuleId, std::size_t>> stack{{root, 0}};
  while (!stack.empty()) {
    auto& [id, idx] = stack.back();
    const Production& p = grammar.rule(id);
    if (idx == p.size()) {
      stack.pop_back();
      continue;
    }
    const Symbol s = p[idx++];
    if (s.is_terminal()) {
      out.push_back(s.code_point());
    } else {
      stack.emplace_back(s.rule(), 0);
    }
  }
}

}  // namespace

std::u32string expand_rule(const Grammar& grammar, RuleId id) {
  const auto lengths = expansion_lengths(grammar);  // also rejects cycles
  std::u32string out;
  out.reserve(lengths.at(id));
  expand_into(grammar, id, out);
  return out;
}

std::u32string expand(const Grammar& grammar) { return expand_rule(grammar, 0); }

std::size_t grammar_length(const Grammar& grammar) {
  std::size_t total = 0;
  for (const auto& p : grammar.rules()) total += p.size();
  return total;
}

std::size_t vocabulary_length(const Grammar& grammar) {
  return grammar_length(grammar) - grammar.rule(0).size();
}

AdmissibilityResult check_admissible(const Grammar& grammar, std::u32string_view text) {
  AdmissibilityResult result;
  std::vector<std::size_t> lengths;
  try {
    lengths = expansion_lengths(grammar);
  } catch (const Error& e) {
    result.reasons.emplace_back(e.what());
    return result;
  }
  if (lengths[0] != text.size()) {
    result.reasons.push_back("expansion length " + std::to_string(lengths[0]) +
                             " differs from text length " + std::to_string(text.size()));
    return result;
  }
  std::u32string expanded;
  expanded.reserve(lengths[0]);
  expand_into(grammar, 0, expanded);
  if (expanded != text) {
    const auto mismatch = std::mismatch(expanded.begin(), expanded.end(), text.begin());
    result.reasons.push_back("expansion differs from text at position " +
                             std::to_string(mismatch.first - expanded.begin()));
    return result;
  }
  result.admissible = true;
  return result;
}

std::vector<std::size_t> use_counts(const Grammar& grammar) {
  std::vector<std::size_t> uses(grammar.rule_count(), 0);
  for (const auto& p : grammar.rules()) {
    for (const Symbol& s : p) {
      if (s.is_nonterminal()) ++uses[s.rule()];
    }
  }
  return uses;
}

namespace {

struct Occurrence {
  RuleId rule;
  std::size_t pos;
};

struct DigramStats {
  std::size_t count = 0;
  std::vector<Occurrence> occurrences;
};

// Non-overlapping occurrences per production, counted left-greedily.
std::unordered_map<std::uint64_t, DigramStats> repeated_digrams(const Grammar& grammar) {
  std::unordered_map<std::uint64_t, DigramStats> stats;
  for (RuleId id = 0; id < grammar.rule_count(); ++id) {
    const Production& p = grammar.rule(id);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      const std::uint64_t key = detail::digram_key(p[i], p[i + 1]);
      auto& d = stats[key];
      if (!d.occurrences.empty() && d.occurrences.back().rule == id && d.occurrences.back().pos + 1 == i) {
        continue;
      }
      ++d.count;
      d.occurrences.push_back({id, i});
    }
  }
  std::erase_if(stats, [](const auto& kv) { return kv.second.count < 2; });
  return stats;
}

bool contains_run(const Production& hay, const Production& needle) {
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

}  // namespace

IrreducibilityReport check_irreducible(const Grammar& grammar) {
  IrreducibilityReport report;

  // Condition 1.
  const auto prints = detail::expansion_fingerprints(grammar);
  std::map<std::pair<std::size_t, std::uint64_t>, std::vector<RuleId>> groups;
  for (RuleId id = 0; id < grammar.rule_count(); ++id) {
    groups[{prints[id].length, prints[id].hash}].push_back(id);
  }
  for (const auto& [key, ids] : groups) {
    if (ids.size() < 2) continue;
    for (std::size_t a = 0; a < ids.size(); ++a) {
      const auto ea = expand_rule(grammar, ids[a]);
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        if (ea == expand_rule(grammar, ids[b])) report.duplicate_expansion_pairs.emplace_back(ids[a], ids[b]);
      }
    }
  }
  std::sort(report.duplicate_expansion_pairs.begin(), report.duplicate_expansion_pairs.end());

  // Condition 2.
  const auto uses = use_counts(grammar);
  for (RuleId id = 1; id < grammar.rule_count(); ++id) {
    if (uses[id] < 2) report.underused_nonterminals.push_back(id);
  }

  // Condition 3: a repeated sequence exists iff a repeated digram exists, so
  // start from repeated digrams and grow each one to the right while every
  // occurrence continues with the same symbol.
  auto digrams = repeated_digrams(grammar);
  std::vector<std::pair<Production, std::size_t>> found;
  for (auto& [key, d] : digrams) {
    auto occ = d.occurrences;
    std::size_t len = 2;
    for (;;) {
      const Production& first = grammar.rule(occ[0].rule);
      if (occ[0].pos + len >= first.size()) break;
      const Symbol next = first[occ[0].pos + len];
      bool ok = true;
      for (std::size_t k = 0; k < occ.size() && ok; ++k) {
        const Production& p = grammar.rule(occ[k].rule);
        if (occ[k].pos + len >= p.size() || p[occ[k].pos + len] != next) ok = false;
        if (ok && k > 0 && occ[k].rule == occ[k - 1].rule && occ[k - 1].pos + len + 1 > occ[k].pos) ok = false;
      }
      if (!ok) break;
      ++len;
    }
    const Production& src = grammar.rule(occ[0].rule);
    found.emplace_back(Production(src.begin() + static_cast<std::ptrdiff_t>(occ[0].pos),
                                  src.begin() + static_cast<std::ptrdiff_t>(occ[0].pos + len)),
                       d.count);
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  constexpr std::size_t kDedupeLimit = 2000;
  for (std::size_t i = 0; i < found.size(); ++i) {
    bool dominated = false;
    if (found.size() <= kDedupeLimit) {
      for (std::size_t j = 0; j < found.size() && !dominated; ++j) {
        if (i != j && found[j].first.size() > found[i].first.size() && found[j].second == found[i].second &&
            contains_run(found[j].first, found[i].first)) {
          dominated = true;
        }
      }
    }
    if (!dominated) report.repeated_strings.push_back(found[i]);
  }
  return report;
}

Grammar canonicalize(const Grammar& grammar) {
  topological_order(grammar);  // reject cycles before walking
  constexpr RuleId unassigned = static_cast<RuleId>(-1);
  std::vector<RuleId> new_id(grammar.rule_count(), unassigned);
  std::vector<RuleId> old_of;
  new_id[0] = 0;
  old_of.push_back(0);
  std::vector<std::pair<RuleId, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto& [id, idx] = stack.back();
    const Production& p = grammar.rule(id);
    if (idx == p.size()) {
      stack.pop_back();
      continue;
    }
    const Symbol s = p[idx++];
    if (s.is_nonterminal() && new_id[s.rule()] == unassigned) {
      new_id[s.rule()] = static_cast<RuleId>(old_of.size());
      old_of.push_back(s.rule());
      stack.emplace_back(s.rule(), 0);
    }
  }
  std::vector<Production> rules;
  rules.reserve(old_of.size());
  for (RuleId old : old_of) {
    Production p = grammar.rule(old);
    for (Symbol& s : p) {
      if (s.is_nonterminal()) s = Symbol::nonterminal(new_id[s.rule()]);
    }
    rules.push_back(std::move(p));
  }
  return Grammar(std::move(rules));
}

std::vector<TokenSpan> Tokenization::spans_at_depth(std::size_t depth) const {
  std::vector<TokenSpan> out;
  for (const auto& s : spans) {
    if (s.depth == depth) out.push_back(s);
  }
  return out;
}

std::size_t Tokenization::max_depth() const {
  std::size_t d = 0;
  for (const auto& s : spans) d = std::max(d, s.depth);
  return d;
}

Tokenization tokenize(const Grammar& grammar, std::optional<std::size_t> max_depth) {
  const auto lengths = expansion_lengths(grammar);
  Tokenization tok;
  tok.text_length = lengths[0];

  struct Frame {
    RuleId rule;
    std::size_t idx;
    std::size_t pos;
    std::size_t depth;  // depth of the symbols inside this production
  };
  std::size_t pos = 0;
  for (const Symbol& s : grammar.rule(0)) {
    if (s.is_terminal()) {
      if (!tok.gaps.empty() && tok.gaps.back().end == pos) {
        ++tok.gaps.back().end;
      } else {
        tok.gaps.push_back({pos, pos + 1});
      }
      ++pos;
      continue;
    }
    tok.spans.push_back({pos, pos + lengths[s.rule()], 1, s.rule()});
    if (!max_depth || *max_depth > 1) {
      std::vector<Frame> stack{{s.rule(), 0, pos, 2}};
      while (!stack.empty()) {
        Frame& f = stack.back();
        const Production& p = grammar.rule(f.rule);
        if (f.idx == p.size()) {
          stack.pop_back();
          continue;
        }
        const Symbol c = p[f.idx++];
        const std::size_t at = f.pos;
        if (c.is_terminal()) {
          f.pos += 1;
          continue;
        }
        f.pos += lengths[c.rule()];
        const std::size_t depth = f.depth;
        tok.spans.push_back({at, at + lengths[c.rule()], depth, c.rule()});
        if (!max_depth || *max_depth > depth) stack.push_back({c.rule(), 0, at, depth + 1});
      }
    }
    pos += lengths[s.rule()];
  }
  return tok;
}

}  // namespace excesslex
