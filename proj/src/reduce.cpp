#include <algorithm>
#include <map>
#include <unordered_map>

#include "excesslex/infer.hpp"
#include "fingerprint.hpp"

namespace excesslex {

namespace {

// Mutable rule table; removed rules keep an empty production.
struct Work {
  std::vector<Production> rules;
  std::vector<bool> alive;

  explicit Work(const Grammar& g) : rules(g.rules()), alive(g.rule_count(), true) {}

  std::vector<std::size_t> uses() const {
    std::vector<std::size_t> u(rules.size(), 0);
    for (std::size_t id = 0; id < rules.size(); ++id) {
      if (!alive[id]) continue;
      for (const Symbol& s : rules[id]) {
        if (s.is_nonterminal()) ++u[s.rule()];
      }
    }
    return u;
  }

  // Snapshot with dead rules replaced by a placeholder so ids stay valid.
  Grammar snapshot() const {
    std::vector<Production> copy = rules;
    for (std::size_t id = 0; id < copy.size(); ++id) {
      if (!alive[id]) copy[id] = {Symbol::terminal(0)};
    }
    return Grammar(std::move(copy));
  }

  Grammar finish() const {
    std::vector<RuleId> remap(rules.size(), 0);
    std::vector<Production> out;
    for (std::size_t id = 0; id < rules.size(); ++id) {
      if (alive[id]) {
        remap[id] = static_cast<RuleId>(out.size());
        out.push_back(rules[id]);
      }
    }
    for (auto& p : out) {
      for (Symbol& s : p) {
        if (s.is_nonterminal()) s = Symbol::nonterminal(remap[s.rule()]);
      }
    }
    return canonicalize(Grammar(std::move(out)));
  }
};

// Inline every non-initial rule referenced fewer than two times.
bool inline_underused(Work& w) {
  const auto uses = w.uses();
  std::vector<bool> dissolve(w.rules.size(), false);
  bool any = false;
  for (std::size_t id = 1; id < w.rules.size(); ++id) {
    if (w.alive[id] && uses[id] < 2) {
      dissolve[id] = true;
      any = true;
    }
  }
  if (!any) return false;

  // Flattened content of dissolved rules, computed on demand.
  std::vector<Production> flat(w.rules.size());
  std::vector<bool> have(w.rules.size(), false);
  auto flatten = [&](auto&& self, RuleId id) -> const Production& {
    if (have[id]) return flat[id];
    Production out;
    for (const Symbol& s : w.rules[id]) {
      if (s.is_nonterminal() && dissolve[s.rule()]) {
        const Production& sub = self(self, s.rule());
        out.insert(out.end(), sub.begin(), sub.end());
      } else {
        out.push_back(s);
      }
    }
    flat[id] = std::move(out);
    have[id] = true;
    return flat[id];
  };
  for (std::size_t id = 0; id < w.rules.size(); ++id) {
    if (!w.alive[id] || dissolve[id]) continue;
    bool touches = false;
    for (const Symbol& s : w.rules[id]) touches = touches || (s.is_nonterminal() && dissolve[s.rule()]);
    if (touches) {
      Production p = flatten(flatten, static_cast<RuleId>(id));
      w.rules[id] = std::move(p);
    }
  }
  for (std::size_t id = 1; id < w.rules.size(); ++id) {
    if (dissolve[id]) {
      w.alive[id] = false;
      w.rules[id].clear();
    }
  }
  return true;
}

// Merge non-initial rules deriving the same string.
bool merge_duplicates(Work& w) {
  const Grammar g = w.snapshot();
  const auto prints = detail::expansion_fingerprints(g);
  std::map<std::pair<std::size_t, std::uint64_t>, std::vector<RuleId>> groups;
  for (std::size_t id = 1; id < w.rules.size(); ++id) {
    if (w.alive[id]) groups[{prints[id].length, prints[id].hash}].push_back(static_cast<RuleId>(id));
  }
  std::vector<RuleId> redirect(w.rules.size());
  for (std::size_t id = 0; id < redirect.size(); ++id) redirect[id] = static_cast<RuleId>(id);
  bool any = false;
  for (auto& [key, ids] : groups) {
    if (ids.size() < 2) continue;
    // Split the fingerprint group into classes of truly equal expansions.
    std::map<std::u32string, std::vector<RuleId>> classes;
    for (RuleId id : ids) classes[expand_rule(g, id)].push_back(id);
    for (auto& [text, members] : classes) {
      if (members.size() < 2) continue;
      // The representative must not reference another member; such a member
      // would be a unit rule pointing at it.
      RuleId rep = members.front();
      for (RuleId m : members) {
        bool refs = false;
        for (const Symbol& s : w.rules[m]) {
          refs = refs || (s.is_nonterminal() &&
                          std::find(members.begin(), members.end(), s.rule()) != members.end());
        }
        if (!refs) {
          rep = m;
          break;
        }
      }
      for (RuleId m : members) {
        if (m != rep) {
          redirect[m] = rep;
          w.alive[m] = false;
          w.rules[m].clear();
        }
      }
      any = true;
    }
  }
  if (!any) return false;
  for (std::size_t id = 0; id < w.rules.size(); ++id) {
    if (!w.alive[id]) continue;
    for (Symbol& s : w.rules[id]) {
      if (s.is_nonterminal()) s = Symbol::nonterminal(redirect[s.rule()]);
    }
  }
  return true;
}

// Replace repeated digrams (non-overlapping, left-greedy counts) by rules,
// most frequent first with the earliest first occurrence breaking ties. One
// pass handles every digram none of whose occurrences touches a position
// already claimed during the pass, so the counts it acts on are exact.
bool extract_repeated_digrams(Work& w) {
  struct Stat {
    std::vector<std::pair<RuleId, std::uint32_t>> at;  // counted occurrences in text order
  };
  std::unordered_map<std::uint64_t, Stat> stats;
  for (std::size_t id = 0; id < w.rules.size(); ++id) {
    if (!w.alive[id]) continue;
    const Production& p = w.rules[id];
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      auto& at = stats[detail::digram_key(p[i], p[i + 1])].at;
      if (!at.empty() && at.back().first == id && at.back().second + 1 == i) continue;
      at.emplace_back(static_cast<RuleId>(id), static_cast<std::uint32_t>(i));
    }
  }
  std::vector<const Stat*> order;
  for (const auto& [key, st] : stats) {
    if (st.at.size() >= 2) order.push_back(&st);
  }
  if (order.empty()) return false;
  std::sort(order.begin(), order.end(), [](const Stat* x, const Stat* y) {
    if (x->at.size() != y->at.size()) return x->at.size() > y->at.size();
    return x->at.front() < y->at.front();
  });

  // Rules whose whole production is a digram, for reuse.
  std::unordered_map<std::uint64_t, RuleId> pair_rules;
  for (std::size_t id = w.rules.size(); id-- > 1;) {
    if (w.alive[id] && w.rules[id].size() == 2) {
      pair_rules[detail::digram_key(w.rules[id][0], w.rules[id][1])] = static_cast<RuleId>(id);
    }
  }

  // claims[r][i]: rule replacing the digram starting at i, kConsumed for the
  // second half of a replaced digram.
  constexpr RuleId kFree = 0;
  constexpr RuleId kConsumed = ~RuleId{0};
  const std::size_t old_count = w.rules.size();
  std::vector<std::vector<RuleId>> claims(old_count);
  auto claimed = [&](RuleId r, std::uint32_t i) {
    const auto& c = claims[r];
    return !c.empty() && (c[i] != kFree || c[i + 1] != kFree);
  };
  for (const Stat* st : order) {
    if (std::any_of(st->at.begin(), st->at.end(), [&](const auto& o) { return claimed(o.first, o.second); })) {
      continue;
    }
    const auto [r0, i0] = st->at.front();
    const Symbol a = w.rules[r0][i0];
    const Symbol b = w.rules[r0][i0 + 1];
    RuleId target = 0;
    if (auto it = pair_rules.find(detail::digram_key(a, b)); it != pair_rules.end()) target = it->second;
    if (target == 0) {
      target = static_cast<RuleId>(w.rules.size());
      w.rules.push_back({a, b});
      w.alive.push_back(true);
    }
    for (const auto& [r, i] : st->at) {
      if (r == target) continue;
      auto& c = claims[r];
      if (c.empty()) c.assign(w.rules[r].size(), kFree);
      c[i] = target;
      c[i + 1] = kConsumed;
    }
  }
  for (std::size_t id = 0; id < old_count; ++id) {
    const auto& c = claims[id];
    if (c.empty()) continue;
    const Production& p = w.rules[id];
    Production out;
    out.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (c[i] == kConsumed) continue;
      out.push_back(c[i] == kFree ? p[i] : Symbol::nonterminal(c[i]));
    }
    w.rules[id] = std::move(out);
  }
  return true;
}

}  // namespace

Grammar reduce_to_irreducible(const Grammar& grammar) {
  topological_order(grammar);  // reject cyclic input up front
  Work w(grammar);
  bool changed = false;
  for (;;) {
    bool step = inline_underused(w);
    if (!step) step = extract_repeated_digrams(w);
    if (!step) step = merge_duplicates(w);
    if (!step) break;
    changed = true;
  }
  return changed ? w.finish() : grammar;
}

}  // namespace excesslex
