// Offline most-frequent-pair replacement in the Re-Pair family.
//
// The working sequence is a linked list over the original positions, so a
// position keeps its place in left-to-right order after replacements. Each
// pair maps to the ordered set of positions where it starts. A lazy max-heap
// holds upper bounds on (count, -first position); entries are validated on
// pop. Counts are cached per pair until its position set changes, so the
// stale entries left behind by long runs cost O(1) each.

#include <algorithm>
#include <queue>
#include <set>
#include <tuple>
#include <unordered_map>

#include "excesslex/suffix_array.hpp"
#include "sequitur.hpp"

namespace excesslex::detail {

namespace {

class RePair {
 public:
  Grammar run(std::u32string_view text) {
    const DenseText dense = densify(text);
    terminal_count_ = static_cast<std::uint32_t>(dense.alphabet.size());
    const int n = static_cast<int>(text.size());
    sym_ = dense.symbols;
    prev_.resize(n);
    next_.resize(n);
    for (int i = 0; i < n; ++i) {
      prev_[i] = i - 1;
      next_[i] = i + 1 < n ? i + 1 : -1;
    }
    for (int i = 0; i + 1 < n; ++i) add(i);

    while (!heap_.empty()) {
      const Entry top = heap_.top();
      heap_.pop();
      auto it = occ_.find(top.pair);
      if (it == occ_.end() || it->second.positions.empty()) continue;
      PairState& st = it->second;
      const std::size_t c = count(top.pair, st);
      const int first = *st.positions.begin();
      if (c != top.count || first != top.first) {
        if (c >= 2 && st.queued != st.version) {
          st.queued = st.version;
          heap_.push({c, first, top.pair});
        }
        continue;
      }
      if (c < 2) break;
      replace(top.pair);
    }

    std::vector<Production> rules(1 + pairs_.size());
    auto to_symbol = [&](std::uint32_t s) {
      return s < terminal_count_ ? Symbol::terminal(dense.alphabet[s])
                                 : Symbol::nonterminal(s - terminal_count_ + 1);
    };
    for (int i = 0; i != -1 && n > 0; i = next_[i]) rules[0].push_back(to_symbol(sym_[i]));
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      rules[k + 1] = {to_symbol(pairs_[k].first), to_symbol(pairs_[k].second)};
    }
    return Grammar(std::move(rules));
  }

 private:
  struct Entry {
    std::size_t count;
    int first;
    std::uint64_t pair;

    bool operator<(const Entry& o) const {
      // Max-heap on count, then on the smaller first position.
      return std::tie(count, o.first) < std::tie(o.count, first);
    }
  };

  std::uint64_t pair_at(int i) const {
    return (static_cast<std::uint64_t>(sym_[i]) << 32) | sym_[next_[i]];
  }

  struct PairState {
    std::set<int> positions;
    std::uint64_t version = 0;  // bumped on every change to positions
    std::uint64_t counted = ~std::uint64_t{0};
    std::uint64_t queued = ~std::uint64_t{0};
    std::size_t count = 0;
  };

  std::size_t count(std::uint64_t pair, PairState& st) const {
    if (st.counted != st.version) {
      st.count = run_count(pair, st.positions);
      st.counted = st.version;
    }
    return st.count;
  }

  // Non-overlapping count: a run of k overlapping occurrences of "xx"
  // contributes ceil(k/2).
  std::size_t run_count(std::uint64_t pair, const std::set<int>& positions) const {
    if ((pair >> 32) != (pair & 0xffffffffu)) return positions.size();
    std::size_t total = 0;
    std::size_t run = 0;
    int last = -1;
    for (int p : positions) {
      if (last >= 0 && next_[last] == p) {
        ++run;
      } else {
        total += (run + 1) / 2;
        run = 1;
      }
      last = p;
    }
    return total + (run + 1) / 2;
  }

  void add(int i) {
    const std::uint64_t key = pair_at(i);
    auto& st = occ_[key];
    st.positions.insert(i);
    ++st.version;
    // The set size bounds the true count from above.
    heap_.push({st.positions.size(), *st.positions.begin(), key});
  }

  void remove(int i) {
    auto it = occ_.find(pair_at(i));
    if (it != occ_.end() && it->second.positions.erase(i)) ++it->second.version;
  }

  void replace(std::uint64_t pair) {
    const std::uint32_t x = terminal_count_ + static_cast<std::uint32_t>(pairs_.size());
    pairs_.emplace_back(static_cast<std::uint32_t>(pair >> 32), static_cast<std::uint32_t>(pair & 0xffffffffu));
    const std::vector<int> positions(occ_[pair].positions.begin(), occ_[pair].positions.end());
    const auto& live = occ_[pair].positions;
    for (int p : positions) {
      if (!live.contains(p)) continue;  // consumed by an overlapping neighbour
      const int q = next_[p];
      const int l = prev_[p];
      const int r = next_[q];
      if (l >= 0) remove(l);
      remove(p);
      if (r >= 0) remove(q);
      sym_[p] = x;
      next_[p] = r;
      if (r >= 0) prev_[r] = p;
      if (l >= 0) add(l);
      if (r >= 0) add(p);
    }
    occ_.erase(pair);
  }

  std::uint32_t terminal_count_ = 0;
  std::vector<std::uint32_t> sym_;
  std::vector<int> prev_;
  std::vector<int> next_;
  std::unordered_map<std::uint64_t, PairState> occ_;
  std::priority_queue<Entry> heap_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;
};

}  // namespace

Grammar repair_grammar(std::u32string_view text) { return RePair().run(text); }

}  // namespace excesslex::detail
