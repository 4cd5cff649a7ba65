// Online digram-uniqueness grammar inference in the SEQUITUR family.
//
// Symbols live in circular doubly-linked lists, one per rule, each closed by
// a guard node. The digram index maps a symbol pair to the node where its
// recorded occurrence starts. Two constraints are maintained while the input
// is appended one symbol at a time: no digram occurs twice (overlapping runs
// like "aaa" excepted), and a rule whose body starts with a nonterminal used
// once is dissolved into the rule that absorbed it.

#include <unordered_map>

#include "excesslex/infer.hpp"
#include "sequitur.hpp"

namespace excesslex::detail {

namespace {

constexpr int kNone = -1;

struct Node {
  int prev = kNone;
  int next = kNone;
  bool guard = false;
  bool nonterminal = false;
  std::uint32_t value = 0;  // code point, or rule index for guards/nonterminals
};

struct RuleSlot {
  int guard = kNone;
  std::size_t uses = 0;
  bool alive = true;
};

class Sequitur {
 public:
  Grammar run(std::u32string_view text) {
    const RuleId start = new_rule();
    for (std::size_t i = 0; i < text.size(); ++i) {
      const int n = new_node(false, static_cast<std::uint32_t>(text[i]));
      insert_after(last(start), n);
      if (i > 0) check(nodes_[last(start)].prev);
    }
    return to_grammar();
  }

 private:
  RuleId new_rule() {
    const RuleId id = static_cast<RuleId>(rules_.size());
    const int g = static_cast<int>(nodes_.size());
    Node guard;
    guard.guard = true;
    guard.nonterminal = true;
    guard.value = id;
    guard.prev = g;
    guard.next = g;
    nodes_.push_back(guard);
    rules_.push_back({g, 0, true});
    return id;
  }

  int new_node(bool nonterminal, std::uint32_t value) {
    Node n;
    n.nonterminal = nonterminal;
    n.value = value;
    nodes_.push_back(n);
    if (nonterminal) ++rules_[value].uses;
    return static_cast<int>(nodes_.size()) - 1;
  }

  int first(RuleId r) const { return nodes_[rules_[r].guard].next; }
  int last(RuleId r) const { return nodes_[rules_[r].guard].prev; }
  bool is_guard(int i) const { return nodes_[i].guard; }

  bool same_symbol(int a, int b) const {
    const Node& x = nodes_[a];
    const Node& y = nodes_[b];
    return !x.guard && !y.guard && x.nonterminal == y.nonterminal && x.value == y.value;
  }

  std::uint64_t symbol_key(int i) const {
    const Node& n = nodes_[i];
    return (static_cast<std::uint64_t>(n.value) << 1) | (n.nonterminal ? 0u : 1u);
  }
  std::uint64_t digram_key(int i) const { return (symbol_key(i) << 32) | symbol_key(nodes_[i].next); }

  void delete_digram(int i) {
    if (is_guard(i) || is_guard(nodes_[i].next)) return;
    auto it = index_.find(digram_key(i));
    if (it != index_.end() && it->second == i) index_.erase(it);
  }

  void record_digram(int i) {
    if (is_guard(i) || is_guard(nodes_[i].next)) return;
    index_[digram_key(i)] = i;
  }

  void join(int left, int right) {
    if (nodes_[left].next != kNone) {
      delete_digram(left);
      // In a run like "aaa" only one of the overlapping digrams is indexed;
      // when it goes away the other one has to be recorded.
      const int rp = nodes_[right].prev;
      const int rn = nodes_[right].next;
      if (rp != kNone && rn != kNone && same_symbol(right, rp) && same_symbol(right, rn)) record_digram(right);
      const int lp = nodes_[left].prev;
      const int ln = nodes_[left].next;
      if (lp != kNone && ln != kNone && same_symbol(left, ln) && same_symbol(left, lp)) record_digram(lp);
    }
    nodes_[left].next = right;
    nodes_[right].prev = left;
  }

  void insert_after(int at, int n) {
    join(n, nodes_[at].next);
    join(at, n);
  }

  // Unlinks a symbol node, releasing its digram and its rule reference.
  void remove(int i) {
    join(nodes_[i].prev, nodes_[i].next);
    delete_digram(i);
    if (nodes_[i].nonterminal) --rules_[nodes_[i].value].uses;
  }

  bool check(int i) {
    if (is_guard(i) || is_guard(nodes_[i].next)) return false;
    auto [it, inserted] = index_.try_emplace(digram_key(i), i);
    if (inserted) return false;
    const int found = it->second;
    if (nodes_[found].next != i) match(i, found);
    return true;
  }

  void substitute(int i, RuleId r) {
    const int q = nodes_[i].prev;
    remove(nodes_[q].next);
    remove(nodes_[q].next);
    insert_after(q, new_node(true, r));
    if (!check(q)) check(nodes_[q].next);
  }

  void match(int ss, int m) {
    RuleId r;
    if (is_guard(nodes_[m].prev) && is_guard(nodes_[nodes_[m].next].next)) {
      r = nodes_[nodes_[m].prev].value;
      substitute(ss, r);
    } else {
      r = new_rule();
      const Node a = nodes_[ss];
      const Node b = nodes_[nodes_[ss].next];
      insert_after(last(r), new_node(a.nonterminal, a.value));
      insert_after(last(r), new_node(b.nonterminal, b.value));
      substitute(m, r);
      substitute(ss, r);
      record_digram(first(r));
    }
    const int f = first(r);
    if (nodes_[f].nonterminal && rules_[nodes_[f].value].uses == 1) expand(f);
  }

  // Replaces a nonterminal used once by the body of its rule.
  void expand(int i) {
    const RuleId r = nodes_[i].value;
    const int left = nodes_[i].prev;
    const int right = nodes_[i].next;
    const int f = first(r);
    const int l = last(r);
    join(left, right);
    delete_digram(i);
    rules_[r].uses = 0;
    rules_[r].alive = false;
    join(left, f);
    join(l, right);
    record_digram(l);
  }

  Grammar to_grammar() const {
    std::vector<RuleId> remap(rules_.size(), 0);
    RuleId next_id = 0;
    for (std::size_t r = 0; r < rules_.size(); ++r) {
      if (rules_[r].alive) remap[r] = next_id++;
    }
    std::vector<Production> out;
    out.reserve(next_id);
    for (std::size_t r = 0; r < rules_.size(); ++r) {
      if (!rules_[r].alive) continue;
      Production p;
      for (int i = first(static_cast<RuleId>(r)); !is_guard(i); i = nodes_[i].next) {
        const Node& n = nodes_[i];
        p.push_back(n.nonterminal ? Symbol::nonterminal(remap[n.value]) : Symbol::terminal(n.value));
      }
      out.push_back(std::move(p));
    }
    return Grammar(std::move(out));
  }

  std::vector<Node> nodes_;
  std::vector<RuleSlot> rules_;
  std::unordered_map<std::uint64_t, int> index_;
};

}  // namespace

Grammar sequitur_grammar(std::u32string_view text) { return Sequitur().run(text); }

}  // namespace excesslex::detail
