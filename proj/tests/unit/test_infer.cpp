#include "doctest.h"
#include "excesslex/error.hpp"
#include "excesslex/grammar_text.hpp"
#include "excesslex/infer.hpp"
#include "excesslex/utf8.hpp"
#include "fixtures.hpp"

using namespace excesslex;

namespace {

void check_output(const Grammar& g, std::u32string_view text) {
  const auto adm = check_admissible(g, text);
  CHECK_MESSAGE(adm.admissible, utf8::encode(text));
  CHECK_MESSAGE(check_irreducible(g).empty(), utf8::encode(text));
  CHECK(grammar_length(g) <= text.size());
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::io_error;
}

}  // namespace

TEST_CASE("heuristic examples") {
  for (auto infer_fn : {&infer_online, &infer_repair}) {
    CHECK(grammar_length(infer_fn(U"abab")) <= 4);
    CHECK(to_text(infer_fn(U"a")) == "R0 -> \"a\"\n");
    CHECK(to_text(infer_fn(U"xyz")) == "R0 -> \"xyz\"\n");
    const Grammar w = infer_fn(fixtures::kWoodchuck);
    check_output(w, fixtures::kWoodchuck);
    CHECK(grammar_length(w) <= 47);
  }
  CHECK(grammar_length(infer_repair(U"aaaa")) <= 4);
  const Grammar abc = infer_repair(U"abcabc");
  CHECK(to_text(abc) == "R0 -> R1 R1\nR1 -> \"abc\"\n");
  CHECK(grammar_length(abc) == 5);
}

TEST_CASE("reduction pass") {
  const Grammar reduced = reduce_to_irreducible(fixtures::word_grammar());
  check_output(reduced, fixtures::kWoodchuck);
  CHECK(grammar_length(reduced) <= 42);

  const Grammar irr = fixtures::irreducible_grammar();
  CHECK(reduce_to_irreducible(irr) == irr);

  CHECK(to_text(reduce_to_irreducible(parse_grammar_text("R0 -> R1\nR1 -> \"ab\"\n"))) == "R0 -> \"ab\"\n");
  // Duplicate expansions merge; the merged rule then repeats.
  const Grammar dup = parse_grammar_text("R0 -> R1 \"x\" R2 \"y\" R1 R2\nR1 -> \"ab\"\nR2 -> \"a\" \"b\"\n");
  const Grammar merged = reduce_to_irreducible(dup);
  check_output(merged, expand(dup));
  CHECK(grammar_length(merged) <= grammar_length(dup));
}

TEST_CASE("reduction on random grammars") {
  Rng rng(5);
  for (int i = 0; i < 400; ++i) {
    const Grammar g = canonicalize(fixtures::random_grammar(rng, 1 + rng.below(7), 6, U"ab"));
    const std::u32string v = expand(g);
    const Grammar r = reduce_to_irreducible(g);
    CHECK(check_admissible(r, v));
    CHECK(check_irreducible(r).empty());
    CHECK(grammar_length(r) <= grammar_length(g));
    CHECK(reduce_to_irreducible(r) == r);
  }
}

TEST_CASE("exact search examples") {
  CHECK(minimal_grammar_exact(U"aaaa").length == 4);
  CHECK(minimal_grammar_exact(U"abcabc").length == 5);
  const auto ab = minimal_grammar_exact(U"ab");
  CHECK(ab.length == 2);
  CHECK(to_text(ab.grammar) == "R0 -> \"ab\"\n");
  const auto a8 = minimal_grammar_exact(U"aaaaaaaa");
  CHECK(a8.length == 6);
  CHECK(a8.vocabulary_length == vocabulary_length(a8.grammar));
  CHECK(a8.proof_of_minimality);
  CHECK(to_text(a8.grammar) == "R0 -> R1 R1\nR1 -> R2 R2\nR2 -> \"aa\"\n");
}

TEST_CASE("exact search errors") {
  CHECK(code_of([] { minimal_grammar_exact(std::u32string(15, U'a')); }) == ErrorCode::budget_exceeded);
  CHECK(code_of([] { minimal_grammar_exact(U"ab", 17); }) == ErrorCode::budget_exceeded);
  CHECK(code_of([] { minimal_grammar_exact(U""); }) == ErrorCode::empty_input);
  CHECK(code_of([] { infer_repair(U""); }) == ErrorCode::empty_input);
  CHECK(code_of([] { infer_online(U""); }) == ErrorCode::empty_input);
  CHECK(minimal_grammar_exact(std::u32string(16, U'a'), 16).length == 8);
  InferenceConfig c;
  c.exact_length_budget = 17;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::invalid_spec);
  CHECK(code_of([] { parse_algorithm("lz77"); }) == ErrorCode::invalid_spec);
}

TEST_CASE("exact search agrees with vocabulary enumeration on short binary strings") {
  for (std::size_t len = 1; len <= 10; ++len) {
    for (const auto& s : fixtures::all_strings(len, 2)) {
      const auto r = minimal_grammar_exact(s);
      REQUIRE_MESSAGE(r.length == fixtures::brute_min_grammar_length(s), utf8::encode(s));
      CHECK(r.length == grammar_length(r.grammar));
      CHECK(check_admissible(r.grammar, s));
      CHECK(check_irreducible(r.grammar).empty());
    }
  }
}

TEST_CASE("heuristics are sandwiched between the optimum and the string length") {
  for (std::size_t len = 1; len <= 12; ++len) {
    for (const auto& s : fixtures::all_strings(len, 2)) {
      const std::size_t best = minimal_grammar_exact(s).length;
      for (const Grammar& g : {infer_online(s), infer_repair(s)}) {
        const std::size_t l = grammar_length(g);
        if (l < best || l > s.size() || !check_admissible(g, s) || !check_irreducible(g).empty()) {
          FAIL("bad heuristic grammar for " << utf8::encode(s) << ":\n" << to_text(g));
        }
      }
    }
  }
}

TEST_CASE("heuristics on larger random and repetitive texts") {
  Rng rng(99);
  for (int i = 0; i < 60; ++i) {
    const std::u32string text = fixtures::random_text(rng, 50 + rng.below(2000), i % 3 ? U"ab" : U"abcdefg");
    check_output(infer_online(text), text);
    check_output(infer_repair(text), text);
  }
  const std::u32string run(1024, U'a');
  CHECK(grammar_length(infer_repair(run)) <= 24);
  CHECK(grammar_length(infer_online(run)) <= 24);
  check_output(infer_online(run), run);
}

TEST_CASE("inference is deterministic") {
  Rng rng(1);
  const std::u32string text = fixtures::random_text(rng, 5000, U"abc");
  CHECK(to_text(infer_repair(text)) == to_text(infer_repair(text)));
  CHECK(to_text(infer_online(text)) == to_text(infer_online(text)));
  InferenceConfig c;
  c.algorithm = Algorithm::online;
  CHECK(infer(text, c) == infer_online(text));
  c.algorithm = Algorithm::exact;
  CHECK(infer(U"abcabc", c) == minimal_grammar_exact(U"abcabc").grammar);
  CHECK(parse_algorithm(to_string(Algorithm::repair)) == Algorithm::repair);
}
