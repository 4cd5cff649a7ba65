#include <cmath>
#include <set>

#include "doctest.h"
#include "excesslex/corpus.hpp"
#include "excesslex/error.hpp"
#include "excesslex/lexical.hpp"
#include "excesslex/regression.hpp"
#include "excesslex/utf8.hpp"
#include "fixtures.hpp"

using namespace excesslex;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::io_error;
}

// Token stream whose type count after N tokens is ceil(N^0.75).
std::vector<std::string> power_growth_tokens(std::size_t count, double rho) {
  std::vector<std::string> out;
  std::size_t types = 0;
  for (std::size_t n = 1; n <= count; ++n) {
    const auto target = static_cast<std::size_t>(std::ceil(std::pow(double(n), rho) - 1e-9));
    if (target > types) {
      out.push_back("t" + std::to_string(types++));
    } else {
      out.push_back("t" + std::to_string(n % types));
    }
  }
  return out;
}

std::vector<std::uint64_t> two_regime_counts() {
  std::vector<std::uint64_t> c;
  for (int r = 1; r <= 5000; ++r) {
    const double v = r <= 500 ? 1e7 / r : 1e7 * std::pow(500.0, 1.3) * std::pow(double(r), -2.3);
    c.push_back(static_cast<std::uint64_t>(std::llround(v)));
  }
  return c;
}

}  // namespace

TEST_CASE("rank frequency basics") {
  const std::vector<std::string> tokens{"a", "b", "a"};
  const auto t = rank_frequency(tokens);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].token == "a");
  CHECK(t.rows[0].count == 2);
  CHECK(t.rows[0].rank == 1);
  CHECK(t.rows[1].token == "b");
  CHECK(t.rows[1].rank == 2);
  CHECK(t.types == 2);
  CHECK(t.tokens == 3);

  CHECK(rank_frequency(std::vector<std::string>(5, "x")).types == 1);
  CHECK(code_of([] { rank_frequency(std::vector<std::string>{}); }) == ErrorCode::empty_input);

  // Ties break by token.
  const auto tie = rank_frequency(std::vector<std::string>{"z", "y", "x", "y", "z"});
  CHECK(tie.rows[0].token == "y");
  CHECK(tie.rows[1].token == "z");
}

TEST_CASE("rank frequency invariants") {
  const auto tokens = generate_zipf_tokens({1.1, 300, 5}, 20000);
  const auto t = rank_frequency(tokens);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    total += t.rows[i].count;
    CHECK(t.rows[i].rank == i + 1);
    if (i) CHECK(t.rows[i].count <= t.rows[i - 1].count);
  }
  CHECK(total == tokens.size());
  CHECK(t.tokens == tokens.size());
}

TEST_CASE("zipf fit on a sampled power law") {
  const auto t = rank_frequency(generate_zipf_tokens({1.33, 1000, 7}, 1000000));
  const ZipfFit f = fit_zipf(t);
  CHECK(std::abs(f.single_B - 1.33) <= 0.1);
}

TEST_CASE("zipf fit on exact laws") {
  std::vector<std::uint64_t> single;
  for (int r = 1; r <= 1000; ++r) single.push_back(std::llround(1e12 * std::pow(double(r), -1.33)));
  const ZipfFit s = fit_zipf(rank_frequency_from_counts(single));
  CHECK(s.single_B == doctest::Approx(1.33).epsilon(0.01));
  CHECK(s.sse_two <= s.sse_single);
  CHECK(std::abs(s.B1 - 1.33) <= 0.1);
  CHECK(std::abs(s.B2 - 1.33) <= 0.1);

  const ZipfFit two = fit_zipf(rank_frequency_from_counts(two_regime_counts()));
  CHECK(std::abs(two.B1 - 1.0) <= 0.1);
  CHECK(std::abs(two.B2 - 2.3) <= 0.15);
  CHECK(std::abs(double(two.R1) - 500.0) <= 50.0);

  const ZipfFit flat = fit_zipf(rank_frequency_from_counts(std::vector<std::uint64_t>(50, 7)));
  CHECK(flat.single_B == doctest::Approx(0.0));

  CHECK(code_of([] { fit_zipf(rank_frequency_from_counts({5, 4, 3, 2, 1, 1, 1, 1, 1})); }) ==
        ErrorCode::too_few_types);
}

TEST_CASE("two-segment fit is the best breakpoint") {
  // Compare with an independent breakpoint scan using fit_line on slices.
  Rng rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::uint64_t> counts;
    for (int r = 1; r <= 60; ++r) counts.push_back(1 + rng.below(1000));
    const auto table = rank_frequency_from_counts(counts);
    std::vector<double> x, y;
    for (const auto& row : table.rows) {
      x.push_back(std::log(double(row.rank)));
      y.push_back(std::log(double(row.count)));
    }
    double best = INFINITY;
    std::size_t best_r1 = 0;
    for (std::size_t r1 = 2; r1 + 2 <= x.size(); ++r1) {
      const auto a = fit_line(std::span(x).first(r1), std::span(y).first(r1));
      const auto b = fit_line(std::span(x).subspan(r1), std::span(y).subspan(r1));
      if (a.sse + b.sse < best - 1e-9) {
        best = a.sse + b.sse;
        best_r1 = r1;
      }
    }
    const ZipfFit f = fit_zipf(table);
    CHECK(f.R1 == best_r1);
    CHECK(f.sse_two == doctest::Approx(best).epsilon(1e-6));
  }
}

TEST_CASE("guiraud curve on constructed growth") {
  const auto tokens = power_growth_tokens(1u << 20, 0.75);
  const auto schedule = geometric_schedule(tokens.size());
  CHECK(schedule.size() == 11);
  const GrowthCurve c = guiraud_curve_tokens(tokens, schedule);
  for (const auto& p : c.points) CHECK(p.value == static_cast<std::size_t>(std::ceil(std::pow(double(p.length), 0.75) - 1e-9)));
  CHECK(std::abs(c.exponent - 0.75) <= 0.02);
}

TEST_CASE("guiraud curve on one repeated word") {
  std::string text;
  for (int i = 0; i < 40000; ++i) text += "rose ";
  const CorpusBundle b = normalize(text);
  const GrowthCurve c = guiraud_curve(b.normalized_text, b.reference_boundaries,
                                      geometric_schedule(b.normalized_text.size()), Tokenizer{});
  for (const auto& p : c.points) CHECK(p.value == 1);
  CHECK(std::abs(c.exponent) <= 1e-9);
}

TEST_CASE("guiraud counts complete words") {
  // Words "ab", "cde", "f" -> cuts 2, 5.
  const std::u32string text = U"abcdef";
  const std::vector<std::size_t> cuts{2, 5};
  const auto words = tokenize_words(text, cuts, Tokenizer{});
  CHECK(words == std::vector<std::u32string>{U"ab", U"cde", U"f"});
  CHECK(code_of([&] { guiraud_curve(text, cuts, std::vector<std::size_t>{1, 2, 3, 4}, Tokenizer{}); }) ==
        ErrorCode::invalid_spec);
  const GrowthCurve c = guiraud_curve(text, cuts, std::vector<std::size_t>{1, 2, 3, 5, 6}, Tokenizer{});
  std::vector<std::size_t> values;
  for (const auto& p : c.points) values.push_back(p.value);
  CHECK(values == std::vector<std::size_t>{0, 1, 1, 2, 3});
}

TEST_CASE("grammar tokenizer uses depth-one spans") {
  const std::u32string text = U"abcabcxabcabcyabcabc";
  Tokenizer tk;
  tk.kind = Tokenizer::Kind::grammar;
  const auto words = tokenize_words(text, {}, tk);
  const Grammar g = infer_repair(text);
  std::vector<std::u32string> expected;
  for (const auto& s : tokenize(g, 1).spans_at_depth(1)) expected.push_back(text.substr(s.start, s.end - s.start));
  CHECK(words == expected);
  // The stray x and y are gaps, not words.
  CHECK(words == std::vector<std::u32string>{U"abcabc", U"abcabc", U"abcabc"});
}

TEST_CASE("grammar vocabulary growth on a constant text") {
  const std::u32string text(1u << 16, U'a');
  const GrowthCurve c = grammar_vocab_growth(text, geometric_schedule(text.size()), Algorithm::repair);
  REQUIRE(c.points.size() == 7);
  for (const auto& p : c.points) CHECK(double(p.value) <= 2.0 * std::log2(double(p.length)) + 2.0);
  CHECK(c.exponent < 0.3);
  REQUIRE(c.comparison.size() == c.points.size());
  CHECK(c.comparison[0] == doctest::Approx(double(c.points[0].value)));
  const double shape0 = std::sqrt(1024.0) / std::log2(1024.0);
  const double shape1 = std::sqrt(2048.0) / std::log2(2048.0);
  CHECK(c.comparison[1] / c.comparison[0] == doctest::Approx(shape1 / shape0));
}

TEST_CASE("geometric schedule") {
  CHECK(geometric_schedule(5000) == std::vector<std::size_t>{1024, 2048, 4096});
  CHECK(geometric_schedule(100) == std::vector<std::size_t>{1024});
  CHECK(geometric_schedule(4096) == std::vector<std::size_t>{1024, 2048, 4096});
}

TEST_CASE("boundary agreement") {
  const std::vector<std::size_t> ref{3, 5, 9};
  const auto same = boundary_agreement(ref, ref, 12);
  CHECK(same.precision == 1.0);
  CHECK(same.recall == 1.0);
  CHECK(same.f1 == 1.0);

  const auto none = boundary_agreement(std::vector<std::size_t>{}, ref, 12);
  CHECK(none.recall == 0.0);
  CHECK(none.precision == 1.0);
  CHECK(none.precision_defaulted);
  CHECK(none.predicted == 0);

  const auto part = boundary_agreement(std::vector<std::size_t>{3, 4}, ref, 12);
  CHECK(part.matched == 1);
  CHECK(part.precision == doctest::Approx(0.5));
  CHECK(part.recall == doctest::Approx(1.0 / 3));
  CHECK(part.f1 == doctest::Approx(2 * 0.5 / 3 / (0.5 + 1.0 / 3)));
  CHECK(part.matched <= std::min(part.predicted, part.reference));

  const auto empty_ref = boundary_agreement(std::vector<std::size_t>{2}, std::vector<std::size_t>{}, 12);
  CHECK(empty_ref.recall_defaulted);

  CHECK(code_of([&] { boundary_agreement(std::vector<std::size_t>{12}, ref, 12); }) == ErrorCode::length_mismatch);
  CHECK(code_of([&] { boundary_agreement(std::vector<std::size_t>{0}, ref, 12); }) == ErrorCode::length_mismatch);
}

TEST_CASE("adding a correct boundary never lowers recall") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ref = random_boundaries(200, 30, rng.next());
    auto pred = random_boundaries(200, 20, rng.next());
    const double before = boundary_agreement(pred, ref, 200).recall;
    pred.push_back(ref[rng.below(ref.size())]);
    std::sort(pred.begin(), pred.end());
    pred.erase(std::unique(pred.begin(), pred.end()), pred.end());
    CHECK(boundary_agreement(pred, ref, 200).recall >= before);
  }
}

TEST_CASE("worked grammar matches the spaces") {
  const CorpusBundle b = normalize(fixtures::kWoodchuckSpaced);
  CHECK(b.normalized_text == fixtures::kWoodchuck);
  const auto score = boundary_agreement(tokenize(fixtures::word_grammar(), 1), b.reference_boundaries,
                                        b.normalized_text.size());
  CHECK(score.f1 == 1.0);
  CHECK(score.matched == 9);
  CHECK(boundary_cuts(tokenize(fixtures::irreducible_grammar(), 1)) ==
        std::vector<std::size_t>{2, 6, 16, 21, 23, 33, 34, 38, 43});
  CHECK(code_of([&] { boundary_agreement(tokenize(fixtures::word_grammar(), 1), b.reference_boundaries, 40); }) ==
        ErrorCode::length_mismatch);
}

TEST_CASE("random boundaries") {
  const auto a = random_boundaries(100, 40, 5);
  CHECK(a.size() == 40);
  CHECK(std::is_sorted(a.begin(), a.end()));
  CHECK(std::set<std::size_t>(a.begin(), a.end()).size() == 40);
  CHECK(a.front() >= 1);
  CHECK(a.back() <= 99);
  CHECK(a == random_boundaries(100, 40, 5));
  CHECK(random_boundaries(10, 9, 1) == std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK_THROWS_AS(random_boundaries(10, 10, 1), Error);
}

TEST_CASE("menzerath rows") {
  const MenzerathTable t = menzerath(fixtures::irreducible_grammar());
  REQUIRE(t.rows.size() == 4);
  bool found = false;
  for (const auto& r : t.rows) {
    if (r.rule == 4) {
      found = true;
      CHECK(r.construct_length == 3);
      CHECK(r.mean_constituent_length == doctest::Approx(10.0 / 3));
    }
  }
  CHECK(found);

  // Identical structure everywhere gives a flat line.
  const Grammar same = parse_grammar_text(
      "R0 -> R1 R1 R2 R2 R3 R3 R4 R4 R5 R5\nR1 -> \"ab\"\nR2 -> \"cd\"\nR3 -> \"ef\"\nR4 -> \"gh\"\nR5 -> \"ij\"\n");
  CHECK(menzerath(same).slope == doctest::Approx(0.0));

  CHECK(code_of([] { menzerath(Grammar::single_rule(U"abc")); }) == ErrorCode::too_few_rules);
}

TEST_CASE("menzerath lengths agree with expansion") {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const Grammar g = fixtures::random_grammar(rng, 6 + rng.below(6), 5, U"abc");
    const MenzerathTable t = menzerath(g);
    for (const auto& r : t.rows) {
      const auto& p = g.rule(r.rule);
      CHECK(r.construct_length == p.size());
      double sum = 0.0;
      for (Symbol s : p) sum += s.is_terminal() ? 1.0 : double(expand_rule(g, s.rule()).size());
      CHECK(r.mean_constituent_length == doctest::Approx(sum / double(p.size())));
      CHECK(r.construct_length >= 1);
      CHECK(r.mean_constituent_length >= 1.0);
    }
  }
}
