#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "excesslex/grammar.hpp"
#include "excesslex/infer.hpp"

namespace excesslex {

struct RankRow {
  std::string token;
  std::uint64_t count = 0;
  std::size_t rank = 0;  // 1-based
};

struct RankFrequencyTable {
  std::vector<RankRow> rows;  // by count descending, ties by token
  std::size_t types = 0;      // V
  std::uint64_t tokens = 0;   // N
};

// Throws Error(empty_input) on an empty sequence.
RankFrequencyTable rank_frequency(std::span<const std::string> tokens);

// Table from counts already sorted or not; tokens are named "r<rank>".
RankFrequencyTable rank_frequency_from_counts(std::vector<std::uint64_t> counts);

struct ZipfFit {
  double single_B = 0.0;
  double single_intercept = 0.0;
  double B1 = 0.0;
  double B2 = 0.0;
  std::size_t R1 = 0;  // last rank of the first regime
  double sse_single = 0.0;
  double sse_two = 0.0;
};

// Least squares on (log r, log c) over all ranks, and the two-segment fit
// whose breakpoint R1 in [2, V-2] minimises the total squared error (the
// smallest such R1 on ties). Throws Error(too_few_types) when V < 10.
ZipfFit fit_zipf(const RankFrequencyTable& table);

struct GrowthPoint {
  std::size_t length = 0;  // N: tokens, or characters for grammar growth
  std::size_t value = 0;   // V: types, or vocabulary length
};

struct GrowthCurve {
  std::vector<GrowthPoint> points;
  double exponent = 0.0;  // rho or alpha from the log-log fit
  double intercept = 0.0;
  // For grammar growth: c |v|^0.5 / log2 |v| scaled to the first point.
  std::vector<double> comparison;
};

// 2^10, 2^11, ... up to `total` (the start alone if total is smaller).
std::vector<std::size_t> geometric_schedule(std::size_t total, std::size_t start = 1024, std::size_t ratio = 2);

struct Tokenizer {
  enum class Kind { spaces, grammar } kind = Kind::spaces;
  Algorithm algorithm = Algorithm::repair;
};

// Word tokens of a text: the segments between reference cuts, or the
// depth-1 nonterminal spans of the inferred grammar.
std::vector<std::u32string> tokenize_words(std::u32string_view text, std::span<const std::size_t> reference_cuts,
                                           const Tokenizer& tokenizer);

// V(N) over character prefixes of `text`; a prefix counts the words that end
// inside it. The exponent is fitted over points with V > 0. Throws
// Error(invalid_spec) with fewer than 5 prefix lengths.
GrowthCurve guiraud_curve(std::u32string_view text, std::span<const std::size_t> reference_cuts,
                          std::span<const std::size_t> schedule, const Tokenizer& tokenizer);

// Same over token prefixes of a token sequence.
GrowthCurve guiraud_curve_tokens(std::span<const std::string> tokens, std::span<const std::size_t> schedule);

// Points (|v|, vocabulary_length(infer(v))) over prefixes v of `text`.
GrowthCurve grammar_vocab_growth(std::u32string_view text, std::span<const std::size_t> schedule,
                                 Algorithm algorithm);

struct BoundaryScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t predicted = 0;
  std::size_t reference = 0;
  std::size_t matched = 0;
  bool precision_defaulted = false;  // nothing predicted; precision set to 1
  bool recall_defaulted = false;     // empty reference; recall set to 1
};

// Cuts at the edges of depth-1 spans and gaps, excluding 0 and the length.
std::vector<std::size_t> boundary_cuts(const Tokenization& tokenization);

// Throws Error(length_mismatch) when a cut lies outside (0, text_length).
BoundaryScore boundary_agreement(std::span<const std::size_t> predicted, std::span<const std::size_t> reference,
                                 std::size_t text_length);

// Throws Error(length_mismatch) when the tokenization covers another length.
BoundaryScore boundary_agreement(const Tokenization& predicted, std::span<const std::size_t> reference,
                                 std::size_t text_length);

// `count` distinct cuts drawn uniformly from 1..text_length-1, ascending.
std::vector<std::size_t> random_boundaries(std::size_t text_length, std::size_t count, std::uint64_t seed);

struct MenzerathRow {
  RuleId rule = 0;
  std::size_t construct_length = 0;        // symbols in the production
  double mean_constituent_length = 0.0;    // mean expansion length of those symbols
};

struct MenzerathTable {
  std::vector<MenzerathRow> rows;
  double slope = 0.0;  // log mean constituent length against log construct length
  double intercept = 0.0;
};

// One row per non-initial rule. Throws Error(too_few_rules) below 5 rules.
MenzerathTable menzerath(const Grammar& grammar);

}  // namespace excesslex
