#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace excesslex {

struct NormalizationProfile {
  bool lowercase = true;
  bool strip_non_letters = true;
  bool remove_spaces = true;
  bool keep_space_as_terminal = false;

  // Throws Error(invalid_spec) when both space options are set.
  void validate() const;

  // JSON object with any of the four keys; missing keys keep their defaults.
  static NormalizationProfile from_json(std::string_view json);
  std::string to_json() const;
};

struct CorpusBundle {
  std::u32string normalized_text;
  // Cuts between characters of normalized_text where a whitespace-separated
  // word ended, excluding 0 and the text length.
  std::vector<std::size_t> reference_boundaries;
  std::string source;       // path, or empty for in-memory input
  std::string profile_hash;  // 16 hex digits, FNV-1a 64 over bytes and profile
};

// Normalizes UTF-8 input in a fixed order: NFC, lowercase, drop characters
// outside the Unicode letter categories (whitespace separates words), record
// word boundaries, then remove spaces or keep single spaces as terminals.
// Throws Error(invalid_encoding) with the byte offset of bad UTF-8 and
// Error(empty_input) when nothing remains.
CorpusBundle normalize(std::string_view utf8, const NormalizationProfile& profile = {});

// normalize() on a file's contents. Throws Error(io_error) if unreadable.
CorpusBundle ingest(const std::string& path, const NormalizationProfile& profile = {});

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// Segments of `text` between consecutive cuts.
std::vector<std::u32string> split_at(std::u32string_view text, const std::vector<std::size_t>& cuts);

// The cyclic unit and prefix of the rose sequence used throughout the entropy
// examples; '_' stands for a space.
inline constexpr std::u32string_view kRosePrefix = U"the";
inline constexpr std::u32string_view kRoseCycle = U"_rose_is_a_hose_is_a";

struct PeriodicSource {
  std::u32string cycle;
  std::u32string prefix;
};

// Independent uniform draws from `alphabet`.
struct IidSource {
  std::u32string alphabet;
  std::uint64_t seed = 0;
};

// Tokens "w<rank>" with P(rank r) proportional to r^-B, 1 <= r <= V.
struct ZipfSource {
  double exponent = 1.0;
  std::size_t types = 0;
  std::uint64_t seed = 0;
};

// First-order chain over `states`; row i of `transition` holds the
// probabilities of moving from state i. The first state is drawn from the
// stationary distribution.
struct MarkovSource {
  std::u32string states;
  std::vector<std::vector<double>> transition;
  std::uint64_t seed = 0;
};

using SourceSpec = std::variant<PeriodicSource, IidSource, ZipfSource, MarkovSource>;

// Parses "periodic:CYCLE[:PREFIX]", "rose", "iid:ALPHABET[:SEED]",
// "zipf:B:V[:SEED]" or "markov:STATES:ROW;ROW...[:SEED]" (rows are
// comma-separated probabilities). `default_seed` fills a missing seed;
// stochastic sources without any seed are rejected with Error(invalid_spec).
SourceSpec parse_source_spec(std::string_view spec, std::optional<std::uint64_t> default_seed = {});

// Deterministic output for a fixed spec and length. For zipf sources the
// length counts tokens, which are joined by single spaces.
std::u32string generate(const SourceSpec& spec, std::size_t length);

std::vector<std::string> generate_zipf_tokens(const ZipfSource& source, std::size_t count);

// Stationary distribution of a transition matrix.
std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition);

}  // namespace excesslex
