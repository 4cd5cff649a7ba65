#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "excesslex/infer.hpp"

namespace excesslex {

enum class WindowMode { circular, linear };

std::string_view to_string(WindowMode mode);
// Accepts "circular" and "linear"; throws Error(invalid_spec).
WindowMode parse_window_mode(std::string_view name);

// Equivalence classes of the n-gram windows of a text.
struct NgramClasses {
  // Class of the window starting at each position; kNoWindow where a linear
  // window would run past the end.
  std::vector<std::uint32_t> class_of;
  std::vector<std::size_t> counts;  // per class, in lexicographic n-gram order

  static constexpr std::uint32_t kNoWindow = ~std::uint32_t{0};
};

// n-gram counts of a text for 1 <= n <= n_max. Circular mode reads the text
// as a cycle, so there are |text| windows of every length and the marginal
// identities hold exactly; linear mode has |text| - n + 1 windows.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution(std::u32string_view text, std::size_t n_max, WindowMode mode);

  std::size_t source_length() const noexcept { return symbols_.size(); }
  std::size_t n_max() const noexcept { return n_max_; }
  WindowMode mode() const noexcept { return mode_; }
  const std::vector<char32_t>& alphabet() const noexcept { return alphabet_; }

  std::size_t windows(std::size_t n) const;

  // Occurrences of v as a window; |v| must be in [1, n_max].
  std::size_t count(std::u32string_view v) const;
  double probability(std::u32string_view v) const;

  NgramClasses classes(std::size_t n) const;

  // Distinct n-grams with their counts, in lexicographic order.
  std::vector<std::pair<std::u32string, std::size_t>> ngrams(std::size_t n) const;

 private:
  std::u32string window(std::size_t start, std::size_t n) const;
  bool fits(std::size_t start, std::size_t n) const {
    return mode_ == WindowMode::circular || symbols_.size() - start >= n;
  }
  template <typename F>
  void for_each_group(std::size_t n, F&& f) const;

  std::vector<std::uint32_t> symbols_;
  std::vector<char32_t> alphabet_;
  std::size_t n_max_;
  WindowMode mode_;
  std::vector<std::uint32_t> order_;  // sorted rotations or suffixes
  std::vector<std::uint32_t> lcp_;    // with the previous entry, capped at n_max
};

// Throws Error(text_too_short) unless |text| >= n_max >= 1.
EmpiricalDistribution build_distribution(std::u32string_view text, std::size_t n_max,
                                         WindowMode mode = WindowMode::circular);

struct BlockEntropyRow {
  std::size_t n = 0;
  double H = 0.0;
  double Hp = 0.0;   // H(n) - H(n-1); 0 for n = 0
  double Hpp = 0.0;  // H(n) - 2H(n-1) + H(n-2); NaN for n < 2
  std::size_t distinct = 0;
  bool reliable = false;  // sample length >= 2^H(n)
};

struct BlockEntropyTable {
  std::size_t source_length = 0;  // 0 for synthetic tables
  std::vector<BlockEntropyRow> rows;  // rows[n] holds n, starting at 0

  std::size_t n_max() const { return rows.empty() ? 0 : rows.size() - 1; }
  double H(std::size_t n) const { return rows.at(n).H; }
};

// Plug-in estimate in bits, H(0) = 0.
BlockEntropyTable block_entropy(const EmpiricalDistribution& dist);

// Table from exact values H(0..k); H(0) must be 0. Rows are marked reliable
// and distinct is 0.
BlockEntropyTable synthetic_table(std::span<const double> h_values);

struct ExcessEntropyRow {
  std::size_t n = 0;
  double E = 0.0;
};

// E(n) = 2H(n) - H(2n) for every n >= 1 with 2n in the table.
std::vector<ExcessEntropyRow> excess_entropy(const BlockEntropyTable& table);

struct HilbergFit {
  double h0 = 0.0;
  double h_mu = 0.0;
  double mu = 0.0;
  double h = 0.0;
  double sse = 0.0;
  bool degenerate = false;  // h_mu indistinguishable from 0
  std::size_t rows_used = 0;
};

// Fits H(n) = h0 + h_mu n^mu + h n over the reliable rows with n in
// [n_lo, n_hi]. mu runs over 0.01..0.99; for each mu the linear least squares
// problem with h_mu, h >= 0 is solved exactly. Throws
// Error(insufficient_reliable_rows) with fewer than 4 usable rows.
HilbergFit fit_hilberg(const BlockEntropyTable& table, std::size_t n_lo, std::size_t n_hi);

struct EntropyRate {
  double from_blocks = 0.0;            // H'(n_max)
  std::optional<double> from_code;     // bits per character of a grammar code
};

EntropyRate entropy_rate(const BlockEntropyTable& table, std::optional<double> code_bits_per_character = {});

struct ExcessCodeLength {
  std::size_t n = 0;
  std::size_t samples = 0;
  double mean = 0.0;
  std::vector<double> values;  // C(v) + C(u) - C(vu) per window pair, in bits
};

// Averages C(v) + C(u) - C(vu) over adjacent windows v, u of length n at
// evenly spaced offsets. Throws Error(text_too_short) unless
// |text| >= 2 n samples.
ExcessCodeLength excess_code_length(std::u32string_view text, Algorithm algorithm, std::size_t n,
                                    std::size_t samples);

}  // namespace excesslex
