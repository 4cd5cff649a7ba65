#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "excesslex/entropy.hpp"
#include "excesslex/infer.hpp"

namespace excesslex {

struct Violation {
  std::string relation;  // which inequality or identity failed
  std::string input;     // offending strings, UTF-8
  double lhs = 0.0;
  double rhs = 0.0;
};

struct Theorem2Row {
  std::size_t n = 0;
  double E = 0.0;   // analytic 2H(n) - H(2n)
  double EC = 0.0;  // mean excess code length
  bool holds = false;
};

struct InequalityCheckResult {
  std::string name;
  std::size_t instances_tested = 0;
  std::size_t violation_count = 0;
  std::vector<Violation> violations;  // the first kMaxListed
  std::vector<Theorem2Row> theorem2_rows;

  static constexpr std::size_t kMaxListed = 100;

  bool passed() const noexcept { return violation_count == 0; }
  void add(Violation v);
};

// For all strings v, u over the first `alphabet_size` letters with
// |v| + |u| <= max_length, using exact smallest grammars and longest_repeat:
//   L(v) <= |v|
//   L(v), L(u) <= L(vu) + R(vu)
//   0 <= L(v) + L(u) - L(vu) <= L0(vu) + R(vu)
// where L is the smallest grammar length, L0 its vocabulary length and R the
// longest repeat. Throws Error(budget_exceeded) if max_length > budget.
InequalityCheckResult check_theorem3(std::size_t alphabet_size, std::size_t max_length,
                                     std::size_t budget = kDefaultExactBudget);

enum class SyntheticSource { periodic, iid, markov };

std::string_view to_string(SyntheticSource source);
// Accepts "periodic", "iid" and "markov"; throws Error(unsupported_source).
SyntheticSource parse_synthetic_source(std::string_view name);

struct Theorem2Options {
  std::size_t samples = 16;  // window pairs per n
  std::uint64_t seed = 1;
};

// Exact block entropies of the built-in sources:
//   periodic: the rose cycle, H(n) from its cyclic n-gram distribution
//   iid:      uniform binary, H(n) = n
//   markov:   binary chain staying in its state with probability 0.9,
//             H(n) = 1 + (n - 1) h2(0.9) with h2 the binary entropy
double analytic_block_entropy(SyntheticSource source, std::size_t n);

// Compares the analytic E(n) with the mean excess code length measured on
// generated text for each n; a violation is recorded when no n satisfies
// E^C(n) >= E(n).
InequalityCheckResult check_theorem2_synthetic(SyntheticSource source, std::span<const std::size_t> n_set,
                                               Algorithm algorithm, const Theorem2Options& options = {});

// Checks sum_a count(a v) = count(v) = sum_a count(v a) for every n-gram v
// with n < n_max, and that the unigram probabilities sum to one, on integer
// counts.
InequalityCheckResult check_stationarity(const EmpiricalDistribution& dist);

}  // namespace excesslex
