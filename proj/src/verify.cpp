#include "excesslex/verify.hpp"

#include <cmath>

#include "excesslex/corpus.hpp"
#include "excesslex/error.hpp"
#include "excesslex/suffix_array.hpp"
#include "excesslex/utf8.hpp"

namespace excesslex {

void InequalityCheckResult::add(Violation v) {
  ++violation_count;
  if (violations.size() < kMaxListed) violations.push_back(std::move(v));
}

namespace {

struct Exact {
  std::size_t length = 0;      // L
  std::size_t vocabulary = 0;  // L0
  std::size_t repeat = 0;      // R
};

std::u32string spell(std::size_t index, std::size_t length, std::size_t k) {
  std::u32string s(length, U'a');
  for (std::size_t i = 0; i < length; ++i, index /= k) s[i] = static_cast<char32_t>(U'a' + index % k);
  return s;
}

}  // namespace

InequalityCheckResult check_theorem3(std::size_t alphabet_size, std::size_t max_length, std::size_t budget) {
  if (budget > kMaxExactBudget || max_length > budget) {
    throw Error(ErrorCode::budget_exceeded, "strings of length " + std::to_string(max_length) +
                                                " exceed the exact search budget " + std::to_string(budget));
  }
  if (alphabet_size == 0 || alphabet_size > 26) throw Error(ErrorCode::invalid_spec, "alphabet size must be 1..26");
  const std::size_t k = alphabet_size;

  // table[m][i]: the string of length m whose i-th letter is digit i of i.
  std::vector<std::vector<Exact>> table(max_length + 1);
  std::vector<std::size_t> power(max_length + 1, 1);
  for (std::size_t m = 1; m <= max_length; ++m) power[m] = power[m - 1] * k;
  InequalityCheckResult result;
  result.name = "theorem3";
  for (std::size_t m = 1; m <= max_length; ++m) {
    table[m].resize(power[m]);
    for (std::size_t i = 0; i < power[m]; ++i) {
      const std::u32string s = spell(i, m, k);
      const auto r = minimal_grammar_exact(s, budget);
      table[m][i] = {r.length, r.vocabulary_length, longest_repeat(s)};
      if (r.length > m) {
        result.add({"L(v) <= |v|", utf8::encode(s), static_cast<double>(r.length), static_cast<double>(m)});
      }
    }
  }

  for (std::size_t a = 1; a < max_length; ++a) {
    for (std::size_t b = 1; a + b <= max_length; ++b) {
      for (std::size_t iv = 0; iv < power[a]; ++iv) {
        for (std::size_t iu = 0; iu < power[b]; ++iu) {
          const Exact& v = table[a][iv];
          const Exact& u = table[b][iu];
          const Exact& vu = table[a + b][iv + iu * power[a]];
          ++result.instances_tested;
          const auto bound = static_cast<double>(vu.length + vu.repeat);
          const auto excess = static_cast<double>(v.length + u.length) - static_cast<double>(vu.length);
          const auto upper = static_cast<double>(vu.vocabulary + vu.repeat);
          auto input = [&] { return utf8::encode(spell(iv, a, k)) + "|" + utf8::encode(spell(iu, b, k)); };
          if (static_cast<double>(v.length) > bound) {
            result.add({"L(v) <= L(vu) + R(vu)", input(), static_cast<double>(v.length), bound});
          }
          if (static_cast<double>(u.length) > bound) {
            result.add({"L(u) <= L(vu) + R(vu)", input(), static_cast<double>(u.length), bound});
          }
          if (excess < 0.0) result.add({"0 <= L(v) + L(u) - L(vu)", input(), 0.0, excess});
          if (excess > upper) result.add({"L(v) + L(u) - L(vu) <= L0(vu) + R(vu)", input(), excess, upper});
        }
      }
    }
  }
  return result;
}

std::string_view to_string(SyntheticSource source) {
  switch (source) {
    case SyntheticSource::periodic: return "periodic";
    case SyntheticSource::iid: return "iid";
    case SyntheticSource::markov: return "markov";
  }
  return "unknown";
}

SyntheticSource parse_synthetic_source(std::string_view name) {
  if (name == "periodic") return SyntheticSource::periodic;
  if (name == "iid") return SyntheticSource::iid;
  if (name == "markov") return SyntheticSource::markov;
  throw Error(ErrorCode::unsupported_source, "no analytic entropy for source '" + std::string(name) + "'");
}

namespace {

constexpr double kMarkovStay = 0.9;

double binary_entropy(double p) { return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p); }

SourceSpec source_spec(SyntheticSource source, std::uint64_t seed) {
  switch (source) {
    case SyntheticSource::periodic: return PeriodicSource{std::u32string(kRoseCycle), U""};
    case SyntheticSource::iid: return IidSource{U"ab", seed};
    case SyntheticSource::markov:
      return MarkovSource{U"ab", {{kMarkovStay, 1.0 - kMarkovStay}, {1.0 - kMarkovStay, kMarkovStay}}, seed};
  }
  throw Error(ErrorCode::unsupported_source, "unknown source");
}

}  // namespace

double analytic_block_entropy(SyntheticSource source, std::size_t n) {
  if (n == 0) return 0.0;
  switch (source) {
    case SyntheticSource::periodic: {
      // The stationary measure of a periodic sequence is the cyclic n-gram
      // distribution of one period; whole periods keep it exact.
      const std::size_t periods = (n + kRoseCycle.size() - 1) / kRoseCycle.size();
      std::u32string text;
      for (std::size_t i = 0; i < periods; ++i) text += kRoseCycle;
      return block_entropy(build_distribution(text, n, WindowMode::circular)).H(n);
    }
    case SyntheticSource::iid: return static_cast<double>(n);
    case SyntheticSource::markov: return 1.0 + static_cast<double>(n - 1) * binary_entropy(kMarkovStay);
  }
  throw Error(ErrorCode::unsupported_source, "unknown source");
}

InequalityCheckResult check_theorem2_synthetic(SyntheticSource source, std::span<const std::size_t> n_set,
                                               Algorithm algorithm, const Theorem2Options& options) {
  if (n_set.empty()) throw Error(ErrorCode::invalid_spec, "empty n set");
  std::size_t n_top = 0;
  for (std::size_t n : n_set) n_top = std::max(n_top, n);
  const std::u32string text = generate(source_spec(source, options.seed), 2 * n_top * options.samples);

  InequalityCheckResult result;
  result.name = "theorem2:" + std::string(to_string(source));
  bool any = false;
  for (std::size_t n : n_set) {
    const double e = 2.0 * analytic_block_entropy(source, n) - analytic_block_entropy(source, 2 * n);
    const double ec = excess_code_length(text, algorithm, n, options.samples).mean;
    const bool holds = ec >= e;
    any = any || holds;
    result.theorem2_rows.push_back({n, e, ec, holds});
    ++result.instances_tested;
  }
  if (!any) {
    const auto& last = result.theorem2_rows.back();
    result.add({"E^C(n) >= E(n) for some tested n", std::string(to_string(source)), last.EC, last.E});
  }
  return result;
}

InequalityCheckResult check_stationarity(const EmpiricalDistribution& dist) {
  InequalityCheckResult result;
  result.name = "stationarity";
  const std::size_t len = dist.source_length();

  const NgramClasses unigrams = dist.classes(1);
  std::size_t total = 0;
  for (std::size_t c : unigrams.counts) total += c;
  ++result.instances_tested;
  if (total != dist.windows(1)) {
    result.add({"sum_a P(a) = 1", "", static_cast<double>(total), static_cast<double>(dist.windows(1))});
  }

  NgramClasses shorter = unigrams;
  for (std::size_t n = 1; n < dist.n_max(); ++n) {
    const NgramClasses longer = dist.classes(n + 1);
    // For each (n+1)-gram class, its leading and trailing n-gram classes.
    std::vector<std::size_t> left(shorter.counts.size(), 0);   // sum_a count(a v)
    std::vector<std::size_t> right(shorter.counts.size(), 0);  // sum_a count(v a)
    std::vector<bool> done(longer.counts.size(), false);
    for (std::size_t s = 0; s < len; ++s) {
      const std::uint32_t c = longer.class_of[s];
      if (c == NgramClasses::kNoWindow || done[c]) continue;
      done[c] = true;
      const std::size_t next = s + 1 == len ? 0 : s + 1;
      left[shorter.class_of[next]] += longer.counts[c];
      right[shorter.class_of[s]] += longer.counts[c];
    }
    const auto names = dist.ngrams(n);
    for (std::size_t v = 0; v < shorter.counts.size(); ++v) {
      ++result.instances_tested;
      const auto count = static_cast<double>(shorter.counts[v]);
      if (left[v] != shorter.counts[v]) {
        result.add({"sum_a count(a v) = count(v)", utf8::encode(names[v].first), static_cast<double>(left[v]), count});
      }
      if (right[v] != shorter.counts[v]) {
        result.add({"sum_a count(v a) = count(v)", utf8::encode(names[v].first), static_cast<double>(right[v]),
                    count});
      }
    }
    shorter = longer;
  }
  return result;
}

}  // namespace excesslex
