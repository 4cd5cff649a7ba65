#include "excesslex/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "excesslex/codec.hpp"
#include "excesslex/error.hpp"
#include "excesslex/regression.hpp"
#include "excesslex/suffix_array.hpp"

namespace excesslex {

std::string_view to_string(WindowMode mode) {
  return mode == WindowMode::circular ? "circular" : "linear";
}

WindowMode parse_window_mode(std::string_view name) {
  if (name == "circular") return WindowMode::circular;
  if (name == "linear") return WindowMode::linear;
  throw Error(ErrorCode::invalid_spec, "unknown window mode '" + std::string(name) + "'");
}

EmpiricalDistribution::EmpiricalDistribution(std::u32string_view text, std::size_t n_max, WindowMode mode)
    : n_max_(n_max), mode_(mode) {
  if (n_max == 0) throw Error(ErrorCode::invalid_spec, "n_max must be at least 1");
  if (text.size() < n_max) {
    throw Error(ErrorCode::text_too_short,
                "text of length " + std::to_string(text.size()) + " is shorter than n_max " + std::to_string(n_max));
  }
  DenseText dense = densify(text);
  symbols_ = std::move(dense.symbols);
  alphabet_ = std::move(dense.alphabet);
  const auto k = static_cast<std::uint32_t>(alphabet_.size());
  const std::size_t len = symbols_.size();
  lcp_.assign(len, 0);
  if (mode == WindowMode::circular) {
    order_ = sort_cyclic_shifts(symbols_, k);
    for (std::size_t i = 1; i < len; ++i) {
      std::size_t a = order_[i - 1];
      std::size_t b = order_[i];
      std::uint32_t l = 0;
      while (l < n_max && symbols_[a] == symbols_[b]) {
        ++l;
        a = a + 1 == len ? 0 : a + 1;
        b = b + 1 == len ? 0 : b + 1;
      }
      lcp_[i] = l;
    }
  } else {
    order_ = suffix_array(symbols_, k);
    const auto full = lcp_array(symbols_, order_);
    for (std::size_t i = 0; i < len; ++i) lcp_[i] = std::min<std::uint32_t>(full[i], static_cast<std::uint32_t>(n_max));
  }
}

std::size_t EmpiricalDistribution::windows(std::size_t n) const {
  if (mode_ == WindowMode::circular) return symbols_.size();
  return n <= symbols_.size() ? symbols_.size() - n + 1 : 0;
}

template <typename F>
void EmpiricalDistribution::for_each_group(std::size_t n, F&& f) const {
  // Calls f(begin, end, windows) per n-gram; in linear mode [begin, end) may
  // also hold suffixes shorter than n, which are not windows.
  const std::size_t len = order_.size();
  std::size_t begin = len;  // start of the open group
  std::size_t members = 0;
  std::uint32_t run_lcp = std::numeric_limits<std::uint32_t>::max();
  for (std::size_t i = 0; i < len; ++i) {
    if (i > 0) run_lcp = std::min(run_lcp, lcp_[i]);
    if (!fits(order_[i], n)) continue;
    if (begin != len && run_lcp < n) {
      f(begin, i, members);
      begin = len;
    }
    if (begin == len) {
      begin = i;
      members = 0;
    }
    ++members;
    run_lcp = std::numeric_limits<std::uint32_t>::max();
  }
  if (begin != len) f(begin, len, members);
}

std::size_t EmpiricalDistribution::count(std::u32string_view v) const {
  if (v.empty() || v.size() > n_max_) {
    throw Error(ErrorCode::invalid_spec, "n-gram length must be in [1, n_max]");
  }
  std::vector<std::uint32_t> dv;
  for (char32_t c : v) {
    const auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), c);
    if (it == alphabet_.end() || *it != c) return 0;
    dv.push_back(static_cast<std::uint32_t>(it - alphabet_.begin()));
  }
  const std::size_t len = symbols_.size();
  // -1, 0, 1 as the window at `start` compares to dv (a short linear window
  // that is a prefix of dv compares less).
  auto cmp = [&](std::size_t start) {
    for (std::size_t j = 0; j < dv.size(); ++j) {
      std::size_t p = start + j;
      if (p >= len) {
        if (mode_ == WindowMode::linear) return -1;
        p -= len;
      }
      if (symbols_[p] != dv[j]) return symbols_[p] < dv[j] ? -1 : 1;
    }
    return 0;
  };
  const auto lo = std::partition_point(order_.begin(), order_.end(), [&](std::uint32_t s) { return cmp(s) < 0; });
  const auto hi = std::partition_point(lo, order_.end(), [&](std::uint32_t s) { return cmp(s) == 0; });
  return static_cast<std::size_t>(hi - lo);
}

double EmpiricalDistribution::probability(std::u32string_view v) const {
  return static_cast<double>(count(v)) / static_cast<double>(windows(v.size()));
}

NgramClasses EmpiricalDistribution::classes(std::size_t n) const {
  NgramClasses out;
  out.class_of.assign(symbols_.size(), NgramClasses::kNoWindow);
  for_each_group(n, [&](std::size_t b, std::size_t e, std::size_t members) {
    const auto id = static_cast<std::uint32_t>(out.counts.size());
    for (std::size_t i = b; i < e; ++i) {
      if (fits(order_[i], n)) out.class_of[order_[i]] = id;
    }
    out.counts.push_back(members);
  });
  return out;
}

std::u32string EmpiricalDistribution::window(std::size_t start, std::size_t n) const {
  std::u32string w;
  for (std::size_t j = 0; j < n; ++j) w.push_back(alphabet_[symbols_[(start + j) % symbols_.size()]]);
  return w;
}

std::vector<std::pair<std::u32string, std::size_t>> EmpiricalDistribution::ngrams(std::size_t n) const {
  std::vector<std::pair<std::u32string, std::size_t>> out;
  for_each_group(n, [&](std::size_t b, std::size_t, std::size_t members) {
    out.emplace_back(window(order_[b], n), members);
  });
  return out;
}

EmpiricalDistribution build_distribution(std::u32string_view text, std::size_t n_max, WindowMode mode) {
  return EmpiricalDistribution(text, n_max, mode);
}

namespace {

void fill_differences(BlockEntropyTable& t) {
  for (std::size_t n = 0; n < t.rows.size(); ++n) {
    auto& r = t.rows[n];
    r.n = n;
    r.Hp = n >= 1 ? r.H - t.rows[n - 1].H : 0.0;
    r.Hpp = n >= 2 ? r.H - 2.0 * t.rows[n - 1].H + t.rows[n - 2].H : std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

BlockEntropyTable block_entropy(const EmpiricalDistribution& dist) {
  BlockEntropyTable t;
  t.source_length = dist.source_length();
  t.rows.resize(dist.n_max() + 1);
  t.rows[0].distinct = 1;
  t.rows[0].reliable = true;
  const double len = static_cast<double>(dist.source_length());
  for (std::size_t n = 1; n <= dist.n_max(); ++n) {
    const double w = static_cast<double>(dist.windows(n));
    double h = 0.0;
    std::size_t distinct = 0;
    for (std::size_t c : dist.classes(n).counts) {
      const double p = static_cast<double>(c) / w;
      h -= p * std::log2(p);
      ++distinct;
    }
    t.rows[n].H = h;
    t.rows[n].distinct = distinct;
    t.rows[n].reliable = len >= std::exp2(h);
  }
  fill_differences(t);
  return t;
}

BlockEntropyTable synthetic_table(std::span<const double> h_values) {
  if (h_values.empty() || h_values[0] != 0.0) {
    throw Error(ErrorCode::invalid_spec, "synthetic tables start with H(0) = 0");
  }
  BlockEntropyTable t;
  t.rows.resize(h_values.size());
  for (std::size_t n = 0; n < h_values.size(); ++n) {
    t.rows[n].H = h_values[n];
    t.rows[n].reliable = true;
  }
  fill_differences(t);
  return t;
}

std::vector<ExcessEntropyRow> excess_entropy(const BlockEntropyTable& table) {
  std::vector<ExcessEntropyRow> out;
  for (std::size_t n = 1; 2 * n <= table.n_max(); ++n) out.push_back({n, 2.0 * table.H(n) - table.H(2 * n)});
  return out;
}

HilbergFit fit_hilberg(const BlockEntropyTable& table, std::size_t n_lo, std::size_t n_hi) {
  std::vector<double> ns;
  std::vector<double> ys;
  for (const auto& r : table.rows) {
    if (r.reliable && r.n >= n_lo && r.n <= n_hi) {
      ns.push_back(static_cast<double>(r.n));
      ys.push_back(r.H);
    }
  }
  if (ns.size() < 4) {
    throw Error(ErrorCode::insufficient_reliable_rows,
                std::to_string(ns.size()) + " reliable rows in range, need at least 4");
  }
  const std::size_t m = ns.size();
  const std::vector<double> ones(m, 1.0);

  HilbergFit best;
  best.sse = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 99; ++i) {
    const double mu = i / 100.0;
    std::vector<double> pw(m);
    for (std::size_t j = 0; j < m; ++j) pw[j] = std::pow(ns[j], mu);
    // Every face of the constraint set {h_mu >= 0, h >= 0}; the best feasible
    // face solution is the constrained optimum.
    for (int face = 0; face < 4; ++face) {
      const bool use_mu = face == 0 || face == 1;
      const bool use_h = face == 0 || face == 2;
      std::vector<std::vector<double>> cols{ones};
      if (use_mu) cols.push_back(pw);
      if (use_h) cols.push_back(ns);
      double sse = 0.0;
      const auto coef = least_squares(cols, ys, &sse);
      const double h_mu = use_mu ? coef[1] : 0.0;
      const double h = use_h ? coef.back() : 0.0;
      if (h_mu < 0.0 || h < 0.0) continue;
      if (sse < best.sse) {
        best.h0 = coef[0];
        best.h_mu = h_mu;
        best.h = h;
        best.mu = mu;
        best.sse = sse;
      }
    }
  }
  double scale = 1.0;
  for (double y : ys) scale = std::max(scale, std::abs(y));
  const double threshold = std::max(std::sqrt(best.sse / static_cast<double>(m)), 1e-9 * scale);
  best.degenerate = best.h_mu <= threshold;
  best.rows_used = m;
  return best;
}

EntropyRate entropy_rate(const BlockEntropyTable& table, std::optional<double> code_bits_per_character) {
  if (table.rows.size() < 2) throw Error(ErrorCode::insufficient_reliable_rows, "entropy rate needs n_max >= 1");
  return {table.rows.back().Hp, code_bits_per_character};
}

ExcessCodeLength excess_code_length(std::u32string_view text, Algorithm algorithm, std::size_t n,
                                    std::size_t samples) {
  if (n == 0 || samples == 0) throw Error(ErrorCode::invalid_spec, "n and samples must be positive");
  if (text.size() < 2 * n * samples) {
    throw Error(ErrorCode::text_too_short, "need at least 2 n samples symbols");
  }
  ExcessCodeLength out;
  out.n = n;
  out.samples = samples;
  const std::size_t span = text.size() - 2 * n;
  double total = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const std::size_t off = samples == 1 ? 0 : k * span / (samples - 1);
    const auto v = text.substr(off, n);
    const auto u = text.substr(off + n, n);
    const auto vu = text.substr(off, 2 * n);
    const double value = static_cast<double>(code_length_bits(v, algorithm)) +
                         static_cast<double>(code_length_bits(u, algorithm)) -
                         static_cast<double>(code_length_bits(vu, algorithm));
    out.values.push_back(value);
    total += value;
  }
  out.mean = total / static_cast<double>(samples);
  return out;
}

}  // namespace excesslex
