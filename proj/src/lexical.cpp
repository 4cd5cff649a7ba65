#include "excesslex/lexical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "excesslex/error.hpp"
#include "excesslex/random.hpp"
#include "excesslex/regression.hpp"

namespace excesslex {

RankFrequencyTable rank_frequency(std::span<const std::string> tokens) {
  if (tokens.empty()) throw Error(ErrorCode::empty_input, "no tokens");
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& t : tokens) ++counts[t];
  RankFrequencyTable table;
  table.rows.reserve(counts.size());
  for (auto& [token, c] : counts) table.rows.push_back({token, c, 0});
  std::sort(table.rows.begin(), table.rows.end(), [](const RankRow& a, const RankRow& b) {
    return a.count != b.count ? a.count > b.count : a.token < b.token;
  });
  for (std::size_t i = 0; i < table.rows.size(); ++i) table.rows[i].rank = i + 1;
  table.types = table.rows.size();
  table.tokens = tokens.size();
  return table;
}

RankFrequencyTable rank_frequency_from_counts(std::vector<std::uint64_t> counts) {
  std::erase(counts, 0);
  if (counts.empty()) throw Error(ErrorCode::empty_input, "no tokens");
  std::sort(counts.begin(), counts.end(), std::greater<>());
  RankFrequencyTable table;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    table.rows.push_back({"r" + std::to_string(i + 1), counts[i], i + 1});
    table.tokens += counts[i];
  }
  table.types = counts.size();
  return table;
}

ZipfFit fit_zipf(const RankFrequencyTable& table) {
  const std::size_t v = table.rows.size();
  if (v < 10) throw Error(ErrorCode::too_few_types, std::to_string(v) + " types, need at least 10");
  std::vector<double> x(v);
  std::vector<double> y(v);
  for (std::size_t i = 0; i < v; ++i) {
    x[i] = std::log(static_cast<double>(table.rows[i].rank));
    y[i] = std::log(static_cast<double>(table.rows[i].count));
  }
  ZipfFit fit;
  const LinearFit single = fit_line(x, y);
  fit.single_B = -single.slope;
  fit.single_intercept = single.intercept;
  fit.sse_single = single.sse;

  // Prefix sums give each segment's regression in O(1).
  std::vector<long double> sx(v + 1, 0), sy(v + 1, 0), sxx(v + 1, 0), sxy(v + 1, 0), syy(v + 1, 0);
  for (std::size_t i = 0; i < v; ++i) {
    sx[i + 1] = sx[i] + x[i];
    sy[i + 1] = sy[i] + y[i];
    sxx[i + 1] = sxx[i] + static_cast<long double>(x[i]) * x[i];
    sxy[i + 1] = sxy[i] + static_cast<long double>(x[i]) * y[i];
    syy[i + 1] = syy[i] + static_cast<long double>(y[i]) * y[i];
  }
  struct Segment {
    long double slope;
    long double sse;
  };
  auto segment = [&](std::size_t b, std::size_t e) {
    const long double m = static_cast<long double>(e - b);
    const long double mx = (sx[e] - sx[b]) / m;
    const long double my = (sy[e] - sy[b]) / m;
    const long double cxx = (sxx[e] - sxx[b]) - m * mx * mx;
    const long double cxy = (sxy[e] - sxy[b]) - m * mx * my;
    const long double cyy = (syy[e] - syy[b]) - m * my * my;
    const long double slope = cxx > 0 ? cxy / cxx : 0;
    return Segment{slope, std::max<long double>(0, cyy - slope * cxy)};
  };
  long double best = INFINITY;
  for (std::size_t r1 = 2; r1 + 2 <= v; ++r1) {
    const Segment a = segment(0, r1);
    const Segment b = segment(r1, v);
    if (a.sse + b.sse < best) {
      best = a.sse + b.sse;
      fit.R1 = r1;
      fit.B1 = -static_cast<double>(a.slope);
      fit.B2 = -static_cast<double>(b.slope);
    }
  }
  fit.sse_two = static_cast<double>(best);
  return fit;
}

std::vector<std::size_t> geometric_schedule(std::size_t total, std::size_t start, std::size_t ratio) {
  if (start == 0 || ratio < 2) throw Error(ErrorCode::invalid_spec, "schedule needs start >= 1 and ratio >= 2");
  std::vector<std::size_t> out{start};
  while (out.back() <= total / ratio) out.push_back(out.back() * ratio);
  return out;
}

std::vector<std::u32string> tokenize_words(std::u32string_view text, std::span<const std::size_t> reference_cuts,
                                           const Tokenizer& tokenizer) {
  std::vector<std::u32string> words;
  if (tokenizer.kind == Tokenizer::Kind::spaces) {
    std::size_t start = 0;
    for (std::size_t c : reference_cuts) {
      if (c > text.size()) break;
      words.emplace_back(text.substr(start, c - start));
      start = c;
    }
    if (start < text.size()) words.emplace_back(text.substr(start));
    return words;
  }
  if (text.empty()) return words;
  InferenceConfig config;
  config.algorithm = tokenizer.algorithm;
  const Tokenization t = tokenize(infer(text, config), 1);
  for (const auto& s : t.spans) words.emplace_back(text.substr(s.start, s.end - s.start));
  return words;
}

namespace {

void fit_growth(GrowthCurve& curve) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& p : curve.points) {
    if (p.length > 0 && p.value > 0) {
      lx.push_back(std::log(static_cast<double>(p.length)));
      ly.push_back(std::log(static_cast<double>(p.value)));
    }
  }
  const LinearFit f = fit_line(lx, ly);
  curve.exponent = f.slope;
  curve.intercept = f.intercept;
}

void require_points(std::span<const std::size_t> schedule) {
  if (schedule.size() < 5) throw Error(ErrorCode::invalid_spec, "growth curves need at least 5 prefix lengths");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i] <= schedule[i - 1]) throw Error(ErrorCode::invalid_spec, "prefix lengths must increase");
  }
}

}  // namespace

GrowthCurve guiraud_curve(std::u32string_view text, std::span<const std::size_t> reference_cuts,
                          std::span<const std::size_t> schedule, const Tokenizer& tokenizer) {
  require_points(schedule);
  GrowthCurve curve;
  for (std::size_t len : schedule) {
    if (len > text.size()) throw Error(ErrorCode::text_too_short, "prefix longer than the text");
    std::vector<std::u32string> words;
    if (tokenizer.kind == Tokenizer::Kind::spaces) {
      // Only words that end inside the prefix.
      std::vector<std::size_t> cuts;
      for (std::size_t c : reference_cuts) {
        if (c <= len) cuts.push_back(c);
      }
      const bool ends_on_word = len == text.size() ||
                                std::binary_search(reference_cuts.begin(), reference_cuts.end(), len);
      const std::size_t end = ends_on_word ? len : (cuts.empty() ? 0 : cuts.back());
      words = tokenize_words(text.substr(0, end), cuts, tokenizer);
    } else {
      words = tokenize_words(text.substr(0, len), {}, tokenizer);
    }
    std::unordered_set<std::u32string> types(words.begin(), words.end());
    curve.points.push_back({words.size(), types.size()});
  }
  fit_growth(curve);
  return curve;
}

GrowthCurve guiraud_curve_tokens(std::span<const std::string> tokens, std::span<const std::size_t> schedule) {
  require_points(schedule);
  GrowthCurve curve;
  std::unordered_set<std::string> types;
  std::size_t seen = 0;
  for (std::size_t len : schedule) {
    if (len > tokens.size()) throw Error(ErrorCode::text_too_short, "prefix longer than the token sequence");
    for (; seen < len; ++seen) types.insert(tokens[seen]);
    curve.points.push_back({len, types.size()});
  }
  fit_growth(curve);
  return curve;
}

GrowthCurve grammar_vocab_growth(std::u32string_view text, std::span<const std::size_t> schedule,
                                 Algorithm algorithm) {
  require_points(schedule);
  GrowthCurve curve;
  InferenceConfig config;
  config.algorithm = algorithm;
  for (std::size_t len : schedule) {
    if (len > text.size()) throw Error(ErrorCode::text_too_short, "prefix longer than the text");
    curve.points.push_back({len, vocabulary_length(infer(text.substr(0, len), config))});
  }
  fit_growth(curve);
  auto shape = [](std::size_t n) {
    const double x = static_cast<double>(n);
    return n > 1 ? std::sqrt(x) / std::log2(x) : 0.0;
  };
  const auto& first = curve.points.front();
  const double scale = shape(first.length) > 0 ? static_cast<double>(first.value) / shape(first.length) : 0.0;
  for (const auto& p : curve.points) curve.comparison.push_back(scale * shape(p.length));
  return curve;
}

std::vector<std::size_t> boundary_cuts(const Tokenization& t) {
  std::set<std::size_t> cuts;
  auto add = [&](std::size_t c) {
    if (c > 0 && c < t.text_length) cuts.insert(c);
  };
  for (const auto& s : t.spans) {
    if (s.depth == 1) {
      add(s.start);
      add(s.end);
    }
  }
  for (const auto& g : t.gaps) {
    add(g.start);
    add(g.end);
  }
  return {cuts.begin(), cuts.end()};
}

BoundaryScore boundary_agreement(std::span<const std::size_t> predicted, std::span<const std::size_t> reference,
                                 std::size_t text_length) {
  auto to_set = [&](std::span<const std::size_t> cuts, const char* what) {
    std::set<std::size_t> s;
    for (std::size_t c : cuts) {
      if (c == 0 || c >= text_length) {
        throw Error(ErrorCode::length_mismatch,
                    std::string(what) + " cut " + std::to_string(c) + " outside a text of length " +
                        std::to_string(text_length));
      }
      s.insert(c);
    }
    return s;
  };
  const auto p = to_set(predicted, "predicted");
  const auto r = to_set(reference, "reference");
  BoundaryScore score;
  score.predicted = p.size();
  score.reference = r.size();
  for (std::size_t c : p) score.matched += r.count(c);
  score.precision_defaulted = p.empty();
  score.recall_defaulted = r.empty();
  score.precision = p.empty() ? 1.0 : static_cast<double>(score.matched) / static_cast<double>(p.size());
  score.recall = r.empty() ? 1.0 : static_cast<double>(score.matched) / static_cast<double>(r.size());
  const double sum = score.precision + score.recall;
  score.f1 = sum > 0 ? 2.0 * score.precision * score.recall / sum : 0.0;
  return score;
}

BoundaryScore boundary_agreement(const Tokenization& predicted, std::span<const std::size_t> reference,
                                 std::size_t text_length) {
  if (predicted.text_length != text_length) {
    throw Error(ErrorCode::length_mismatch, "tokenization covers " + std::to_string(predicted.text_length) +
                                                " symbols, reference " + std::to_string(text_length));
  }
  return boundary_agreement(boundary_cuts(predicted), reference, text_length);
}

std::vector<std::size_t> random_boundaries(std::size_t text_length, std::size_t count, std::uint64_t seed) {
  const std::size_t slots = text_length > 0 ? text_length - 1 : 0;
  if (count > slots) throw Error(ErrorCode::invalid_spec, "more cuts requested than positions available");
  // Floyd's sampling of `count` values from 1..slots.
  Rng rng(seed);
  std::set<std::size_t> chosen;
  for (std::size_t j = slots - count + 1; j <= slots; ++j) {
    const std::size_t t = 1 + rng.below(j);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

MenzerathTable menzerath(const Grammar& grammar) {
  if (grammar.rule_count() < 5) {
    throw Error(ErrorCode::too_few_rules, std::to_string(grammar.rule_count()) + " rules, need at least 5");
  }
  const auto lengths = expansion_lengths(grammar);
  MenzerathTable table;
  std::vector<double> lx;
  std::vector<double> ly;
  for (RuleId id = 1; id < grammar.rule_count(); ++id) {
    const Production& p = grammar.rule(id);
    double total = 0.0;
    for (const Symbol& s : p) total += s.is_terminal() ? 1.0 : static_cast<double>(lengths[s.rule()]);
    MenzerathRow row{id, p.size(), total / static_cast<double>(p.size())};
    lx.push_back(std::log(static_cast<double>(row.construct_length)));
    ly.push_back(std::log(row.mean_constituent_length));
    table.rows.push_back(row);
  }
  const LinearFit f = fit_line(lx, ly);
  table.slope = f.slope;
  table.intercept = f.intercept;
  return table;
}

}  // namespace excesslex
