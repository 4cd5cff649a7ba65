#include "excesslex/error.hpp"
#include "excesslex/infer.hpp"
#include "sequitur.hpp"

namespace excesslex {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::online: return "online";
    case Algorithm::repair: return "repair";
    case Algorithm::exact: return "exact";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "online") return Algorithm::online;
  if (name == "repair") return Algorithm::repair;
  if (name == "exact") return Algorithm::exact;
  throw Error(ErrorCode::invalid_spec, "unknown algorithm '" + std::string(name) + "'");
}

void InferenceConfig::validate() const {
  if (exact_length_budget > kMaxExactBudget) {
    throw Error(ErrorCode::invalid_spec,
                "exact length budget must not exceed " + std::to_string(kMaxExactBudget));
  }
}

namespace {

void require_text(std::u32string_view text) {
  if (text.empty()) throw Error(ErrorCode::empty_input, "grammar inference needs a non-empty text");
}

// Reduction never lengthens a grammar, so the single-rule grammar is only a
// guard against a heuristic doing worse than the text itself.
Grammar finish(const Grammar& raw, std::u32string_view text) {
  Grammar g = canonicalize(reduce_to_irreducible(raw));
  if (grammar_length(g) > text.size()) g = canonicalize(reduce_to_irreducible(Grammar::single_rule(text)));
  return g;
}

}  // namespace

Grammar infer_online(std::u32string_view text) {
  require_text(text);
  return finish(detail::sequitur_grammar(text), text);
}

Grammar infer_repair(std::u32string_view text) {
  require_text(text);
  return finish(detail::repair_grammar(text), text);
}

Grammar infer(std::u32string_view text, const InferenceConfig& config) {
  config.validate();
  switch (config.algorithm) {
    case Algorithm::online: return infer_online(text);
    case Algorithm::repair: return infer_repair(text);
    case Algorithm::exact: return minimal_grammar_exact(text, config.exact_length_budget).grammar;
  }
  throw Error(ErrorCode::invalid_spec, "unknown algorithm");
}

}  // namespace excesslex
