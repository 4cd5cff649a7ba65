#include "excesslex/error.hpp"

namespace excesslex {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::cycle_detected: return "cycle-detected";
    case ErrorCode::invalid_grammar: return "invalid-grammar";
    case ErrorCode::budget_exceeded: return "budget-exceeded";
    case ErrorCode::malformed_code: return "malformed-code";
    case ErrorCode::text_too_short: return "text-too-short";
    case ErrorCode::insufficient_reliable_rows: return "insufficient-reliable-rows";
    case ErrorCode::too_few_types: return "too-few-types";
    case ErrorCode::too_few_rules: return "too-few-rules";
    case ErrorCode::length_mismatch: return "length-mismatch";
    case ErrorCode::invalid_encoding: return "invalid-encoding";
    case ErrorCode::empty_input: return "empty-input";
    case ErrorCode::invalid_spec: return "invalid-spec";
    case ErrorCode::unsupported_source: return "unsupported-source";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

namespace {
std::string format_message(ErrorCode code, const std::string& message,
                           std::optional<std::size_t> offset) {
  std::string out(to_string(code));
  out += ": ";
  out += message;
  if (offset) out += " (at byte " + std::to_string(*offset) + ")";
  return out;
}
}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> offset)
    : std::runtime_error(format_message(code, message, offset)),
      code_(code),
      offset_(offset) {}

}  // namespace excesslex
