#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace excesslex {

enum class ErrorCode {
  cycle_detected,
  invalid_grammar,
  budget_exceeded,
  malformed_code,
  text_too_short,
  insufficient_reliable_rows,
  too_few_types,
  too_few_rules,
  length_mismatch,
  invalid_encoding,
  empty_input,
  invalid_spec,
  unsupported_source,
  parse_error,
  io_error,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library. Decoders and parsers attach the
// byte offset of the first violation when one is meaningful.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> offset_;
};

}  // namespace excesslex
