#include "excesslex/grammar_text.hpp"

#include <map>

#include "excesslex/error.hpp"
#include "excesslex/utf8.hpp"

namespace excesslex {

std::string to_text(const Grammar& grammar) {
  std::string out;
  for (RuleId id = 0; id < grammar.rule_count(); ++id) {
    out += 'R';
    out += std::to_string(id);
    out += " ->";
    bool in_run = false;
    for (const Symbol& s : grammar.rule(id)) {
      if (s.is_terminal()) {
        if (!in_run) {
          out += " \"";
          in_run = true;
        }
        switch (s.code_point()) {
          case U'"': out += "\\\""; break;
          case U'\\': out += "\\\\"; break;
          case U'\n': out += "\\n"; break;
          default: utf8::append(out, s.code_point());
        }
      } else {
        if (in_run) {
          out += '"';
          in_run = false;
        }
        out += " R";
        out += std::to_string(s.rule());
      }
    }
    if (in_run) out += '"';
    out += '\n';
  }
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Grammar parse() {
    std::map<RuleId, Production> rules;
    bool first = true;
    while (pos_ < text_.size()) {
      if (text_[pos_] == '\n') {  // blank line
        ++pos_;
        continue;
      }
      const std::size_t line_start = pos_;
      const RuleId id = rule_ref();
      if (first && id != 0) fail("first rule must be R0", line_start);
      first = false;
      skip_spaces();
      if (text_.substr(pos_, 2) != "->") fail("expected '->'", pos_);
      pos_ += 2;
      Production p;
      for (;;) {
        skip_spaces();
        if (pos_ >= text_.size() || text_[pos_] == '\n') break;
        if (text_[pos_] == '"') {
          quoted_run(p);
        } else if (text_[pos_] == 'R') {
          p.push_back(Symbol::nonterminal(rule_ref()));
        } else {
          fail("expected R<k> or a quoted terminal run", pos_);
        }
      }
      if (p.empty()) fail("empty production", line_start);
      if (!rules.emplace(id, std::move(p)).second) fail("rule defined twice", line_start);
      if (pos_ < text_.size()) ++pos_;  // newline
    }
    if (rules.empty()) fail("no rules", 0);
    std::vector<Production> dense;
    dense.reserve(rules.size());
    for (auto& [id, p] : rules) {
      if (id != dense.size()) fail("rule ids must be 0..k-1 without gaps", text_.size());
      dense.push_back(std::move(p));
    }
    try {
      return Grammar(std::move(dense));
    } catch (const Error& e) {
      throw Error(ErrorCode::parse_error, e.what(), text_.size());
    }
  }

 private:
  [[noreturn]] static void fail(const std::string& what, std::size_t at) {
    throw Error(ErrorCode::parse_error, what, at);
  }

  void skip_spaces() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
  }

  RuleId rule_ref() {
    if (pos_ >= text_.size() || text_[pos_] != 'R') fail("expected R<k>", pos_);
    ++pos_;
    const std::size_t start = pos_;
    std::uint64_t value = 0;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
      value = value * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      if (value > 0x7FFFFFFF) fail("rule id too large", start);
      ++pos_;
    }
    if (pos_ == start) fail("missing rule number", start);
    return static_cast<RuleId>(value);
  }

  void quoted_run(Production& p) {
    const std::size_t open = pos_++;
    std::string raw;
    for (;;) {
      if (pos_ >= text_.size() || text_[pos_] == '\n') fail("unterminated terminal run", open);
      const char c = text_[pos_];
      if (c == '"') {
        ++pos_;
        break;
      }
      if (c == '\\') {
        if (pos_ + 1 >= text_.size()) fail("dangling escape", pos_);
        const char e = text_[pos_ + 1];
        if (e == '"' || e == '\\') {
          raw += e;
        } else if (e == 'n') {
          raw += '\n';
        } else {
          fail("unknown escape", pos_);
        }
        pos_ += 2;
        continue;
      }
      raw += c;
      ++pos_;
    }
    if (raw.empty()) fail("empty terminal run", open);
    std::u32string cps;
    try {
      cps = utf8::decode(raw);
    } catch (const Error& e) {
      throw Error(ErrorCode::parse_error, "invalid UTF-8 in terminal run", open);
    }
    for (char32_t cp : cps) p.push_back(Symbol::terminal(cp));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Grammar parse_grammar_text(std::string_view text) { return Parser(text).parse(); }

}  // namespace excesslex
