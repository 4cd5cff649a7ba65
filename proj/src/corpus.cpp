#include "excesslex/corpus.hpp"

#include <unicode/normalizer2.h>
#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

#include "excesslex/error.hpp"
#include "excesslex/random.hpp"
#include "excesslex/regression.hpp"
#include "excesslex/utf8.hpp"

namespace excesslex {

void NormalizationProfile::validate() const {
  if (remove_spaces && keep_space_as_terminal) {
    throw Error(ErrorCode::invalid_spec, "remove_spaces and keep_space_as_terminal are mutually exclusive");
  }
}

NormalizationProfile NormalizationProfile::from_json(std::string_view json) {
  NormalizationProfile p;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::parse_error, std::string("profile: ") + e.what(), e.byte);
  }
  if (!doc.is_object()) throw Error(ErrorCode::invalid_spec, "profile must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_boolean()) throw Error(ErrorCode::invalid_spec, "profile field '" + key + "' must be boolean");
    const bool b = value.get<bool>();
    if (key == "lowercase") p.lowercase = b;
    else if (key == "strip_non_letters") p.strip_non_letters = b;
    else if (key == "remove_spaces") p.remove_spaces = b;
    else if (key == "keep_space_as_terminal") p.keep_space_as_terminal = b;
    else throw Error(ErrorCode::invalid_spec, "unknown profile field '" + key + "'");
  }
  p.validate();
  return p;
}

std::string NormalizationProfile::to_json() const {
  nlohmann::json doc{{"lowercase", lowercase},
                     {"strip_non_letters", strip_non_letters},
                     {"remove_spaces", remove_spaces},
                     {"keep_space_as_terminal", keep_space_as_terminal}};
  return doc.dump();
}

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
  return s;
}

std::u32string to_u32(const icu::UnicodeString& s) {
  std::u32string out;
  out.reserve(static_cast<std::size_t>(s.length()));
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

}  // namespace

CorpusBundle normalize(std::string_view utf8_bytes, const NormalizationProfile& profile) {
  profile.validate();
  const std::u32string decoded = utf8::decode(utf8_bytes);
  if (decoded.empty()) throw Error(ErrorCode::empty_input, "input is empty");

  icu::UnicodeString u = icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(decoded.data()),
                                                       static_cast<int32_t>(decoded.size()));
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorCode::io_error, "ICU NFC normalizer unavailable");
  u = nfc->normalize(u, status);
  if (U_FAILURE(status)) throw Error(ErrorCode::invalid_encoding, "NFC normalization failed");
  if (profile.lowercase) u.toLower(icu::Locale::getRoot());
  const std::u32string text = to_u32(u);

  CorpusBundle out;
  std::string hash_input(utf8_bytes);
  hash_input += '\0';
  hash_input += profile.to_json();
  out.profile_hash = hex64(fnv1a(0xcbf29ce484222325ull, hash_input));

  const bool collapse = profile.remove_spaces || profile.keep_space_as_terminal;
  bool pending_space = false;  // whitespace seen since the last kept character
  for (char32_t c : text) {
    const auto cp = static_cast<UChar32>(c);
    if (u_isUWhiteSpace(cp)) {
      if (!collapse) {
        out.normalized_text.push_back(c);
      } else {
        pending_space = true;
      }
      continue;
    }
    const bool letter = (U_GET_GC_MASK(cp) & U_GC_L_MASK) != 0;
    if (!letter && profile.strip_non_letters) continue;
    if (collapse && pending_space && !out.normalized_text.empty()) {
      if (profile.keep_space_as_terminal) out.normalized_text.push_back(U' ');
      else out.reference_boundaries.push_back(out.normalized_text.size());
    }
    pending_space = false;
    out.normalized_text.push_back(c);
  }
  if (out.normalized_text.empty()) throw Error(ErrorCode::empty_input, "nothing left after normalization");

  if (!profile.remove_spaces) {
    // Word edges around whitespace characters kept in the text.
    std::vector<std::size_t> cuts;
    const auto& t = out.normalized_text;
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (u_isUWhiteSpace(static_cast<UChar32>(t[i])) != u_isUWhiteSpace(static_cast<UChar32>(t[i - 1]))) {
        cuts.push_back(i);
      }
    }
    out.reference_boundaries = std::move(cuts);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::io_error, "cannot read '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
}

CorpusBundle ingest(const std::string& path, const NormalizationProfile& profile) {
  CorpusBundle b = normalize(read_file(path), profile);
  b.source = path;
  return b;
}

std::vector<std::u32string> split_at(std::u32string_view text, const std::vector<std::size_t>& cuts) {
  std::vector<std::u32string> out;
  std::size_t start = 0;
  for (std::size_t c : cuts) {
    out.emplace_back(text.substr(start, c - start));
    start = c;
  }
  out.emplace_back(text.substr(start));
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

template <typename T>
T parse_number(std::string_view s, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::invalid_spec, "bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return value;
}

std::uint64_t seed_from(const std::vector<std::string_view>& parts, std::size_t index,
                        std::optional<std::uint64_t> fallback) {
  if (parts.size() > index) return parse_number<std::uint64_t>(parts[index], "seed");
  if (!fallback) throw Error(ErrorCode::invalid_spec, "stochastic source needs a seed");
  return *fallback;
}

}  // namespace

SourceSpec parse_source_spec(std::string_view spec, std::optional<std::uint64_t> default_seed) {
  const auto parts = split(spec, ':');
  const std::string_view kind = parts[0];
  if (kind == "rose" && parts.size() == 1) {
    return PeriodicSource{std::u32string(kRoseCycle), std::u32string(kRosePrefix)};
  }
  if (kind == "periodic" && (parts.size() == 2 || parts.size() == 3)) {
    PeriodicSource s{utf8::decode(parts[1]), parts.size() == 3 ? utf8::decode(parts[2]) : U""};
    if (s.cycle.empty()) throw Error(ErrorCode::invalid_spec, "empty cycle");
    return s;
  }
  if (kind == "iid" && (parts.size() == 2 || parts.size() == 3)) {
    IidSource s{utf8::decode(parts[1]), seed_from(parts, 2, default_seed)};
    if (s.alphabet.empty()) throw Error(ErrorCode::invalid_spec, "empty alphabet");
    return s;
  }
  if (kind == "zipf" && (parts.size() == 3 || parts.size() == 4)) {
    ZipfSource s{parse_number<double>(parts[1], "exponent"), parse_number<std::size_t>(parts[2], "type count"),
                 seed_from(parts, 3, default_seed)};
    if (s.types == 0 || !(s.exponent >= 0.0)) throw Error(ErrorCode::invalid_spec, "bad zipf parameters");
    return s;
  }
  if (kind == "markov" && (parts.size() == 3 || parts.size() == 4)) {
    MarkovSource s;
    s.states = utf8::decode(parts[1]);
    for (std::string_view row : split(parts[2], ';')) {
      std::vector<double> r;
      for (std::string_view p : split(row, ',')) r.push_back(parse_number<double>(p, "probability"));
      s.transition.push_back(std::move(r));
    }
    s.seed = seed_from(parts, 3, default_seed);
    if (s.states.empty() || s.transition.size() != s.states.size()) {
      throw Error(ErrorCode::invalid_spec, "markov matrix must have one row per state");
    }
    for (const auto& r : s.transition) {
      double sum = 0.0;
      for (double p : r) {
        if (!(p >= 0.0)) throw Error(ErrorCode::invalid_spec, "negative transition probability");
        sum += p;
      }
      if (r.size() != s.states.size() || std::abs(sum - 1.0) > 1e-9) {
        throw Error(ErrorCode::invalid_spec, "markov rows must be square and sum to 1");
      }
    }
    return s;
  }
  throw Error(ErrorCode::invalid_spec, "unrecognised source spec '" + std::string(spec) + "'");
}

std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition) {
  // Solve pi (P - I) = 0 together with sum(pi) = 1.
  const std::size_t k = transition.size();
  std::vector<std::vector<double>> cols(k, std::vector<double>(k + 1, 0.0));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < k; ++i) cols[j][i] = transition[j][i] - (i == j ? 1.0 : 0.0);
    cols[j][k] = 1.0;
  }
  std::vector<double> rhs(k + 1, 0.0);
  rhs[k] = 1.0;
  return least_squares(cols, rhs);
}

namespace {

std::size_t draw(Rng& rng, const std::vector<double>& cumulative) {
  const double u = rng.uniform() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

std::vector<double> cumulate(const std::vector<double>& p) {
  std::vector<double> c(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) c[i] = acc += p[i];
  return c;
}

}  // namespace

std::vector<std::string> generate_zipf_tokens(const ZipfSource& source, std::size_t count) {
  std::vector<double> weights(source.types);
  for (std::size_t r = 0; r < source.types; ++r) weights[r] = std::pow(static_cast<double>(r + 1), -source.exponent);
  const auto cumulative = cumulate(weights);
  Rng rng(source.seed);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back("w" + std::to_string(draw(rng, cumulative) + 1));
  return out;
}

std::u32string generate(const SourceSpec& spec, std::size_t length) {
  std::u32string out;
  if (const auto* p = std::get_if<PeriodicSource>(&spec)) {
    if (p->cycle.empty()) throw Error(ErrorCode::invalid_spec, "empty cycle");
    out = p->prefix.substr(0, length);
    while (out.size() < length) out.push_back(p->cycle[(out.size() - p->prefix.size()) % p->cycle.size()]);
  } else if (const auto* s = std::get_if<IidSource>(&spec)) {
    if (s->alphabet.empty()) throw Error(ErrorCode::invalid_spec, "empty alphabet");
    Rng rng(s->seed);
    for (std::size_t i = 0; i < length; ++i) out.push_back(s->alphabet[rng.below(s->alphabet.size())]);
  } else if (const auto* z = std::get_if<ZipfSource>(&spec)) {
    const auto tokens = generate_zipf_tokens(*z, length);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out.push_back(U' ');
      for (char c : tokens[i]) out.push_back(static_cast<char32_t>(c));
    }
  } else {
    const auto& m = std::get<MarkovSource>(spec);
    std::vector<std::vector<double>> rows;
    for (const auto& r : m.transition) rows.push_back(cumulate(r));
    Rng rng(m.seed);
    if (length == 0) return out;
    std::size_t state = draw(rng, cumulate(stationary_distribution(m.transition)));
    out.push_back(m.states[state]);
    while (out.size() < length) {
      state = draw(rng, rows[state]);
      out.push_back(m.states[state]);
    }
  }
  return out;
}

}  // namespace excesslex
