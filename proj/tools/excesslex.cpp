// excesslex command-line interface.
//
// Exit codes: 0 success, 1 a checked relation was violated (verify),
// 2 usage or input error.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "excesslex/codec.hpp"
#include "excesslex/corpus.hpp"
#include "excesslex/entropy.hpp"
#include "excesslex/error.hpp"
#include "excesslex/grammar_text.hpp"
#include "excesslex/infer.hpp"
#include "excesslex/lexical.hpp"
#include "excesslex/utf8.hpp"
#include "excesslex/verify.hpp"
#include "json.hpp"

namespace {

using namespace excesslex;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  std::string profile_path;
};

NormalizationProfile load_profile(const Globals& g) {
  if (g.profile_path.empty()) return {};
  return NormalizationProfile::from_json(read_file(g.profile_path));
}

// Input text: normalized with the profile unless --raw is given.
std::u32string load_text(const std::string& path, bool raw, const Globals& g,
                         std::vector<std::size_t>* cuts = nullptr) {
  if (raw) {
    std::string bytes = read_file(path);
    while (!bytes.empty() && (bytes.back() == '\n' || bytes.back() == '\r')) bytes.pop_back();
    std::u32string text = utf8::decode(bytes);
    if (text.empty()) throw Error(ErrorCode::empty_input, "input is empty");
    return text;
  }
  CorpusBundle b = ingest(path, load_profile(g));
  if (cuts) *cuts = std::move(b.reference_boundaries);
  return std::move(b.normalized_text);
}

void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
  } else {
    write_file(path, contents);
  }
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json violations_json(const InequalityCheckResult& r) {
  json list = json::array();
  for (const auto& v : r.violations) {
    list.push_back({{"relation", v.relation}, {"input", v.input}, {"lhs", v.lhs}, {"rhs", v.rhs}});
  }
  json out{{"name", r.name},
           {"instances_tested", r.instances_tested},
           {"violation_count", r.violation_count},
           {"violations", list}};
  if (!r.theorem2_rows.empty()) {
    json rows = json::array();
    for (const auto& row : r.theorem2_rows) {
      rows.push_back({{"n", row.n}, {"E", row.E}, {"EC", row.EC}, {"holds", row.holds}});
    }
    out["rows"] = rows;
  }
  return out;
}

std::vector<std::size_t> parse_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoul(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_spec, "bad list item '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::invalid_spec, "empty list");
  return out;
}

// Reads the CSV written by `entropy`.
BlockEntropyTable read_entropy_csv(const std::string& path) {
  std::stringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("n,H", 0) != 0) {
    throw Error(ErrorCode::parse_error, "expected the header of an entropy table", 0);
  }
  BlockEntropyTable t;
  std::size_t offset = line.size() + 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) throw Error(ErrorCode::parse_error, "entropy rows have 6 columns", offset);
    try {
      BlockEntropyRow r;
      r.n = std::stoul(cells[0]);
      r.H = std::stod(cells[1]);
      r.Hp = std::stod(cells[2]);
      r.Hpp = cells[3] == "nan" ? NAN : std::stod(cells[3]);
      r.distinct = std::stoul(cells[4]);
      r.reliable = cells[5] == "1" || cells[5] == "true";
      if (r.n != t.rows.size()) throw Error(ErrorCode::parse_error, "rows must list n = 0, 1, 2, ...", offset);
      t.rows.push_back(r);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::parse_error, "bad number in entropy table", offset);
    }
    offset += line.size() + 1;
  }
  return t;
}

std::vector<std::string> read_tokens(const std::string& path) {
  std::stringstream in(read_file(path));
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) tokens.push_back(line);
  }
  return tokens;
}

Grammar read_grammar(const std::string& path) { return parse_grammar_text(read_file(path)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grammar-based codes, block entropy and lexical laws"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for stochastic sources and baselines");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--profile", g.profile_path, "JSON normalization profile");

  int status = kOk;
  std::string in, out, algo = "repair";
  bool raw = false;
  std::size_t budget = kDefaultExactBudget;

  auto add_in = [&](CLI::App* sub, const std::string& help) { sub->add_option("--in", in, help)->required(); };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", out, "Output file (default stdout)"); };
  auto add_algo = [&](CLI::App* sub) {
    sub->add_option("--algo", algo, "Inference algorithm")->check(CLI::IsMember({"online", "repair", "exact"}));
    sub->add_option("--budget", budget, "Length budget for exact search");
  };
  auto add_raw = [&](CLI::App* sub) { sub->add_flag("--raw", raw, "Use the input verbatim instead of normalizing"); };
  auto config = [&] {
    InferenceConfig c;
    c.algorithm = parse_algorithm(algo);
    c.exact_length_budget = budget;
    return c;
  };

  auto* infer_cmd = app.add_subcommand("infer", "Infer an irreducible grammar for a text");
  add_in(infer_cmd, "Text file");
  add_out(infer_cmd);
  add_algo(infer_cmd);
  add_raw(infer_cmd);
  infer_cmd->callback([&] { emit(out, to_text(infer(load_text(in, raw, g), config()))); });

  bool encode_text = false;
  auto* encode_cmd = app.add_subcommand("encode", "Encode a grammar file (or, with --text, infer from a text first)");
  add_in(encode_cmd, "Grammar file, or text with --text");
  encode_cmd->add_option("--out", out, "Binary output file")->required();
  add_algo(encode_cmd);
  add_raw(encode_cmd);
  encode_cmd->add_flag("--text", encode_text, "Treat the input as text and infer a grammar with --algo");
  encode_cmd->callback([&] {
    const Grammar gr = encode_text ? infer(load_text(in, raw, g), config()) : read_grammar(in);
    const BinaryCode code = encode(gr);
    write_file(out, std::string(code.bytes.begin(), code.bytes.end()));
  });

  auto* decode_cmd = app.add_subcommand("decode", "Decode a binary grammar code");
  add_in(decode_cmd, "Binary file");
  add_out(decode_cmd);
  decode_cmd->callback([&] {
    const std::string bytes = read_file(in);
    const std::vector<std::uint8_t> data(bytes.begin(), bytes.end());
    emit(out, to_text(decode(data)));
  });

  auto* rate_cmd = app.add_subcommand("rate", "Code length of a text in bits per character");
  add_in(rate_cmd, "Text file");
  add_algo(rate_cmd);
  add_raw(rate_cmd);
  rate_cmd->callback([&] {
    const std::u32string text = load_text(in, raw, g);
    config().validate();
    const CodeLengthReport r = code_length_report(text, config().algorithm);
    if (g.format == "json") {
      std::cout << json{{"input_length", r.input_length},
                        {"grammar_length", r.grammar_length},
                        {"code_bits", r.code_length_bits},
                        {"bpc", r.bits_per_character},
                        {"gamma_bound_bits", r.gamma_bound_bits}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << "input_length,grammar_length,code_bits,bpc\n"
                << r.input_length << "," << r.grammar_length << "," << r.code_length_bits << ","
                << fmt(r.bits_per_character) << "\n";
    }
  });

  std::size_t nmax = 10;
  std::string mode = "circular";
  auto* entropy_cmd = app.add_subcommand("entropy", "Block entropy table of a text");
  add_in(entropy_cmd, "Text file");
  add_out(entropy_cmd);
  add_raw(entropy_cmd);
  entropy_cmd->add_option("--nmax", nmax, "Largest block length");
  entropy_cmd->add_option("--mode", mode, "Window mode")->check(CLI::IsMember({"circular", "linear"}));
  entropy_cmd->callback([&] {
    const auto table = block_entropy(build_distribution(load_text(in, raw, g), nmax, parse_window_mode(mode)));
    std::string csv = "n,H,Hp,Hpp,distinct,reliable\n";
    for (const auto& r : table.rows) {
      csv += std::to_string(r.n) + "," + fmt(r.H) + "," + fmt(r.Hp) + "," + fmt(r.Hpp) + "," +
             std::to_string(r.distinct) + "," + (r.reliable ? "1" : "0") + "\n";
    }
    emit(out, csv);
  });

  std::string range;
  auto* hilberg_cmd = app.add_subcommand("fit-hilberg", "Fit H(n) = h0 + h_mu n^mu + h n to an entropy table");
  add_in(hilberg_cmd, "CSV written by the entropy subcommand");
  add_out(hilberg_cmd);
  hilberg_cmd->add_option("--range", range, "Block lengths A:B")->required();
  hilberg_cmd->callback([&] {
    const auto colon = range.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::invalid_spec, "range must look like A:B");
    const auto lo = parse_list(range.substr(0, colon));
    const auto hi = parse_list(range.substr(colon + 1));
    const HilbergFit f = fit_hilberg(read_entropy_csv(in), lo.at(0), hi.at(0));
    emit(out, json{{"h0", f.h0},
                   {"h_mu", f.h_mu},
                   {"mu", f.mu},
                   {"h", f.h},
                   {"sse", f.sse},
                   {"degenerate", f.degenerate},
                   {"rows_used", f.rows_used}}
                      .dump(2) +
                  "\n");
  });

  std::size_t n = 0, samples = 1;
  auto* excess_cmd = app.add_subcommand("excess", "Mean excess code length C(v) + C(u) - C(vu)");
  add_in(excess_cmd, "Text file");
  add_algo(excess_cmd);
  add_raw(excess_cmd);
  excess_cmd->add_option("--n", n, "Window length")->required();
  excess_cmd->add_option("--samples", samples, "Number of window pairs");
  excess_cmd->callback([&] {
    config().validate();
    const auto r = excess_code_length(load_text(in, raw, g), config().algorithm, n, samples);
    if (g.format == "json") {
      std::cout << json{{"n", r.n}, {"samples", r.samples}, {"mean", r.mean}, {"values", r.values}}.dump(2) << "\n";
    } else {
      std::cout << "n,samples,mean\n" << r.n << "," << r.samples << "," << fmt(r.mean) << "\n";
    }
  });

  auto* zipf_cmd = app.add_subcommand("zipf", "Rank-frequency fits of a token file (one token per line)");
  add_in(zipf_cmd, "Token file");
  add_out(zipf_cmd);
  zipf_cmd->callback([&] {
    const auto table = rank_frequency(read_tokens(in));
    const ZipfFit f = fit_zipf(table);
    emit(out, json{{"types", table.types},
                   {"tokens", table.tokens},
                   {"single_B", f.single_B},
                   {"sse_single", f.sse_single},
                   {"B1", f.B1},
                   {"B2", f.B2},
                   {"R1", f.R1},
                   {"sse_two", f.sse_two}}
                      .dump(2) +
                  "\n");
  });

  std::string tokenizer = "spaces";
  auto* guiraud_cmd = app.add_subcommand("guiraud", "Types against tokens over doubling prefixes");
  add_in(guiraud_cmd, "Text file");
  add_out(guiraud_cmd);
  guiraud_cmd->add_option("--tokenizer", tokenizer, "spaces or grammar:ALGO");
  guiraud_cmd->callback([&] {
    Tokenizer tk;
    if (tokenizer.rfind("grammar:", 0) == 0) {
      tk.kind = Tokenizer::Kind::grammar;
      tk.algorithm = parse_algorithm(tokenizer.substr(8));
    } else if (tokenizer != "spaces") {
      throw Error(ErrorCode::invalid_spec, "tokenizer must be spaces or grammar:ALGO");
    }
    std::vector<std::size_t> cuts;
    const std::u32string text = load_text(in, false, g, &cuts);
    const auto schedule = geometric_schedule(text.size());
    const GrowthCurve c = guiraud_curve(text, cuts, schedule, tk);
    std::string csv = "N,V\n";
    for (const auto& p : c.points) csv += std::to_string(p.length) + "," + std::to_string(p.value) + "\n";
    emit(out, csv);
    std::cerr << "rho " << fmt(c.exponent) << "\n";
  });

  auto* growth_cmd = app.add_subcommand("growth", "Grammar vocabulary length over doubling prefixes");
  add_in(growth_cmd, "Text file");
  add_out(growth_cmd);
  add_algo(growth_cmd);
  add_raw(growth_cmd);
  growth_cmd->callback([&] {
    const std::u32string text = load_text(in, raw, g);
    const GrowthCurve c = grammar_vocab_growth(text, geometric_schedule(text.size()), config().algorithm);
    std::string csv = "length,vocabulary_length,comparison\n";
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      csv += std::to_string(c.points[i].length) + "," + std::to_string(c.points[i].value) + "," +
             fmt(c.comparison[i]) + "\n";
    }
    emit(out, csv);
    std::cerr << "alpha " << fmt(c.exponent) << "\n";
  });

  std::string grammar_path, ref;
  auto* boundaries_cmd = app.add_subcommand("boundaries", "Score grammar word boundaries against spaces");
  boundaries_cmd->add_option("--grammar", grammar_path, "Grammar file")->required();
  boundaries_cmd->add_option("--ref", ref, "Reference text with spaces")->required();
  boundaries_cmd->callback([&] {
    const Grammar gr = read_grammar(grammar_path);
    std::vector<std::size_t> cuts;
    const std::u32string text = load_text(ref, false, g, &cuts);
    const std::u32string derived = expand(gr);
    if (derived != text) {
      throw Error(ErrorCode::length_mismatch, "grammar does not derive the normalized reference text");
    }
    const BoundaryScore s = boundary_agreement(tokenize(gr, 1), cuts, text.size());
    std::cout << json{{"precision", s.precision},
                      {"recall", s.recall},
                      {"f1", s.f1},
                      {"predicted", s.predicted},
                      {"reference", s.reference},
                      {"matched", s.matched},
                      {"precision_defaulted", s.precision_defaulted},
                      {"recall_defaulted", s.recall_defaulted}}
                     .dump(2)
              << "\n";
  });

  auto* menzerath_cmd = app.add_subcommand("menzerath", "Construct against constituent lengths of grammar rules");
  menzerath_cmd->add_option("--grammar", grammar_path, "Grammar file")->required();
  add_out(menzerath_cmd);
  menzerath_cmd->callback([&] {
    const MenzerathTable t = menzerath(read_grammar(grammar_path));
    std::string csv = "rule,construct_length,mean_constituent_length\n";
    for (const auto& r : t.rows) {
      csv += std::to_string(r.rule) + "," + std::to_string(r.construct_length) + "," +
             fmt(r.mean_constituent_length) + "\n";
    }
    emit(out, csv);
    std::cerr << "slope " << fmt(t.slope) << "\n";
  });

  std::string check, source = "periodic", n_list = "4,8,16,20,32";
  std::size_t alphabet = 2, max_length = 10;
  auto* verify_cmd = app.add_subcommand("verify", "Check grammar-length, excess-code and stationarity relations");
  verify_cmd->add_option("--check", check, "Relation family")
      ->required()
      ->check(CLI::IsMember({"theorem3", "theorem2", "stationarity"}));
  verify_cmd->add_option("--alphabet", alphabet, "theorem3: alphabet size");
  verify_cmd->add_option("--max-length", max_length, "theorem3: largest |vu|");
  verify_cmd->add_option("--source", source, "theorem2: periodic, iid or markov");
  verify_cmd->add_option("--n", n_list, "theorem2: comma-separated window lengths");
  verify_cmd->add_option("--samples", samples, "theorem2: window pairs per n");
  verify_cmd->add_option("--in", in, "stationarity: text file");
  verify_cmd->add_option("--nmax", nmax, "stationarity: largest block length");
  verify_cmd->add_option("--mode", mode, "stationarity: window mode")->check(CLI::IsMember({"circular", "linear"}));
  add_algo(verify_cmd);
  add_raw(verify_cmd);
  verify_cmd->callback([&] {
    InequalityCheckResult r;
    bool asserted = true;
    if (check == "theorem3") {
      r = check_theorem3(alphabet, max_length, budget);
    } else if (check == "theorem2") {
      Theorem2Options opt;
      opt.samples = std::max<std::size_t>(samples, 1);
      if (samples == 1 && !verify_cmd->count("--samples")) opt.samples = 16;
      if (g.seed) opt.seed = *g.seed;
      config().validate();
      const auto ns = parse_list(n_list);
      r = check_theorem2_synthetic(parse_synthetic_source(source), ns, config().algorithm, opt);
    } else {
      if (in.empty()) throw Error(ErrorCode::invalid_spec, "stationarity needs --in");
      const WindowMode wm = parse_window_mode(mode);
      r = check_stationarity(build_distribution(load_text(in, raw, g), nmax, wm));
      asserted = wm == WindowMode::circular;
    }
    json report = violations_json(r);
    report["asserted"] = asserted;
    std::cout << report.dump(2) << "\n";
    if (asserted && !r.passed()) status = kViolation;
  });

  std::size_t length = 0;
  std::string spec;
  auto* generate_cmd = app.add_subcommand("generate", "Deterministic synthetic text");
  generate_cmd->add_option("--source", spec, "periodic:CYCLE[:PREFIX] | rose | iid:ALPHABET[:SEED] | "
                                             "zipf:B:V[:SEED] | markov:STATES:ROW;ROW[:SEED]")
      ->required();
  generate_cmd->add_option("--length", length, "Symbols (tokens for zipf)")->required();
  add_out(generate_cmd);
  generate_cmd->callback([&] {
    const SourceSpec s = parse_source_spec(spec, g.seed);
    std::string text;
    if (const auto* z = std::get_if<ZipfSource>(&s)) {
      for (const auto& t : generate_zipf_tokens(*z, length)) text += t + "\n";
    } else {
      text = utf8::encode(generate(s, length)) + "\n";
    }
    emit(out, text);
  });

  std::string boundaries_out;
  auto* ingest_cmd = app.add_subcommand("ingest", "Normalize a text and extract its word boundaries");
  add_in(ingest_cmd, "UTF-8 text file");
  add_out(ingest_cmd);
  ingest_cmd->add_option("--boundaries", boundaries_out, "Write the cut positions here, one per line");
  ingest_cmd->callback([&] {
    const CorpusBundle b = ingest(in, load_profile(g));
    emit(out, utf8::encode(b.normalized_text) + "\n");
    if (!boundaries_out.empty()) {
      std::string lines;
      for (std::size_t c : b.reference_boundaries) lines += std::to_string(c) + "\n";
      write_file(boundaries_out, lines);
    }
    std::cerr << json{{"source", b.source},
                      {"length", b.normalized_text.size()},
                      {"words", b.reference_boundaries.size() + 1},
                      {"profile_hash", b.profile_hash}}
                     .dump()
              << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "excesslex: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "excesslex: " << e.what() << "\n";
    return kUsage;
  }
  return status;
}
