#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "excesslex/grammar_text.hpp"
#include "excesslex/utf8.hpp"
#include "fixtures.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(EXCESSLEX_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

struct Workdir {
  fs::path dir;
  Workdir() {
    dir = fs::temp_directory_path() / ("excesslex_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Workdir() { fs::remove_all(dir); }
  std::string file(const std::string& name, const std::string& contents) const {
    const fs::path p = dir / name;
    std::ofstream(p, std::ios::binary) << contents;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("infer, encode and decode round trip") {
  Workdir w;
  const std::string text = w.file("w.txt", fixtures::kWoodchuckSpaced);
  const Run inferred = run("infer --in " + text + " --algo repair");
  CHECK(inferred.status == 0);
  CHECK(inferred.out.rfind("R0 -> ", 0) == 0);

  const std::string grammar = w.file("w.g", inferred.out);
  CHECK(run("encode --in " + grammar + " --out " + w.path("w.bin")).status == 0);
  const Run decoded = run("decode --in " + w.path("w.bin"));
  CHECK(decoded.status == 0);
  CHECK(decoded.out == inferred.out);

  CHECK(run("encode --text --algo online --in " + text + " --out " + w.path("t.bin")).status == 0);
  CHECK(run("decode --in " + w.path("t.bin")).status == 0);

  // The word grammar puts its cuts exactly at the spaces.
  const std::string words = w.file("words.g", excesslex::to_text(fixtures::word_grammar()));
  const Run b = run("boundaries --grammar " + words + " --ref " + text);
  CHECK(b.status == 0);
  CHECK(nlohmann::json::parse(b.out)["f1"].get<double>() == 1.0);
  CHECK(nlohmann::json::parse(b.out)["matched"] == 9);
  const Run own = run("boundaries --grammar " + grammar + " --ref " + text);
  CHECK(own.status == 0);
  CHECK(nlohmann::json::parse(own.out)["f1"].get<double>() < 1.0);
  CHECK(run("boundaries --grammar " + words + " --ref " + w.file("x.txt", "other words")).status == 2);
}

TEST_CASE("exact inference from the command line") {
  Workdir w;
  const Run r = run("infer --algo exact --raw --in " + w.file("a.txt", "aaaaaaaa"));
  CHECK(r.status == 0);
  CHECK(r.out == "R0 -> R1 R1\nR1 -> R2 R2\nR2 -> \"aa\"\n");
  CHECK(run("infer --algo exact --raw --in " + w.file("long.txt", std::string(40, 'a'))).status == 2);
}

TEST_CASE("rate and entropy tables") {
  Workdir w;
  const std::string text = w.file("w.txt", fixtures::kWoodchuckSpaced);
  const Run rate = run("rate --in " + text);
  CHECK(rate.status == 0);
  CHECK(rate.out.rfind("input_length,grammar_length,code_bits,bpc\n47,", 0) == 0);
  const auto j = nlohmann::json::parse(run("--format json rate --in " + text).out);
  CHECK(j["input_length"] == 47);
  CHECK(j["code_bits"].get<double>() <= j["gamma_bound_bits"].get<double>());

  const Run rose = run("generate --source rose --length 400");
  CHECK(rose.status == 0);
  const std::string rose_file = w.file("rose.txt", rose.out);
  const Run entropy = run("entropy --raw --nmax 40 --in " + rose_file + " --out " + w.path("h.csv"));
  CHECK(entropy.status == 0);
  const std::string csv = slurp(w.path("h.csv"));
  CHECK(csv.rfind("n,H,Hp,Hpp,distinct,reliable\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 42);  // rows n = 0..40

  const Run fit = run("fit-hilberg --in " + w.path("h.csv") + " --range 2:10");
  CHECK(fit.status == 0);
  CHECK(nlohmann::json::parse(fit.out).contains("mu"));
  CHECK(run("fit-hilberg --in " + w.path("h.csv") + " --range 10").status == 2);
}

TEST_CASE("verify exit codes") {
  Workdir w;
  const Run t3 = run("verify --check theorem3 --alphabet 2 --max-length 8 --budget 8");
  CHECK(t3.status == 0);
  const auto j = nlohmann::json::parse(t3.out);
  CHECK(j["violation_count"] == 0);
  CHECK(j["asserted"] == true);
  CHECK(run("verify --check theorem3 --max-length 12 --budget 10").status == 2);

  const Run t2 = run("verify --check theorem2 --source iid --n 4,8 --algo repair");
  CHECK(t2.status == 0);
  CHECK(run("verify --check theorem2 --source kjv").status == 2);

  const std::string abc = w.file("abc.txt", "abcabd");
  CHECK(run("verify --check stationarity --nmax 3 --in " + abc).status == 0);
  const Run linear = run("verify --check stationarity --mode linear --nmax 3 --in " + abc);
  CHECK(linear.status == 0);
  CHECK(nlohmann::json::parse(linear.out)["asserted"] == false);
  CHECK(nlohmann::json::parse(linear.out)["violation_count"].get<int>() > 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").status != 0);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("infer").status == 2);
  CHECK(run("infer --in /nonexistent/excesslex").status == 2);
  CHECK(run("--format xml rate --in x").status == 2);
  CHECK(run("generate --source iid:ab --length 4").status == 2);
  CHECK(run("--help").status == 0);
}

TEST_CASE("generators and lexical commands") {
  Workdir w;
  CHECK(run("generate --source periodic:ab --length 5").out == "ababa\n");
  const Run a = run("--seed 7 generate --source iid:ab --length 64");
  CHECK(a.out == run("generate --source iid:ab:7 --length 64").out);
  CHECK(a.out.size() == 65);

  const Run z = run("generate --source zipf:1.33:1000:3 --length 20000 --out " + w.path("tok.txt"));
  CHECK(z.status == 0);
  const auto fit = nlohmann::json::parse(run("zipf --in " + w.path("tok.txt")).out);
  CHECK(fit["tokens"] == 20000);
  CHECK(fit["single_B"].get<double>() == doctest::Approx(1.33).epsilon(0.1));

  // Growth curves want prefixes from 2^10 to 2^14 letters.
  excesslex::Rng rng(5);
  std::string prose;
  while (prose.size() < 40000) {
    prose += excesslex::utf8::encode(fixtures::random_text(rng, 1 + rng.below(3), U"abcdefgh")) + " ";
  }
  const std::string text = w.file("w.txt", prose);
  const Run g = run("guiraud --in " + text);
  CHECK(g.status == 0);
  CHECK(g.out.rfind("N,V\n", 0) == 0);
  CHECK(run("guiraud --tokenizer grammar:repair --in " + text).status == 0);
  CHECK(run("guiraud --tokenizer bytes --in " + text).status == 2);
  CHECK(run("growth --in " + text).out.rfind("length,vocabulary_length,comparison\n", 0) == 0);

  const std::string wood = w.file("wood.txt", fixtures::kWoodchuckSpaced);
  const std::string grammar = w.file("w.g", run("infer --in " + wood).out);
  CHECK(run("menzerath --grammar " + grammar).out.rfind("rule,construct_length,mean_constituent_length\n", 0) == 0);

  const Run ing = run("ingest --in " + wood + " --boundaries " + w.path("cuts.txt"));
  CHECK(ing.out == "shouldawoodchuckchuckifawoodchuckcouldchuckwood\n");
  CHECK(slurp(w.path("cuts.txt")) == "6\n7\n16\n21\n23\n24\n33\n38\n43\n");
}
