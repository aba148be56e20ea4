#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "cepkit/rng.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBin = CEPKIT_BIN;

int run(const std::string& args) {
  const std::string cmd = kBin + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("cepkit_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (work_dir() / name).string(); }

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t line_count(const std::string& p) {
  const std::string text = slurp(p);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("usage errors exit with the config code") {
  CHECK(run("") == 2);
  CHECK(run("generate") == 2);           // missing required flags
  CHECK(run("frobnicate --n 1") == 2);   // unknown subcommand
  CHECK(run("--help") == 0);
  CHECK(run("generate --help") == 0);
}

TEST_CASE("generate writes one line per example, deterministically") {
  REQUIRE(run("generate --n 5 --seed 99 --out " + path("a.jsonl")) == 0);
  REQUIRE(run("generate --n 5 --seed 99 --out " + path("b.jsonl")) == 0);
  CHECK(line_count(path("a.jsonl")) == 5);
  CHECK(slurp(path("a.jsonl")) == slurp(path("b.jsonl")));
  REQUIRE(run("generate --n 5 --seed 100 --out " + path("c.jsonl")) == 0);
  CHECK(slurp(path("a.jsonl")) != slurp(path("c.jsonl")));
}

TEST_CASE("generate honors a config file and rejects a broken one") {
  REQUIRE(run("generate --n 3 --config " CEPKIT_SOURCE_DIR
              "/configs/default.json --out " + path("cfg.jsonl")) == 0);
  CHECK(line_count(path("cfg.jsonl")) == 3);

  {
    std::ofstream out(path("broken.json"));
    out << "{\"stages\": []}";
  }
  CHECK(run("generate --n 3 --config " + path("broken.json") + " --out " +
            path("never.jsonl")) == 2);
  CHECK(run("generate --n 3 --config " + path("missing.json") + " --out " +
            path("never.jsonl")) == 4);
}

TEST_CASE("perturb fills ae_observed and respects its seed") {
  REQUIRE(run("generate --n 4 --seed 7 --out " + path("clean.jsonl")) == 0);
  REQUIRE(run("perturb --in " + path("clean.jsonl") + " --accuracy 1.0 --out " +
              path("ident.jsonl")) == 0);
  const std::string ident = slurp(path("ident.jsonl"));
  CHECK(ident.find("ae_observed") != std::string::npos);

  // default accuracy is applied when the flag is omitted
  REQUIRE(run("perturb --in " + path("clean.jsonl") + " --seed 3 --out " +
              path("n1.jsonl")) == 0);
  REQUIRE(run("perturb --in " + path("clean.jsonl") + " --seed 3 --out " +
              path("n2.jsonl")) == 0);
  REQUIRE(run("perturb --in " + path("clean.jsonl") + " --seed 4 --out " +
              path("n3.jsonl")) == 0);
  CHECK(slurp(path("n1.jsonl")) == slurp(path("n2.jsonl")));
  CHECK(slurp(path("n1.jsonl")) != slurp(path("n3.jsonl")));
}

TEST_CASE("perturb validates matrix files") {
  REQUIRE(run("generate --n 2 --seed 1 --out " + path("m_in.jsonl")) == 0);
  {
    std::ofstream out(path("bad_matrix.txt"));
    out << "0.5 0.5\n";
  }
  CHECK(run("perturb --in " + path("m_in.jsonl") + " --matrix " +
            path("bad_matrix.txt") + " --out " + path("never.jsonl")) == 3);
  CHECK(run("perturb --in " + path("m_in.jsonl") + " --accuracy 0.5 --matrix " +
            path("bad_matrix.txt") + " --out " + path("never.jsonl")) == 2);
}

TEST_CASE("detect and evaluate close the loop on clean data") {
  REQUIRE(run("generate --n 20 --seed 11 --out " + path("loop.jsonl")) == 0);
  REQUIRE(run("detect --in " + path("loop.jsonl") + " --out " +
              path("loop_pred.jsonl")) == 0);
  CHECK(line_count(path("loop_pred.jsonl")) == 20);
  REQUIRE(run("evaluate --pred " + path("loop_pred.jsonl") + " --truth " +
              path("loop.jsonl") + " --out " + path("loop_report.tsv") +
              " --label clean") == 0);
  std::istringstream lines(slurp(path("loop_report.tsv")));
  std::string line;
  std::getline(lines, line);
  CHECK(line.rfind("label\tclass", 0) == 0);
  int perfect = 0;
  while (std::getline(lines, line))
    if (line.find("\t1.000000\t0.000000\t1.000000\t0.000000\t1.000000\t0.000000") !=
        std::string::npos)
      ++perfect;
  CHECK(perfect == 6);
}

TEST_CASE("detect handles an empty dataset") {
  { std::ofstream out(path("none.jsonl")); }
  REQUIRE(run("detect --in " + path("none.jsonl") + " --out " +
              path("none_pred.jsonl")) == 0);
  CHECK(slurp(path("none_pred.jsonl")).empty());
}

TEST_CASE("io failures use their own exit code") {
  CHECK(run("detect --in " + path("does_not_exist.jsonl") + " --out " +
            path("never.jsonl")) == 4);
  CHECK(run("evaluate --pred nope.jsonl --truth nope.jsonl --out x.tsv") == 4);
}

TEST_CASE("corrupt datasets exit with the validation code") {
  {
    std::ofstream out(path("corrupt.jsonl"));
    out << R"({"example_id":0,"seed":1,"ae_true":["run"],"ce_labels":[[]]})" << "\n";
  }
  CHECK(run("detect --in " + path("corrupt.jsonl") + " --out " +
            path("never.jsonl")) == 3);
}

TEST_CASE("a one-point sweep is byte-identical to the manual pipeline") {
  const std::uint64_t sweep_seed = 31;
  REQUIRE(run("generate --n 12 --seed 13 --out " + path("sw.jsonl")) == 0);
  REQUIRE(run("sweep --in " + path("sw.jsonl") +
              " --accuracy 0.91 --runs 1 --seed " + std::to_string(sweep_seed) +
              " --out " + path("sw_report.tsv")) == 0);

  // run 0 of the sweep perturbs with the derived per-run seed
  const std::uint64_t run_seed = cepkit::mix_seed(sweep_seed, 0);
  REQUIRE(run("perturb --in " + path("sw.jsonl") + " --accuracy 0.91 --seed " +
              std::to_string(run_seed) + " --out " + path("sw_noisy.jsonl")) == 0);
  REQUIRE(run("detect --in " + path("sw_noisy.jsonl") + " --out " +
              path("sw_pred.jsonl")) == 0);
  REQUIRE(run("evaluate --pred " + path("sw_pred.jsonl") + " --truth " +
              path("sw.jsonl") + " --out " + path("sw_manual.tsv") +
              " --label acc=0.9100") == 0);

  CHECK(slurp(path("sw_report.tsv")) == slurp(path("sw_manual.tsv")));
}

TEST_CASE("sweep validates its accuracies") {
  REQUIRE(run("generate --n 2 --seed 5 --out " + path("sv.jsonl")) == 0);
  CHECK(run("sweep --in " + path("sv.jsonl") + " --accuracy 1.5 --out " +
            path("never.tsv")) == 2);
  CHECK(run("sweep --in " + path("sv.jsonl") + " --accuracy 0.9 --runs 0 --out " +
            path("never.tsv")) == 2);
}

TEST_CASE("evaluate aggregates several prediction files with a ci") {
  REQUIRE(run("generate --n 10 --seed 21 --out " + path("ci.jsonl")) == 0);
  for (int s = 0; s < 3; ++s) {
    const std::string tag = std::to_string(s);
    REQUIRE(run("perturb --in " + path("ci.jsonl") + " --accuracy 0.7 --seed " +
                tag + " --out " + path("ci_n" + tag + ".jsonl")) == 0);
    REQUIRE(run("detect --in " + path("ci_n" + tag + ".jsonl") + " --out " +
                path("ci_p" + tag + ".jsonl")) == 0);
  }
  REQUIRE(run("evaluate --pred " + path("ci_p0.jsonl") + " --pred " +
              path("ci_p1.jsonl") + " --pred " + path("ci_p2.jsonl") +
              " --truth " + path("ci.jsonl") + " --out " + path("ci.tsv")) == 0);
  const std::string report = slurp(path("ci.tsv"));
  // some ci column must be nonzero across three different seeds
  std::istringstream lines(report);
  std::string line;
  std::getline(lines, line);
  bool nonzero_ci = false;
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string cell;
    int idx = 0;
    while (std::getline(cells, cell, '\t')) {
      if ((idx == 3 || idx == 5 || idx == 7) && cell != "0.000000")
        nonzero_ci = true;
      ++idx;
    }
  }
  CHECK(nonzero_ci);
}
