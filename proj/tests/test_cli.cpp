#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fca/cli/cli.hpp"

using fca::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("fca_test_" + name)).string();
}

std::string write_file(const std::string& name, const std::string& text) {
  const std::string path = temp_path(name);
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"evolve", "--bogus"}).code == 2);
  CHECK(call({"evolve", "--L", "seven"}).code == 2);
  CHECK(call({"evolve", "--L", "7"}).code == 2);
  CHECK(call({"evolve", "--initial", "phi_q"}).code == 2);
  CHECK(call({"evolve", "--T", "0"}).code == 2);
  CHECK(call({"sweep", "--steps", "-1", "--L", "16"}).code == 2);
  CHECK(call({"classify", "--rep-variant", "other"}).code == 2);
  CHECK(call({"dispersion", "--mass", "1.5"}).code == 2);
  CHECK(call({"evolve", "--config"}).code == 2);
  CHECK(call({"evolve", "--config", temp_path("missing.json")}).code == 2);
  CHECK(call({"evolve", "--config", write_file("bad.json", "{not json")}).code == 2);
  CHECK(call({"evolve", "--config", write_file("unknown.json", R"({"colour": 3})")}).code == 2);
  const Result r = call({"evolve", "--initial", "phi_q"});
  CHECK(r.err.find("phi_q") != std::string::npos);
}

TEST_CASE("help exits with 0") {
  const Result r = call({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("sweep") != std::string::npos);
  CHECK(call({"evolve", "--help"}).code == 0);
}

TEST_CASE("classify reports the covariant match and flags a failed one") {
  const Result ok = call({"classify"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("\"coupling_count\": 13") != std::string::npos);
  CHECK(ok.out.find("\"dimension\": 17") != std::string::npos);
  CHECK(call({"classify", "--rep-variant", "minus-sigma-y"}).code == 1);
}

TEST_CASE("verify passes at a generic point") {
  const Result r = call({"verify", "--L", "16", "--p", "0.7", "--lambda-abs", "0.7071067811865476"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("evolve output is byte-identical for identical configuration") {
  const std::vector<std::string> args = {"evolve", "--L", "16", "--T", "30", "--initial", "gaussian(2,1.5,0.4)", "--random-phases", "--seed", "11"};
  const Result a = call(args), b = call(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(count_lines(a.out) == 1 + 31 * 32);
  auto other = args;
  other.back() = "12";
  CHECK(call(other).out != a.out);
}

TEST_CASE("--steps is an alias of --T") {
  CHECK(call({"evolve", "--L", "8", "--steps", "3"}).out == call({"evolve", "--L", "8", "--T", "3"}).out);
}

TEST_CASE("JSON config mirrors the flags") {
  const std::string cfg = write_file("run.json", R"json({"subcommand": "evolve", "L": 16, "T": 12, "p": 0.3,
    "lambda-abs": 1.1, "lambda-phase": 0.2, "initial": "gaussian(0,2,0.1)", "seed": 4, "random-phases": true})json");
  const Result from_config = call({"--config", cfg});
  const Result from_flags = call({"evolve", "--L", "16", "--T", "12", "--p", "0.3", "--lambda-abs", "1.1", "--lambda-phase", "0.2",
                                  "--initial", "gaussian(0,2,0.1)", "--seed", "4", "--random-phases"});
  REQUIRE(from_config.code == 0);
  CHECK(from_config.out == from_flags.out);
  // Explicit flags override the file.
  CHECK(call({"evolve", "--config", cfg, "--T", "3"}).out == call({"evolve", "--L", "16", "--T", "3", "--p", "0.3", "--lambda-abs", "1.1",
                                                                   "--lambda-phase", "0.2", "--initial", "gaussian(0,2,0.1)",
                                                                   "--seed", "4", "--random-phases"})
                                                              .out);
  CHECK(call({"evolve", "--config", write_file("flag.json", R"({"random-phases": 1})")}).code == 2);
}

TEST_CASE("sweep: empty range, CSV schema and --out") {
  const Result empty = call({"sweep", "--points", "0"});
  CHECK(empty.code == 0);
  CHECK(empty.out == "lambda,metric\n");

  const std::string path = temp_path("sweep.csv");
  const std::vector<std::string> args = {"sweep", "--axis", "p", "--from", "0", "--to", "1", "--points", "4", "--L", "16", "--T", "10",
                                         "--lambda-abs", "0.5", "--initial", "gaussian(0,1,0)"};
  const Result direct = call(args);
  auto to_file = args;
  to_file.insert(to_file.end(), {"--out", path});
  const Result written = call(to_file);
  CHECK(written.code == 0);
  CHECK(written.out.empty());
  CHECK(slurp(path) == direct.out);
  CHECK(direct.out.rfind("p,metric\n0,", 0) == 0);
  CHECK(count_lines(direct.out) == 5u);
  std::remove(path.c_str());
}

TEST_CASE("dispersion and spectrum CSV") {
  const Result d = call({"dispersion", "--walk", "dirac", "--mass", "0.4", "--k-grid", "3"});
  CHECK(d.code == 0);
  CHECK(d.out.rfind("k1,k2,k3,branch,omega\n", 0) == 0);
  const Result s = call({"spectrum", "--L", "8"});
  CHECK(s.code == 0);
  CHECK(count_lines(s.out) == 1 + 6 * 8);
  CHECK(call({"spectrum", "--L", "512"}).code == 2);
}
