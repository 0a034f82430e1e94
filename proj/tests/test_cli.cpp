#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using ifpp::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ifpp_cli_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string read_file(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("build a map and estimate its exponent") {
  TempDir d;
  auto r = cli({"build-map", "--density", "arcsine", "--uniform", "triangle:1", "--out", d / "logistic.json"});
  REQUIRE(r.code == 0);
  r = cli({"lyapunov", "--map", d / "logistic.json", "--mode", "theoretical"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("h=0.693147 mode=theoretical n=16384", 0) == 0);
  r = cli({"lyapunov", "--map", d / "logistic.json", "--n", "10000"});
  CHECK(r.code == 0);
  CHECK(r.out.find("mode=empirical n=10000") != std::string::npos);
}

TEST_CASE("verify checks") {
  TempDir d;
  REQUIRE(cli({"build-map", "--density", "triangular", "--uniform", "triangle:1", "--out", d / "mtri.json"}).code == 0);
  for (const char* check : {"fp-residual", "roundtrip", "uniformity", "commute"}) {
    const auto r = cli({"verify", "--map", d / "mtri.json", "--check", check});
    CAPTURE(r.out);
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS") != std::string::npos);
  }
  REQUIRE(cli({"build-map", "--density", "checkerboard", "--uniform", "baker", "--out", d / "cb.json"}).code == 0);
  CHECK(cli({"verify", "--map", d / "cb.json", "--check", "commute"}).code == 0);
  // 2D maps have no FP residual check
  CHECK(cli({"verify", "--map", d / "cb.json", "--check", "fp-residual"}).code == 1);
}

TEST_CASE("orbit, histogram and transport") {
  TempDir d;
  REQUIRE(cli({"build-map", "--density", "checkerboard", "--uniform", "product(asym:0.3, asym:0.9)", "--order", "2,1", "--out",
               d / "m.json"})
              .code == 0);
  auto r = cli({"orbit", "--map", d / "m.json", "--x0", "0.3,0.3", "--n", "20000", "--burnin", "10", "--thin", "2", "--out", d / "o.csv"});
  REQUIRE(r.code == 0);
  const auto orbit_text = read_file(d / "o.csv");
  CHECK(orbit_text.rfind("step,x1,x2\n12,", 0) == 0);
  r = cli({"hist", "--orbit", d / "o.csv", "--bins", "4", "--density", "checkerboard", "--out", d / "h.csv", "--pgm", d / "h.pgm"});
  CHECK(r.code == 0);
  CHECK(r.out.find("tv=") != std::string::npos);
  CHECK(fs::exists(d / "h.pgm"));

  std::ofstream(d / "s.csv") << "x1\n0.25\n0.5\n0.81\n";
  r = cli({"transport", "--from", "uniform", "--to", "ramp", "--uniform", "identity", "--in", d / "s.csv", "--out", d / "p.csv"});
  CHECK(r.code == 0);
  CHECK(read_file(d / "p.csv") == "x1\n0.5\n0.70710678118654757\n0.90000000000000002\n");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"lyapunov", "--map"}).code == 2);
  CHECK(cli({"lyapunov", "--map", "x.json", "--mode", "guess"}).code == 2);
  CHECK(cli({"build-map", "--density", "ramp", "--uniform", "triangle:1", "--out", "x.json", "--bogus"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("validation errors exit with 1 and write nothing") {
  TempDir d;
  auto r = cli({"build-map", "--density", "ramp", "--uniform", "sawtooth:0", "--out", d / "x.json"});
  CHECK(r.code == 1);
  CHECK(r.err.find("column 10") != std::string::npos);
  CHECK_FALSE(fs::exists(d / "x.json"));

  r = cli({"build-map", "--density", "ramp", "--uniform", "baker", "--out", d / "x.json"});
  CHECK(r.code == 1);
  CHECK_FALSE(fs::exists(d / "x.transform.json"));

  r = cli({"build-map", "--density", d / "missing.pgm", "--uniform", "baker", "--out", d / "x.json"});
  CHECK(r.code == 1);

  REQUIRE(cli({"build-map", "--density", "ramp", "--uniform", "triangle:1", "--out", d / "ok.json"}).code == 0);
  r = cli({"orbit", "--map", d / "ok.json", "--x0", "1.5", "--n", "10", "--out", d / "o.csv"});
  CHECK(r.code == 1);
  CHECK_FALSE(fs::exists(d / "o.csv"));

  std::ofstream(d / "bad.csv") << "step,x1\n1,0.5\n2,oops\n";
  r = cli({"hist", "--orbit", d / "bad.csv", "--out", d / "h.csv"});
  CHECK(r.code == 1);
  CHECK(r.err.find("bad.csv:3:") != std::string::npos);
  CHECK_FALSE(fs::exists(d / "h.csv"));

  std::ofstream(d / "samples.csv") << "x1\n0.5\n1.5\n";
  r = cli({"transport", "--from", "uniform", "--to", "ramp", "--uniform", "identity", "--in", d / "samples.csv", "--out", d / "p.csv"});
  CHECK(r.code == 1);
  CHECK_FALSE(fs::exists(d / "p.csv"));
}

TEST_CASE("config files; flags take precedence") {
  TempDir d;
  REQUIRE(cli({"build-map", "--density", "arcsine", "--uniform", "triangle:1", "--out", d / "m.json"}).code == 0);
  std::ofstream(d / "cfg.json") << R"({"lyapunov": {"map": ")" << d / "m.json" << R"(", "mode": "theoretical", "cells": 4096}})";
  auto r = cli({"--config", d / "cfg.json", "lyapunov"});
  CHECK(r.code == 0);
  CHECK(r.out.find("mode=theoretical n=4096") != std::string::npos);
  r = cli({"--config", d / "cfg.json", "lyapunov", "--mode", "empirical", "--n", "500"});
  CHECK(r.out.find("mode=empirical n=500") != std::string::npos);

  std::ofstream(d / "broken.json") << "{ nope";
  CHECK(cli({"--config", d / "broken.json", "lyapunov"}).code == 1);
  CHECK(cli({"--config", d / "absent.json", "lyapunov"}).code == 1);
}

TEST_CASE("reproduce is deterministic") {
  TempDir d;
  for (const char* fig : {"mtri", "table1", "checker-baker", "coin"}) {
    CAPTURE(fig);
    auto a = cli({"reproduce", "--figure", fig, "--n", "20000", "--out-dir", d / "a"});
    auto b = cli({"reproduce", "--figure", fig, "--n", "20000", "--out-dir", d / "b"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    for (const auto& entry : fs::directory_iterator(d.path / "a"))
      CHECK(read_file(entry.path().string()) == read_file((d.path / "b" / entry.path().filename()).string()));
  }
  CHECK(fs::exists(d / "a/table1.csv"));
  CHECK(fs::exists(d / "a/coin.pgm"));
  CHECK(fs::exists(d / "a/coin_hist.pgm"));
  CHECK(cli({"reproduce", "--figure", "coin", "--image", d / "none.pgm", "--out-dir", d / "c"}).code == 1);
  CHECK_FALSE(fs::exists(d / "c"));
}

TEST_CASE("synthetic coin image") {
  const auto img = ifpp::cli::synthetic_coin(32);
  CHECK(img.width == 32);
  CHECK(img.at(0, 0) == 24);
  CHECK(img.at(16, 16) > 100);
}
