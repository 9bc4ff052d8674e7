// Copyright 2026 The petzlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "petzlab/cli.hpp"
#include "petzlab/entropy.hpp"

using namespace petzlab;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct Csv {
  nlohmann::json meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
  }
  double num(std::size_t row, const std::string& name) const { return std::stod(rows[row][col(name)]); }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    else if (c == ',' && !quoted) {
      cells.push_back(cur);
      cur.clear();
    } else cur += c;
  }
  cells.push_back(cur);
  return cells;
}

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  REQUIRE(line.rfind("# ", 0) == 0);
  csv.meta = nlohmann::json::parse(line.substr(2));
  std::getline(in, line);
  csv.header = split(line);
  while (std::getline(in, line))
    if (!line.empty()) csv.rows.push_back(split(line));
  return csv;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit with code 2") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"bound", "--eps", "0.25", "--n", "10"}).code == kExitUsage);
    CHECK(run({"bound", "--channel", "teleport:1", "--eps", "0.25", "--n", "10"}).code == kExitUsage);
    CHECK(run({"bound", "--channel", "identity:2", "--eps", "0.5", "--n", "10"}).code == kExitUsage);
    CHECK(run({"bound", "--channel", "identity:2", "--eps", "abc", "--n", "10"}).code == kExitUsage);
    CHECK(run({"--format", "xml", "bound", "--channel", "identity:2", "--eps", "0.25", "--n", "10"}).code == kExitUsage);
    CHECK(run({"verify", "--trials", "5"}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);
  }

  TEST_CASE("bound command") {
    const Run id = run({"bound", "--channel", "identity:2", "--eps", "0.25", "--n", "10"});
    REQUIRE(id.code == kExitOk);
    const Csv t = parse_csv(id.out);
    CHECK(t.meta["version"] == kVersion);
    CHECK(t.meta["command"] == "bound");
    CHECK(t.meta["channel"] == "identity:2");
    CHECK(t.meta.contains("channel_hash"));
    CHECK(t.meta.contains("petz_completion"));
    CHECK(t.header == std::vector<std::string>{"n", "eps", "I_c", "V_eps", "bound_bits", "caveat"});
    REQUIRE(t.rows.size() == 1);
    CHECK(t.num(0, "bound_bits") == doctest::Approx(10.0).epsilon(1e-9));

    const Run er = run({"bound", "--channel", "erasure:0.5", "--eps", "0.75", "--n", "100,400,1600"});
    REQUIRE(er.code == kExitOk);
    const Csv e = parse_csv(er.out);
    REQUIRE(e.rows.size() == 3);
    CHECK(e.num(1, "bound_bits") / e.num(0, "bound_bits") == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(e.num(2, "bound_bits") / e.num(0, "bound_bits") == doctest::Approx(4.0).epsilon(1e-9));

    const Run de = run({"bound", "--channel", "dephasing:0.1", "--eps", "0.25", "--n", "1000"});
    REQUIRE(de.code == kExitOk);
    const Csv d = parse_csv(de.out);
    const double p = 0.1, lr = std::log2((1 - p) / p);
    const double v = p * (1 - p) * lr * lr;
    const double expected = 1000 * (1 - oracle::binary_entropy(p)) + std::sqrt(1000 * v) * inv_normal_cdf(0.25);
    CHECK(d.num(0, "bound_bits") == doctest::Approx(expected).epsilon(1e-5));

    const Run js = run({"--format", "json", "bound", "--channel", "identity:2", "--eps", "0.25", "--n", "10,20"});
    REQUIRE(js.code == kExitOk);
    const auto doc = nlohmann::json::parse(js.out);
    CHECK(doc["rows"].size() == 2);
    CHECK(doc["metadata"]["command"] == "bound");
  }

  TEST_CASE("oneshot command") {
    const std::vector<std::string> args{"oneshot", "--channel", "identity:2", "--eps1", "0.3", "--eps2", "0.3",
                                        "--split", "proof", "--copies", "1"};
    const Run a = run(args);
    REQUIRE(a.code == kExitOk);
    const auto doc = nlohmann::json::parse(a.out);
    const double t1 = doc["term1"], t2 = doc["term2"], b = doc["bound_bits"];
    CHECK(std::isfinite(t1));
    CHECK(std::isfinite(t2));
    CHECK(b == std::min(t1, t2));
    CHECK(doc.contains("implied_eps"));
    CHECK(run(args).out == a.out);

    const Run bad = run({"oneshot", "--channel", "identity:2", "--eps1", "0.3", "--eps2", "0.3", "--delta1", "0.4",
                         "--delta2", "0.1"});
    CHECK(bad.code == kExitUsage);
    CHECK(bad.err.find("delta must be below epsilon") != std::string::npos);
  }

  TEST_CASE("simulate command") {
    const Run id = run({"--seed", "5", "simulate", "--channel", "identity:2", "--samples", "20"});
    REQUIRE(id.code == kExitOk);
    const Csv t = parse_csv(id.out);
    CHECK(t.header == std::vector<std::string>{"sample_idx", "F_ent"});
    REQUIRE(t.rows.size() == 20);
    for (std::size_t i = 0; i < t.rows.size(); ++i) CHECK(std::abs(t.num(i, "F_ent") - 1.0) < 1e-10);

    const std::string summary = "petzlab_test_summary.json";
    std::vector<std::string> outs;
    for (const char* threads : {"1", "2", "8"}) {
      const Run r = run({"--seed", "17", "--threads", threads, "simulate", "--channel", "erasure:0.5", "--m", "2",
                         "--samples", "500", "--summary", summary});
      REQUIRE(r.code == kExitOk);
      outs.push_back(r.out);
    }
    CHECK(outs[0] == outs[1]);
    CHECK(outs[0] == outs[2]);
    std::ifstream f(summary);
    const auto doc = nlohmann::json::parse(f);
    f.close();
    std::remove(summary.c_str());
    const double mean = doc["summary"]["mean"];
    CHECK(mean >= 0.0);
    CHECK(mean <= 1.0);

    const Run other = run({"--seed", "18", "simulate", "--channel", "erasure:0.5", "--m", "2", "--samples", "500"});
    CHECK(other.out != outs[0]);

    const Run mc = run({"--seed", "3", "simulate", "--channel", "dephasing:0.1", "--samples", "50", "--mc-trials", "2000",
                        "--summary", summary});
    REQUIRE(mc.code == kExitOk);
    std::ifstream g(summary);
    const auto mdoc = nlohmann::json::parse(g);
    g.close();
    std::remove(summary.c_str());
    const double z = mdoc["summary"]["avg_fidelity_mc"]["z"];
    CHECK(std::abs(z) <= 3.0);
  }

  TEST_CASE("seed falls back to the environment") {
    setenv("PETZLAB_SEED", "99", 1);
    const Run a = run({"simulate", "--channel", "dephasing:0.1", "--samples", "5"});
    unsetenv("PETZLAB_SEED");
    const Run b = run({"--seed", "99", "simulate", "--channel", "dephasing:0.1", "--samples", "5"});
    REQUIRE(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK(parse_csv(a.out).meta["seed"] == 99);
    setenv("PETZLAB_SEED", "not-a-number", 1);
    CHECK(run({"simulate", "--channel", "dephasing:0.1", "--samples", "5"}).code == kExitUsage);
    unsetenv("PETZLAB_SEED");
  }

  TEST_CASE("verify command and negative control") {
    const Run ok = run({"verify", "--trials", "20", "--haar-samples", "2000"});
    CHECK(ok.code == kExitOk);
    const Csv t = parse_csv(ok.out);
    CHECK(t.rows.size() == 7);
    for (std::size_t i = 0; i < t.rows.size(); ++i) CHECK(t.rows[i][t.col("pass")] == "true");

    const Run leak = run({"verify", "--trials", "20", "--haar-samples", "2000", "--dephasing-leak", "0.1"});
    CHECK(leak.code == kExitVerifyFailed);
    const Csv l = parse_csv(leak.out);
    bool dephasing_failed = false;
    for (std::size_t i = 0; i < l.rows.size(); ++i)
      if (l.rows[i][l.col("lemma_id")] == "dephasing-map" && l.rows[i][l.col("pass")] == "false") dephasing_failed = true;
    CHECK(dephasing_failed);
  }

  TEST_CASE("erasure-case command") {
    const Run r = run({"erasure-case", "--eps", "0.25,0.5,0.75", "--n", "100,400,10000"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.err.find("0.5") != std::string::npos);
    const Csv t = parse_csv(r.out);
    REQUIRE(t.rows.size() == 6);
    double scaled = 0.0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const double eps = t.num(i, "eps");
      const double b = t.num(i, "bound_bits");
      if (eps < 0.5) {
        CHECK(b <= 0.0);
        CHECK(t.rows[i][t.col("regime")] == "O(1)");
      } else {
        CHECK(b > 0.0);
        CHECK(t.rows[i][t.col("regime")] == "√n");
        const double s = b / std::sqrt(t.num(i, "n"));
        if (scaled == 0.0) scaled = s;
        CHECK(std::abs(s - scaled) < 1e-9);
      }
    }
  }

  TEST_CASE("output file") {
    const std::string path = "petzlab_test_out.csv";
    const Run r = run({"--out", path, "bound", "--channel", "identity:2", "--eps", "0.25", "--n", "10"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream buf;
    buf << f.rdbuf();
    f.close();
    std::remove(path.c_str());
    CHECK(parse_csv(buf.str()).rows.size() == 1);
  }
}
