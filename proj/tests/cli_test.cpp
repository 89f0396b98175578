// Copyright 2026 The ldpbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "ldp/bench.hpp"
#include "ldp/dataset.hpp"
#include "ldp/subprocess.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

using ldp::testing::TempDir;

namespace {

ldp::ProcessResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), LDP_CLI);
  return ldp::run_process(args);
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("generate, perturb and verify a tree") {
    TempDir tmp;
    const std::string data = (tmp / "data").string();
    const std::string noisy = (tmp / "noisy").string();
    auto r = cli({"gen-synth", "--out", data, "--n-per-class", "4", "--size",
                  "32", "--seed", "3", "--split-seed", "1"});
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    const auto m = ldp::load_manifest(tmp / "data/manifest.json");
    CHECK(m.entries.size() == 8);
    CHECK(m.split_seed == 1);
    for (const auto& e : m.entries) CHECK(e.split.has_value());

    r = cli({"perturb", "--dataset", data, "--out", noisy, "--epsilon", "0.5",
             "--seed", "9", "--size", "64"});
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    CHECK(r.output.find("epsilon_naive_total=2048") != std::string::npos);
    const auto prov = ldp::load_provenance(tmp / "noisy");
    CHECK(prov.beta == 2.0);
    CHECK(prov.master_seed == 9);
    CHECK_FALSE(prov.clamp);

    r = cli({"verify", "--dataset", data, "--perturbed", noisy});
    CHECK_MESSAGE(r.exit_code == 0, r.output);
    const auto report = lines(r.output);
    REQUIRE(report.size() == 3);
    CHECK(report[0].rfind("PASS moment_check", 0) == 0);
    CHECK(report[1].rfind("PASS ks_test_laplace", 0) == 0);
    CHECK(report[2].rfind("PASS abs_deviation_check", 0) == 0);
    const auto doc = nlohmann::json::parse(
        ldp::testing::slurp(tmp / "noisy/_ldp_verification.json"));
    CHECK(doc.size() == 3);
    CHECK(doc[1].at("sample_count") == 8 * 64 * 64);
  }

  TEST_CASE("sampler verification exit code follows the verdicts") {
    TempDir tmp;
    const auto out = (tmp / "v.json").string();
    const auto r = cli({"verify", "--beta", "1", "--seed", "2", "--samples",
                        "100000", "--ldp-samples", "400000", "--out", out});
    const auto report = lines(r.output);
    REQUIRE(report.size() == 3);
    bool all_pass = true;
    for (const auto& line : report) all_pass &= line.rfind("PASS ", 0) == 0;
    CHECK(r.exit_code == (all_pass ? 0 : 1));
    CHECK(report[2].find("empirical_ldp_ratio") != std::string::npos);
    CHECK(nlohmann::json::parse(ldp::testing::slurp(out)).size() == 3);
  }

  TEST_CASE("scan indexes an existing tree") {
    TempDir tmp;
    REQUIRE(cli({"gen-synth", "--out", (tmp / "d").string(), "--n-per-class",
                 "5", "--size", "16"})
                .exit_code == 0);
    fs::remove(tmp / "d/manifest.json");
    const auto r = cli({"scan", "--root", (tmp / "d").string(), "--split-seed",
                        "4", "--ratios", "0.6,0.2,0.2"});
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    const auto m = ldp::load_manifest(tmp / "d/manifest.json");
    CHECK(m.entries.size() == 10);
    std::size_t train = 0;
    for (const auto& e : m.entries) train += e.split == ldp::Split::kTrain;
    CHECK(train == 6);
  }

  TEST_CASE("bench and report through the command line") {
    TempDir tmp;
    const std::string data = (tmp / "data").string();
    REQUIRE(cli({"gen-synth", "--out", data, "--n-per-class", "3", "--size", "16"})
                .exit_code == 0);
    const auto r = cli({"bench", "--dataset", data, "--work",
                        (tmp / "work").string(), "--betas", "0,2", "--epochs",
                        "2", "--size", "8", "--", LDP_STUB_HARNESS, "--dataset",
                        "{DATASET_DIR}", "--epochs", "{EPOCHS}", "--seed",
                        "{SEED}", "--metrics-out", "{METRICS_OUT}"});
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    CHECK(r.output.find("0,inf,") != std::string::npos);
    CHECK(lines(ldp::testing::slurp(tmp / "work/report/curves.csv")).size() ==
          1 + 2 * 2 * 2);

    const auto again = cli({"report", "--result",
                            (tmp / "work/bench_result.json").string(), "--out",
                            (tmp / "again").string()});
    REQUIRE(again.exit_code == 0);
    CHECK(ldp::testing::snapshot_tree(tmp / "again") ==
          ldp::testing::snapshot_tree(tmp / "work/report"));
  }

  TEST_CASE("argument and runtime errors") {
    TempDir tmp;
    // Exclusive noise flags are a usage error.
    auto r = cli({"perturb", "--dataset", "x", "--out", "y", "--beta", "1",
                  "--epsilon", "1"});
    CHECK(r.exit_code != 0);
    CHECK(r.exit_code != 2);
    // Library errors exit with 2 and name the problem.
    r = cli({"perturb", "--dataset", (tmp / "absent").string(), "--out",
             (tmp / "o").string(), "--beta", "1"});
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("ldpbench:") != std::string::npos);
    r = cli({"perturb", "--dataset", (tmp / "absent").string(), "--out",
             (tmp / "o").string()});
    CHECK(r.exit_code == 2);
    r = cli({"verify", "--beta", "-1"});
    CHECK(r.exit_code == 2);
    r = cli({"bench", "--dataset", (tmp / "absent").string(), "--work",
             (tmp / "w").string(), "--betas", "2,1", "--", "true"});
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("ascending") != std::string::npos);
  }
}
