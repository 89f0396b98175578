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

// ldpbench: generate, perturb, verify and benchmark Laplace-perturbed image
// datasets.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ldp/bench.hpp"
#include "ldp/dataset.hpp"
#include "ldp/error.hpp"
#include "ldp/laplace.hpp"
#include "ldp/mechanism.hpp"
#include "ldp/text.hpp"
#include "ldp/verify.hpp"

namespace fs = std::filesystem;

namespace {

struct NoiseFlags {
  std::optional<double> beta;
  std::optional<double> epsilon;

  // --beta and --epsilon are exclusive; epsilon converts with sensitivity 1.
  double resolve_beta() const {
    if (beta) return ldp::PrivacyBudget::from_beta(*beta).beta();
    if (epsilon) return ldp::PrivacyBudget::from_epsilon(*epsilon).beta();
    throw ldp::Error(ldp::Errc::kInvalidParameter,
                     "one of --beta or --epsilon is required");
  }
};

void add_noise_flags(CLI::App* cmd, NoiseFlags& flags) {
  auto* beta = cmd->add_option("--beta", flags.beta,
                               "Laplace scale per pixel (0 = unperturbed)");
  auto* eps = cmd->add_option(
      "--epsilon", flags.epsilon,
      "per-pixel privacy budget; beta = 1/epsilon (sensitivity 1)");
  beta->excludes(eps);
}

ldp::SplitRatios parse_ratios(const std::vector<double>& r) {
  if (r.size() != 3) {
    throw ldp::Error(ldp::Errc::kInvalidParameter,
                     "--ratios takes exactly three values");
  }
  return {r[0], r[1], r[2]};
}

void print_report(const ldp::VerificationReport& r) {
  std::cout << (r.passed ? "PASS " : "FAIL ") << r.test_name
            << " statistic=" << ldp::shortest(r.statistic)
            << " threshold=" << ldp::shortest(r.threshold)
            << " n=" << r.sample_count << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laplace-mechanism image dataset toolkit"};
  app.require_subcommand(1);

  // gen-synth
  auto* gen = app.add_subcommand("gen-synth", "write a synthetic two-class dataset");
  fs::path gen_out;
  ldp::SyntheticOptions synth;
  std::uint64_t gen_split_seed = 0;
  std::vector<double> gen_ratios = {0.7, 0.15, 0.15};
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--n-per-class", synth.n_per_class, "images per class")
      ->capture_default_str();
  gen->add_option("--size", synth.image_size, "image side in pixels")
      ->capture_default_str();
  gen->add_option("--seed", synth.seed, "generator seed")->capture_default_str();
  gen->add_option("--split-seed", gen_split_seed, "split permutation seed")
      ->capture_default_str();
  gen->add_option("--ratios", gen_ratios, "train,val,test fractions")
      ->delimiter(',')
      ->expected(3);

  // scan
  auto* scan = app.add_subcommand(
      "scan", "index a NORMAL/PNEUMONIA directory tree and split it");
  fs::path scan_root;
  fs::path scan_out;
  std::uint64_t scan_split_seed = 0;
  std::vector<double> scan_ratios = {0.7, 0.15, 0.15};
  scan->add_option("--root", scan_root, "dataset root")->required();
  scan->add_option("--out", scan_out, "manifest file (default <root>/manifest.json)");
  scan->add_option("--split-seed", scan_split_seed, "split permutation seed")
      ->capture_default_str();
  scan->add_option("--ratios", scan_ratios, "train,val,test fractions")
      ->delimiter(',')
      ->expected(3);

  // perturb
  auto* perturb = app.add_subcommand("perturb", "materialize a perturbed copy");
  NoiseFlags perturb_noise;
  fs::path perturb_dataset;
  fs::path perturb_out;
  ldp::MaterializeOptions mat;
  std::string perturb_format = "f32raw";
  add_noise_flags(perturb, perturb_noise);
  perturb->add_option("--dataset", perturb_dataset,
                      "directory holding manifest.json")
      ->required();
  perturb->add_option("--out", perturb_out, "output directory")->required();
  perturb->add_option("--seed", mat.master_seed, "noise seed")->capture_default_str();
  perturb->add_flag("--clamp,!--no-clamp", mat.clamp,
                    "clamp perturbed pixels to [0, 1]");
  perturb->add_option("--format", perturb_format, "png8 or f32raw")
      ->check(CLI::IsMember({"png8", "f32raw"}))
      ->capture_default_str();
  perturb->add_option("--size", mat.target_size, "target side in pixels")
      ->capture_default_str();
  perturb->add_option("--threads", mat.threads, "worker threads (0 = all cores)");

  // verify
  auto* verify = app.add_subcommand(
      "verify", "empirically check the sampler, the LDP bound, or a perturbed tree");
  NoiseFlags verify_noise;
  std::uint64_t verify_seed = 0;
  std::uint64_t verify_samples = ldp::VerifyDefaults::kReferenceSamples;
  std::uint64_t verify_ldp_samples = ldp::VerifyDefaults{}.ldp_samples;
  fs::path verify_dataset;
  fs::path verify_perturbed;
  fs::path verify_out;
  add_noise_flags(verify, verify_noise);
  verify->add_option("--seed", verify_seed, "sampling seed")->capture_default_str();
  verify->add_option("--samples", verify_samples, "draws for moment/KS checks")
      ->capture_default_str();
  verify->add_option("--ldp-samples", verify_ldp_samples,
                     "draws per input for the density-ratio check")
      ->capture_default_str();
  verify->add_option("--dataset", verify_dataset,
                     "source dataset (with --perturbed: check pooled residuals)");
  verify->add_option("--perturbed", verify_perturbed,
                     "perturbed tree materialized from --dataset");
  verify->add_option("--out", verify_out, "write the JSON reports here");

  // bench
  auto* bench = app.add_subcommand(
      "bench", "sweep a beta grid through an external training harness");
  ldp::BenchConfig cfg;
  std::string bench_format = "f32raw";
  fs::path bench_report;
  bench->add_option("--dataset", cfg.dataset_root, "directory holding manifest.json")
      ->required();
  bench->add_option("--work", cfg.work_dir, "work directory")->required();
  bench->add_option("--betas", cfg.beta_grid, "ascending beta grid")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--epochs", cfg.epochs, "training epochs")->capture_default_str();
  bench->add_option("--seed", cfg.master_seed, "noise and training seed")
      ->capture_default_str();
  bench->add_flag("--clamp,!--no-clamp", cfg.clamp, "clamp perturbed pixels");
  bench->add_option("--format", bench_format, "png8 or f32raw")
      ->check(CLI::IsMember({"png8", "f32raw"}))
      ->capture_default_str();
  bench->add_option("--size", cfg.target_size, "target side in pixels")
      ->capture_default_str();
  bench->add_flag("--force", cfg.force, "redo completed grid points");
  bench->add_option("--jobs", cfg.harness_jobs, "concurrent harness runs")
      ->capture_default_str();
  bench->add_option("--out", bench_report, "report directory (default <work>/report)");
  bench->add_option("harness", cfg.harness_command,
                    "harness command after '--'; placeholders {DATASET_DIR} "
                    "{EPOCHS} {SEED} {METRICS_OUT}")
      ->required();

  // report
  auto* report = app.add_subcommand("report", "render CSV and SVG from a bench result");
  fs::path report_result;
  fs::path report_out;
  report->add_option("--result", report_result, "bench_result.json")->required();
  report->add_option("--out", report_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      ldp::DatasetManifest m = ldp::generate_synthetic(synth, gen_out);
      m = ldp::split_dataset(m, parse_ratios(gen_ratios), gen_split_seed);
      m.root = ".";
      ldp::save_manifest(m, gen_out / ldp::kManifestFileName);
      std::cout << "wrote " << m.entries.size() << " images to " << gen_out
                << "\n";
    } else if (*scan) {
      ldp::DatasetManifest m = ldp::scan_dataset(scan_root);
      m = ldp::split_dataset(m, parse_ratios(scan_ratios), scan_split_seed);
      const fs::path out =
          scan_out.empty() ? scan_root / ldp::kManifestFileName : scan_out;
      m.root = fs::absolute(scan_root);
      ldp::save_manifest(m, out);
      std::cout << "indexed " << m.entries.size() << " images into " << out
                << "\n";
    } else if (*perturb) {
      mat.beta = perturb_noise.resolve_beta();
      mat.format = ldp::parse_format(perturb_format);
      const ldp::DatasetManifest m =
          ldp::load_manifest(perturb_dataset / ldp::kManifestFileName);
      const auto result = ldp::materialize_perturbed(m, mat, perturb_out);
      std::cout << "beta=" << ldp::shortest(result.provenance.beta)
                << " epsilon_per_pixel="
                << ldp::shortest(result.provenance.epsilon_per_pixel)
                << " epsilon_naive_total="
                << ldp::shortest(result.provenance.epsilon_naive_total) << "\n"
                << "wrote " << result.manifest.entries.size() << " images to "
                << perturb_out << "\n";
    } else if (*verify) {
      const ldp::VerifyDefaults defaults;
      std::vector<ldp::VerificationReport> reports;
      if (!verify_perturbed.empty()) {
        if (verify_dataset.empty()) {
          throw ldp::Error(ldp::Errc::kInvalidParameter,
                           "--perturbed requires --dataset");
        }
        const auto prov = ldp::load_provenance(verify_perturbed);
        const ldp::DatasetManifest source =
            ldp::load_manifest(verify_dataset / ldp::kManifestFileName);
        const std::vector<double> res = ldp::pooled_residuals(source, verify_perturbed);
        const ldp::LaplaceParams noise{0.0, prov.beta};
        reports.push_back(ldp::moment_check(
            res, noise, defaults.moments_for(prov.beta, res.size())));
        reports.push_back(ldp::ks_test_laplace(res, noise, defaults.ks_alpha));
        reports.push_back(ldp::abs_deviation_check(
            res, noise, defaults.abs_mean_tol_for(prov.beta, res.size())));
      } else {
        const double beta = verify_noise.resolve_beta();
        const ldp::LaplaceParams noise{0.0, beta};
        ldp::RandomStream stream(verify_seed, 0);
        std::vector<double> draws(verify_samples);
        for (double& x : draws) x = ldp::laplace_sample(noise, stream);
        reports.push_back(ldp::moment_check(
            draws, noise, defaults.moments_for(beta, draws.size())));
        reports.push_back(ldp::ks_test_laplace(draws, noise, defaults.ks_alpha));
        ldp::LdpRatioOptions opts;
        opts.min_bin_count = defaults.ldp_min_bin_count;
        opts.slack = defaults.ldp_slack;
        opts.master_seed = verify_seed;
        reports.push_back(
            ldp::empirical_ldp_ratio(0.0, 1.0, beta, verify_ldp_samples, opts));
      }
      nlohmann::json doc = nlohmann::json::array();
      bool all_passed = true;
      for (const auto& r : reports) {
        print_report(r);
        doc.push_back(ldp::to_json(r));
        all_passed = all_passed && r.passed;
      }
      if (!verify_out.empty()) {
        ldp::write_file_atomic(verify_out, doc.dump(2) + "\n");
      } else if (!verify_perturbed.empty()) {
        ldp::write_file_atomic(verify_perturbed / "_ldp_verification.json",
                               doc.dump(2) + "\n");
      }
      return all_passed ? 0 : 1;
    } else if (*bench) {
      cfg.export_format = ldp::parse_format(bench_format);
      const ldp::BenchResult result = ldp::run_benchmark(cfg);
      const fs::path out = bench_report.empty() ? cfg.work_dir / "report" : bench_report;
      ldp::emit_report(result, out);
      std::cout << ldp::render_summary_csv(result) << "report written to " << out
                << "\n";
    } else if (*report) {
      const ldp::BenchResult result = ldp::load_bench_result(report_result);
      ldp::emit_report(result, report_out);
      if (!result.complete) {
        std::cerr << "warning: " << report_result
                  << " is marked incomplete (sweep aborted)\n";
      }
      std::cout << ldp::render_summary_csv(result);
    }
  } catch (const ldp::Error& e) {
    std::cerr << "ldpbench: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
