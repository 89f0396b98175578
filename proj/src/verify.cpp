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

#include "ldp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ldp/error.hpp"
#include "ldp/mechanism.hpp"
#include "ldp/parallel.hpp"

namespace ldp {
namespace {

constexpr std::uint64_t kChunkSize = 1u << 16;
// Upper bound on histogram size; anything larger is a degenerate grid.
constexpr double kMaxBins = 1e7;

void require_samples(std::span<const double> samples, std::uint64_t minimum,
                     const char* test) {
  if (samples.size() < minimum) {
    throw Error(Errc::kInsufficientData,
                std::string(test) + " needs at least " +
                    std::to_string(minimum) + " samples, got " +
                    std::to_string(samples.size()));
  }
}

void require_positive_beta(const LaplaceParams& params) {
  validate(params);
  if (!(params.beta > 0.0)) {
    throw Error(Errc::kInvalidParameter, "reference scale must be positive");
  }
}

struct Moments {
  double mean;
  double variance;
};

// Two-pass mean and unbiased variance.
Moments sample_moments(std::span<const double> xs) {
  double sum = 0.0;
  for (const double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  return {mean, ss / static_cast<double>(xs.size() - 1)};
}

}  // namespace

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json details = nlohmann::json::object();
  for (const auto& [key, value] : report.details) details[key] = value;
  details["relation"] = "statistic <= threshold";
  return {{"test_name", report.test_name},
          {"statistic", report.statistic},
          {"threshold", report.threshold},
          {"sample_count", report.sample_count},
          {"passed", report.passed},
          {"details", std::move(details)}};
}

VerificationReport report_from_json(const nlohmann::json& j) {
  VerificationReport report;
  report.test_name = j.at("test_name").get<std::string>();
  report.statistic = j.at("statistic").get<double>();
  report.threshold = j.at("threshold").get<double>();
  report.sample_count = j.at("sample_count").get<std::uint64_t>();
  report.passed = j.at("passed").get<bool>();
  for (const auto& [key, value] : j.at("details").items()) {
    if (value.is_number()) report.details[key] = value.get<double>();
  }
  return report;
}

MomentTolerances VerifyDefaults::moments_for(double beta,
                                             std::uint64_t n) const {
  // Standard error of the mean scales with beta / sqrt(n), that of the
  // variance with beta^2 / sqrt(n).
  const double scale = beta / kReferenceBeta;
  const double size = std::sqrt(static_cast<double>(kReferenceSamples) /
                                static_cast<double>(n));
  return {moments.mean_tol * scale * size,
          moments.var_tol * scale * scale * size};
}

double VerifyDefaults::abs_mean_tol_for(double beta, std::uint64_t n) const {
  return abs_mean_tol * (beta / kReferenceBeta) *
         std::sqrt(static_cast<double>(kReferenceSamples) /
                   static_cast<double>(n));
}

VerificationReport moment_check(std::span<const double> samples,
                                const LaplaceParams& params,
                                const MomentTolerances& tolerances) {
  require_samples(samples, kMinMomentSamples, "moment_check");
  require_positive_beta(params);
  if (!(tolerances.mean_tol > 0.0) || !(tolerances.var_tol > 0.0)) {
    throw Error(Errc::kInvalidParameter, "moment tolerances must be positive");
  }

  const Moments m = sample_moments(samples);
  const double expected_variance = laplace_variance(params.beta);
  const double mean_dev = std::abs(m.mean - params.mu);
  const double var_dev = std::abs(m.variance - expected_variance);

  VerificationReport report;
  report.test_name = "moment_check";
  report.statistic =
      std::max(mean_dev / tolerances.mean_tol, var_dev / tolerances.var_tol);
  report.threshold = 1.0;
  report.sample_count = samples.size();
  // Written as two comparisons rather than via the normalized statistic so a
  // deviation exactly at the tolerance passes regardless of rounding.
  report.passed = mean_dev <= tolerances.mean_tol && var_dev <= tolerances.var_tol;
  report.details = {{"observed_mean", m.mean},
                    {"observed_variance", m.variance},
                    {"expected_mean", params.mu},
                    {"expected_variance", expected_variance},
                    {"mean_tol", tolerances.mean_tol},
                    {"var_tol", tolerances.var_tol}};
  return report;
}

VerificationReport abs_deviation_check(std::span<const double> samples,
                                       const LaplaceParams& params,
                                       double tol) {
  require_samples(samples, kMinMomentSamples, "abs_deviation_check");
  require_positive_beta(params);
  double sum = 0.0;
  for (const double x : samples) sum += std::abs(x - params.mu);
  const double mean_abs = sum / static_cast<double>(samples.size());

  VerificationReport report;
  report.test_name = "abs_deviation_check";
  report.statistic = std::abs(mean_abs - params.beta);
  report.threshold = tol;
  report.sample_count = samples.size();
  report.passed = report.statistic <= report.threshold;
  report.details = {{"observed_mean_abs_deviation", mean_abs},
                    {"expected_mean_abs_deviation", params.beta}};
  return report;
}

double ks_critical_value(double alpha, std::uint64_t n) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(Errc::kInvalidParameter, "alpha must lie in (0, 1)");
  }
  if (n == 0) throw Error(Errc::kInsufficientData, "no samples");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return d;
}

VerificationReport ks_test_laplace(std::span<const double> samples,
                                   const LaplaceParams& params, double alpha) {
  require_samples(samples, kMinKsSamples, "ks_test_laplace");
  require_positive_beta(params);
  const double critical = ks_critical_value(alpha, samples.size());
  const double d = ks_statistic(
      samples, [&params](double x) { return laplace_cdf(x, params); });

  VerificationReport report;
  report.test_name = "ks_test_laplace";
  report.statistic = d;
  report.threshold = critical;
  report.sample_count = samples.size();
  report.passed = d <= critical;
  report.details = {{"alpha", alpha},
                    {"mu", params.mu},
                    {"beta", params.beta}};
  return report;
}

namespace {

// Histograms n draws of the mechanism at input v. stream_parity selects the
// even (0) or odd (1) stream ids so the two inputs never share a stream.
std::vector<std::uint64_t> histogram_outputs(
    double v, std::uint64_t n, std::uint64_t stream_parity, double lo,
    double width, std::size_t bins, std::uint64_t master_seed,
    const ScalarMechanism* mechanism, double beta) {
  const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<std::vector<std::uint64_t>> partial(
      chunks, std::vector<std::uint64_t>(bins, 0));
  const PrivacyBudget budget = PrivacyBudget::from_beta(beta);

  parallel_for(chunks, [&](std::size_t chunk) {
    const std::uint64_t begin = chunk * kChunkSize;
    const std::uint64_t count = std::min<std::uint64_t>(kChunkSize, n - begin);
    RandomStream stream(master_seed, 2 * chunk + stream_parity);
    std::vector<double> outputs(count, v);
    if (mechanism == nullptr) {
      perturb_in_place(outputs, budget, stream);
    } else {
      for (double& y : outputs) y = (*mechanism)(v, stream);
    }
    auto& hist = partial[chunk];
    for (const double y : outputs) {
      const double pos = (y - lo) / width;
      if (pos < 0.0 || pos >= static_cast<double>(bins)) continue;
      ++hist[static_cast<std::size_t>(pos)];
    }
  });

  std::vector<std::uint64_t> merged(bins, 0);
  for (const auto& hist : partial) {
    for (std::size_t b = 0; b < bins; ++b) merged[b] += hist[b];
  }
  return merged;
}

VerificationReport ldp_ratio_impl(double v, double v_prime, double beta,
                                  std::uint64_t n_samples,
                                  const LdpRatioOptions& options,
                                  const ScalarMechanism* mechanism) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(Errc::kInvalidParameter, "beta must be positive and finite");
  }
  if (!std::isfinite(v) || !std::isfinite(v_prime)) {
    throw Error(Errc::kInvalidInput, "inputs must be finite");
  }
  if (n_samples < kMinLdpSamples) {
    throw Error(Errc::kInsufficientData,
                "empirical_ldp_ratio needs at least " +
                    std::to_string(kMinLdpSamples) + " samples per input");
  }
  if (!(options.slack >= 1.0) || options.min_bin_count == 0) {
    throw Error(Errc::kInvalidParameter,
                "slack must be >= 1 and min_bin_count positive");
  }

  const double width =
      options.bin_width > 0.0 ? options.bin_width
                              : beta * VerifyDefaults{}.ldp_bin_fraction;
  const double lo = std::min(v, v_prime) - 10.0 * beta;
  const double hi = std::max(v, v_prime) + 10.0 * beta;
  const double bin_count = std::ceil((hi - lo) / width);
  if (!std::isfinite(width) || !(width > 0.0) || !(bin_count >= 1.0) ||
      bin_count > kMaxBins) {
    throw Error(Errc::kInsufficientData, "degenerate histogram grid");
  }
  const auto bins = static_cast<std::size_t>(bin_count);

  const auto counts_v = histogram_outputs(v, n_samples, 0, lo, width, bins,
                                          options.master_seed, mechanism, beta);
  const auto counts_w = histogram_outputs(v_prime, n_samples, 1, lo, width,
                                          bins, options.master_seed, mechanism,
                                          beta);

  double max_ratio = 0.0;
  std::size_t max_bin = 0;
  std::uint64_t qualifying = 0;
  for (std::size_t b = 0; b < bins; ++b) {
    const std::uint64_t a = counts_v[b];
    const std::uint64_t c = counts_w[b];
    if (a < options.min_bin_count || c < options.min_bin_count) continue;
    ++qualifying;
    const double ratio = std::max(static_cast<double>(a) / static_cast<double>(c),
                                  static_cast<double>(c) / static_cast<double>(a));
    if (ratio > max_ratio) {
      max_ratio = ratio;
      max_bin = b;
    }
  }
  if (qualifying == 0) {
    throw Error(Errc::kInsufficientData,
                "no histogram bin reached the minimum count for both inputs");
  }

  const double epsilon = std::abs(v - v_prime) / beta;
  const double bound = std::exp(epsilon);

  VerificationReport report;
  report.test_name = "empirical_ldp_ratio";
  report.statistic = max_ratio;
  report.threshold = bound * options.slack;
  report.sample_count = n_samples;
  report.passed = max_ratio <= report.threshold;
  report.details = {
      {"epsilon", epsilon},
      {"analytic_bound", bound},
      {"slack", options.slack},
      {"max_ratio", max_ratio},
      {"max_ratio_bin", static_cast<double>(max_bin)},
      {"max_ratio_bin_center", lo + (static_cast<double>(max_bin) + 0.5) * width},
      {"bin_width", width},
      {"min_bin_count", static_cast<double>(options.min_bin_count)},
      {"qualifying_bins", static_cast<double>(qualifying)},
      {"v", v},
      {"v_prime", v_prime},
      {"beta", beta}};
  return report;
}

}  // namespace

VerificationReport empirical_ldp_ratio(double v, double v_prime, double beta,
                                       std::uint64_t n_samples,
                                       const LdpRatioOptions& options) {
  return ldp_ratio_impl(v, v_prime, beta, n_samples, options, nullptr);
}

VerificationReport empirical_ldp_ratio(double v, double v_prime, double beta,
                                       std::uint64_t n_samples,
                                       const LdpRatioOptions& options,
                                       const ScalarMechanism& mechanism) {
  return ldp_ratio_impl(v, v_prime, beta, n_samples, options, &mechanism);
}

}  // namespace ldp
