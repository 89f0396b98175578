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

#ifndef LDP_VERIFY_HPP_
#define LDP_VERIFY_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "ldp/laplace.hpp"
#include "ldp/random_stream.hpp"

namespace ldp {

// Outcome of one empirical check. All checks are one-sided:
// passed == (statistic <= threshold).
struct VerificationReport {
  std::string test_name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::uint64_t sample_count = 0;
  bool passed = false;
  std::map<std::string, double> details;
};

nlohmann::json to_json(const VerificationReport& report);
VerificationReport report_from_json(const nlohmann::json& j);

struct MomentTolerances {
  double mean_tol = 0.015;
  double var_tol = 0.1;
};

// Every default threshold used by the checks, in one place, so the CLI and
// the acceptance suite agree. Moment tolerances are stated for the reference
// workload (beta = 2, N = 1e6) and rescaled with the standard errors of the
// estimators for other workloads.
struct VerifyDefaults {
  static constexpr double kReferenceBeta = 2.0;
  static constexpr std::uint64_t kReferenceSamples = 1'000'000;

  double ks_alpha = 0.001;
  MomentTolerances moments{};
  // |mean |residual| - beta| bound at the reference workload.
  double abs_mean_tol = 0.01;
  double ldp_slack = 1.15;
  // Histogram bin width as a fraction of beta.
  double ldp_bin_fraction = 0.1;
  std::uint64_t ldp_min_bin_count = 500;
  std::uint64_t ldp_samples = 2'000'000;

  MomentTolerances moments_for(double beta, std::uint64_t n) const;
  double abs_mean_tol_for(double beta, std::uint64_t n) const;
};

inline constexpr std::uint64_t kMinMomentSamples = 1000;
inline constexpr std::uint64_t kMinKsSamples = 1000;
inline constexpr std::uint64_t kMinLdpSamples = 100'000;

// |mean - mu| <= mean_tol and |variance - 2 beta^2| <= var_tol. The reported
// statistic is the larger of the two deviations divided by its tolerance,
// compared against 1.
VerificationReport moment_check(std::span<const double> samples,
                                const LaplaceParams& params,
                                const MomentTolerances& tolerances);

// |mean |x - mu| - beta| <= tol, since E|X - mu| = beta for Laplace noise.
VerificationReport abs_deviation_check(std::span<const double> samples,
                                       const LaplaceParams& params,
                                       double tol);

double ks_critical_value(double alpha, std::uint64_t n);

// One-sample Kolmogorov-Smirnov statistic against an arbitrary CDF, using
// the sorted-sample formula. `samples` is copied and sorted.
double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf);

VerificationReport ks_test_laplace(std::span<const double> samples,
                                   const LaplaceParams& params, double alpha);

// Produces one output of the randomized mechanism for scalar input v.
using ScalarMechanism = std::function<double(double v, RandomStream& stream)>;

struct LdpRatioOptions {
  double bin_width = 0.0;  // 0 selects beta * VerifyDefaults::ldp_bin_fraction
  std::uint64_t min_bin_count = 500;
  double slack = 1.15;
  std::uint64_t master_seed = 0;
};

/**
 * Histogram estimate of the density-ratio bound
 *   P[A(v) = y] <= e^eps P[A(v') = y]
 * for the Laplace mechanism at scale beta, eps = |v - v'| / beta.
 *
 * n_samples outputs are drawn for each input and binned on a shared grid of
 * width bin_width over [min(v, v') - 10 beta, max(v, v') + 10 beta]. Over
 * bins where both counts reach min_bin_count the largest two-sided count
 * ratio is the statistic; the threshold is e^eps * slack.
 *
 * Sampling is chunked with one RandomStream per chunk (stream ids 2k for v,
 * 2k + 1 for v'), so the result is a pure function of the arguments and
 * independent of thread count.
 */
VerificationReport empirical_ldp_ratio(double v, double v_prime, double beta,
                                       std::uint64_t n_samples,
                                       const LdpRatioOptions& options);

// Same test against a caller-supplied mechanism, e.g. a deliberately
// mis-scaled one. `beta` still defines the claimed bound and the grid.
VerificationReport empirical_ldp_ratio(double v, double v_prime, double beta,
                                       std::uint64_t n_samples,
                                       const LdpRatioOptions& options,
                                       const ScalarMechanism& mechanism);

}  // namespace ldp

#endif  // LDP_VERIFY_HPP_
