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

#include "ldp/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ldp/error.hpp"

namespace ldp {
namespace {

// Floor for logarithm arguments so the quantile never returns -inf.
constexpr double kLogFloor = 1e-300;

void require_positive_scale(const LaplaceParams& params) {
  validate(params);
  if (!(params.beta > 0.0)) {
    throw Error(Errc::kInvalidParameter,
                "Laplace scale must be positive, got " +
                    std::to_string(params.beta));
  }
}

}  // namespace

void validate(const LaplaceParams& params) {
  if (!std::isfinite(params.mu) || !std::isfinite(params.beta)) {
    throw Error(Errc::kInvalidParameter, "Laplace parameters must be finite");
  }
  if (params.beta < 0.0) {
    throw Error(Errc::kInvalidParameter,
                "Laplace scale must be non-negative, got " +
                    std::to_string(params.beta));
  }
}

double laplace_pdf(double x, const LaplaceParams& params) {
  require_positive_scale(params);
  return std::exp(-std::abs(x - params.mu) / params.beta) /
         (2.0 * params.beta);
}

double laplace_cdf(double x, const LaplaceParams& params) {
  require_positive_scale(params);
  const double z = (x - params.mu) / params.beta;
  if (z < 0.0) return 0.5 * std::exp(z);
  return 1.0 - 0.5 * std::exp(-z);
}

double laplace_quantile(double p, const LaplaceParams& params) {
  require_positive_scale(params);
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(Errc::kDomain, "quantile probability must lie in (0, 1), got " +
                                   std::to_string(p));
  }
  // Same value as mu - beta * sgn(p - 1/2) * ln(1 - 2|p - 1/2|), written per
  // branch so the tail nearest p keeps full relative precision.
  if (p < 0.5) {
    return params.mu + params.beta * std::log(std::max(2.0 * p, kLogFloor));
  }
  if (p > 0.5) {
    return params.mu -
           params.beta * std::log(std::max(2.0 * (1.0 - p), kLogFloor));
  }
  return params.mu;
}

double laplace_sample(const LaplaceParams& params, RandomStream& stream) {
  require_positive_scale(params);
  return laplace_quantile(stream.next_uniform(), params);
}

double laplace_variance(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw Error(Errc::kInvalidParameter,
                "Laplace scale must be non-negative and finite");
  }
  return 2.0 * beta * beta;
}

}  // namespace ldp
