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

#ifndef LDP_LAPLACE_HPP_
#define LDP_LAPLACE_HPP_

#include "ldp/random_stream.hpp"

namespace ldp {

/**
 * Location/scale of a Laplace (double-exponential) distribution.
 *
 * Density: p(x) = exp(-|x - mu| / beta) / (2 beta), variance 2 beta^2.
 * beta == 0 is representable and denotes "no noise"; every function that
 * needs a proper density rejects it.
 */
struct LaplaceParams {
  double mu = 0.0;
  double beta = 1.0;
};

// Throws Errc::kInvalidParameter unless mu and beta are finite and beta >= 0.
void validate(const LaplaceParams& params);

double laplace_pdf(double x, const LaplaceParams& params);
double laplace_cdf(double x, const LaplaceParams& params);

// Inverse CDF for p in the open interval (0, 1). p == 0.5 maps exactly to mu.
double laplace_quantile(double p, const LaplaceParams& params);

// One inverse-CDF draw; consumes exactly one uniform from the stream.
double laplace_sample(const LaplaceParams& params, RandomStream& stream);

double laplace_variance(double beta);

}  // namespace ldp

#endif  // LDP_LAPLACE_HPP_
