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

#include "ldp/mechanism.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ldp/error.hpp"
#include "ldp/laplace.hpp"

namespace ldp {
namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(Errc::kInvalidParameter, std::string(what) +
                                             " must be positive and finite, got " +
                                             std::to_string(value));
  }
}

}  // namespace

double beta_for_epsilon(double epsilon, double sensitivity) {
  require_positive(epsilon, "epsilon");
  require_positive(sensitivity, "sensitivity");
  return sensitivity / epsilon;
}

double epsilon_for_beta(double beta, double sensitivity) {
  require_positive(beta, "beta");
  require_positive(sensitivity, "sensitivity");
  return sensitivity / beta;
}

double naive_composition(double epsilon_per_coordinate,
                         std::uint64_t n_coordinates) {
  require_positive(epsilon_per_coordinate, "epsilon");
  if (n_coordinates == 0) {
    throw Error(Errc::kInvalidParameter, "coordinate count must be >= 1");
  }
  return static_cast<double>(n_coordinates) * epsilon_per_coordinate;
}

PrivacyBudget PrivacyBudget::from_epsilon(double epsilon, double sensitivity) {
  if (epsilon == std::numeric_limits<double>::infinity()) {
    return unperturbed(sensitivity);
  }
  return PrivacyBudget(epsilon, sensitivity,
                       beta_for_epsilon(epsilon, sensitivity));
}

PrivacyBudget PrivacyBudget::from_beta(double beta, double sensitivity) {
  if (beta == 0.0) return unperturbed(sensitivity);
  const double epsilon = epsilon_for_beta(beta, sensitivity);
  return PrivacyBudget(epsilon, sensitivity, beta);
}

PrivacyBudget PrivacyBudget::unperturbed(double sensitivity) {
  require_positive(sensitivity, "sensitivity");
  return PrivacyBudget(std::numeric_limits<double>::infinity(), sensitivity,
                       0.0);
}

void perturb_in_place(std::span<double> v, const PrivacyBudget& budget,
                      RandomStream& stream) {
  for (const double x : v) {
    if (!std::isfinite(x)) {
      throw Error(Errc::kInvalidInput, "non-finite input coordinate");
    }
  }
  if (budget.is_unperturbed()) return;
  const LaplaceParams noise{0.0, budget.beta()};
  for (double& x : v) x += laplace_sample(noise, stream);
}

std::vector<double> perturb_vector(std::span<const double> v,
                                   const PrivacyBudget& budget,
                                   RandomStream& stream) {
  std::vector<double> out(v.begin(), v.end());
  perturb_in_place(out, budget, stream);
  return out;
}

}  // namespace ldp
