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

#ifndef LDP_MECHANISM_HPP_
#define LDP_MECHANISM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "ldp/random_stream.hpp"

namespace ldp {

double beta_for_epsilon(double epsilon, double sensitivity);
double epsilon_for_beta(double beta, double sensitivity);

// Basic sequential composition, n * epsilon. Reported alongside the
// per-coordinate figure; not used to calibrate noise.
double naive_composition(double epsilon_per_coordinate,
                         std::uint64_t n_coordinates);

/**
 * Calibration state of the Laplace mechanism.
 *
 * epsilon is per coordinate. With a finite epsilon, beta == sensitivity /
 * epsilon exactly; epsilon == +inf exactly when beta == 0 (the unperturbed
 * baseline). Construct through the factories, which enforce this.
 */
class PrivacyBudget {
 public:
  static PrivacyBudget from_epsilon(double epsilon, double sensitivity = 1.0);
  static PrivacyBudget from_beta(double beta, double sensitivity = 1.0);
  static PrivacyBudget unperturbed(double sensitivity = 1.0);

  double epsilon() const noexcept { return epsilon_; }
  double sensitivity() const noexcept { return sensitivity_; }
  double beta() const noexcept { return beta_; }
  bool is_unperturbed() const noexcept { return beta_ == 0.0; }

 private:
  PrivacyBudget(double epsilon, double sensitivity, double beta)
      : epsilon_(epsilon), sensitivity_(sensitivity), beta_(beta) {}

  double epsilon_;
  double sensitivity_;
  double beta_;
};

// A_f(v) = v + n with n[i] i.i.d. Laplace(0, beta), drawn in coordinate
// order. beta == 0 returns an exact copy and consumes no draws; otherwise
// exactly v.size() draws are consumed.
std::vector<double> perturb_vector(std::span<const double> v,
                                   const PrivacyBudget& budget,
                                   RandomStream& stream);

// In-place variant with the same draw order.
void perturb_in_place(std::span<double> v, const PrivacyBudget& budget,
                      RandomStream& stream);

}  // namespace ldp

#endif  // LDP_MECHANISM_HPP_
