//
// Copyright 2026 The dppca Authors
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
//

#ifndef DPPCA_MECH_H_
#define DPPCA_MECH_H_

#include <cstddef>
#include <cstdint>
#include <span>

#include "dppca/matcore.h"

namespace dppca {

// (epsilon, delta) pair with epsilon > 0 and 0 < delta < 1.
class PrivacyBudget {
 public:
  PrivacyBudget(double epsilon, double delta);

  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }

 private:
  double epsilon_;
  double delta_;
};

// Counter-based random stream (Philox4x32-10 keyed by the master seed, with
// the stream id and counter as the 128-bit block counter). The output
// sequence is a pure function of (master_seed, stream_id, counter), so
// streams can be split without coordination.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id,
            std::uint64_t counter = 0)
      : master_seed_(master_seed), stream_id_(stream_id), counter_(counter) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1), 53 bits of resolution.
  double next_uniform();

  // Independent child stream under the same master seed.
  RngStream derive(std::uint64_t tag) const;

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_;
};

// Stateless 64-bit mixer used to derive stream ids.
std::uint64_t mix64(std::uint64_t x);

enum class NoiseVariant {
  kAlgLine9,  // sensitivity * sqrt(2 ln(2/delta)) / epsilon
  kProof,     // 2 * sensitivity * sqrt(ln(2/delta)) / epsilon
};

// Laplace(0, scale) by inverse CDF on one uniform draw.
double sample_laplace(double scale, RngStream& rng);

// One N(0,1) draw. Box-Muller on two uniforms; the sine half is discarded.
double sample_standard_normal(RngStream& rng);

// d i.i.d. N(0, sigma^2) values. Box-Muller pairs fill consecutive
// coordinates; for odd d the last pair's sine half is discarded.
Vector sample_gaussian_vec(std::size_t d, double sigma, RngStream& rng);

// Gaussian-mechanism standard deviation for the given l2 sensitivity.
double gaussian_sigma(double sensitivity, const PrivacyBudget& budget,
                      NoiseVariant variant = NoiseVariant::kAlgLine9);

// Total budget of T iterations, each spending `per_iter`:
//   eps' = 2 (T eps^2 + sqrt(2 ln(1/delta) T) eps),  delta' = (T + 1) delta.
// Throws BudgetError when delta' >= 1.
PrivacyBudget compose(const PrivacyBudget& per_iter, long long T);

// Per-iteration budget whose composition over T iterations equals the
// given total. Throws ContractViolation for epsilon_total <= 0 and
// BudgetError when delta_total / (T + 1) is outside (0, 1).
PrivacyBudget invert_budget(double epsilon_total, double delta_total,
                            long long T);
PrivacyBudget invert_budget(const PrivacyBudget& total, long long T);

// Exponential mechanism: index j with probability proportional to
// exp(epsilon * q_j / (2 * sensitivity)). An infinite epsilon returns the
// lowest index attaining the maximum.
std::size_t exp_mech_select(std::span<const double> qualities,
                            double sensitivity, double epsilon,
                            RngStream& rng);

}  // namespace dppca

#endif  // DPPCA_MECH_H_
