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

#include "dppca/mech.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "dppca/errors.h"

namespace dppca {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c,
                                           std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * c[0];
    const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  return c;
}

void require_finite_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ContractViolation(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

PrivacyBudget::PrivacyBudget(double epsilon, double delta)
    : epsilon_(epsilon), delta_(delta) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw BudgetError("epsilon must be positive, got " +
                      std::to_string(epsilon));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw BudgetError("delta must lie in (0, 1), got " + std::to_string(delta));
  }
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t RngStream::next_u64() {
  const auto out = philox4x32_10(
      {static_cast<std::uint32_t>(counter_),
       static_cast<std::uint32_t>(counter_ >> 32),
       static_cast<std::uint32_t>(stream_id_),
       static_cast<std::uint32_t>(stream_id_ >> 32)},
      {static_cast<std::uint32_t>(master_seed_),
       static_cast<std::uint32_t>(master_seed_ >> 32)});
  ++counter_;
  return (std::uint64_t{out[1]} << 32) | out[0];
}

double RngStream::next_uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
}

RngStream RngStream::derive(std::uint64_t tag) const {
  return RngStream(master_seed_, mix64(stream_id_ ^ mix64(tag)));
}

double sample_laplace(double scale, RngStream& rng) {
  require_finite_positive(scale, "Laplace scale");
  const double u = rng.next_uniform() - 0.5;
  if (u < 0) return scale * std::log1p(2.0 * u);
  return -scale * std::log1p(-2.0 * u);
}

double sample_standard_normal(RngStream& rng) {
  const double u1 = rng.next_uniform();
  const double u2 = rng.next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vector sample_gaussian_vec(std::size_t d, double sigma, RngStream& rng) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ContractViolation("Gaussian sigma must be nonnegative and finite");
  }
  Vector g(d);
  for (std::size_t i = 0; i < d; i += 2) {
    const double u1 = rng.next_uniform();
    const double u2 = rng.next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    g[i] = sigma * (r * std::cos(a));
    if (i + 1 < d) g[i + 1] = sigma * (r * std::sin(a));
  }
  return g;
}

double gaussian_sigma(double sensitivity, const PrivacyBudget& budget,
                      NoiseVariant variant) {
  if (!(sensitivity >= 0.0) || !std::isfinite(sensitivity)) {
    throw ContractViolation("sensitivity must be nonnegative and finite");
  }
  const double log_term = std::log(2.0 / budget.delta());
  switch (variant) {
    case NoiseVariant::kProof:
      return 2.0 * sensitivity * std::sqrt(log_term) / budget.epsilon();
    case NoiseVariant::kAlgLine9:
    default:
      return sensitivity * std::sqrt(2.0 * log_term) / budget.epsilon();
  }
}

PrivacyBudget compose(const PrivacyBudget& per_iter, long long T) {
  if (T < 1) throw ContractViolation("compose: T must be at least 1");
  const double t = static_cast<double>(T);
  const double eps = per_iter.epsilon();
  const double eps_total =
      2.0 * (t * eps * eps +
             std::sqrt(2.0 * std::log(1.0 / per_iter.delta()) * t) * eps);
  const double delta_total = (t + 1.0) * per_iter.delta();
  if (!(delta_total < 1.0)) {
    throw BudgetError("compose: total delta " + std::to_string(delta_total) +
                      " is not below 1");
  }
  return PrivacyBudget(eps_total, delta_total);
}

PrivacyBudget invert_budget(double epsilon_total, double delta_total,
                            long long T) {
  if (T < 1) throw ContractViolation("invert_budget: T must be at least 1");
  if (!(epsilon_total > 0.0) || !std::isfinite(epsilon_total)) {
    throw ContractViolation("invert_budget: total epsilon must be positive");
  }
  const double t = static_cast<double>(T);
  const double delta = delta_total / (t + 1.0);
  if (!(delta > 0.0 && delta < 1.0)) {
    throw BudgetError("invert_budget: delta_total / (T + 1) = " +
                      std::to_string(delta) + " is outside (0, 1)");
  }
  // 2T e^2 + 2 sqrt(2 ln(1/delta) T) e - eps_total = 0. The positive root is
  // written as 2c / (b + sqrt(b^2 + 4ac)) to avoid cancellation.
  const double a = 2.0 * t;
  const double b = 2.0 * std::sqrt(2.0 * std::log(1.0 / delta) * t);
  const double c = epsilon_total;
  const double eps = 2.0 * c / (b + std::sqrt(b * b + 4.0 * a * c));
  return PrivacyBudget(eps, delta);
}

PrivacyBudget invert_budget(const PrivacyBudget& total, long long T) {
  return invert_budget(total.epsilon(), total.delta(), T);
}

std::size_t exp_mech_select(std::span<const double> qualities,
                            double sensitivity, double epsilon,
                            RngStream& rng) {
  if (qualities.empty()) {
    throw ContractViolation("exp_mech_select: no candidates");
  }
  require_finite_positive(sensitivity, "exp_mech_select sensitivity");
  if (!(epsilon > 0.0)) {
    throw ContractViolation("exp_mech_select: epsilon must be positive");
  }
  for (double q : qualities) {
    if (!std::isfinite(q)) {
      throw ContractViolation("exp_mech_select: qualities must be finite");
    }
  }
  const auto best = std::max_element(qualities.begin(), qualities.end());
  if (std::isinf(epsilon)) {
    return static_cast<std::size_t>(best - qualities.begin());
  }
  const double qmax = *best;
  std::vector<double> weights(qualities.size());
  double total = 0.0;
  for (std::size_t j = 0; j < qualities.size(); ++j) {
    weights[j] = std::exp(epsilon * (qualities[j] - qmax) / (2.0 * sensitivity));
    total += weights[j];
  }
  double target = rng.next_uniform() * total;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    target -= weights[j];
    if (target < 0.0) return j;
  }
  // Rounding left a sliver of mass; fall back to the last positive weight.
  for (std::size_t j = weights.size(); j-- > 0;) {
    if (weights[j] > 0.0) return j;
  }
  return static_cast<std::size_t>(best - qualities.begin());
}

}  // namespace dppca
