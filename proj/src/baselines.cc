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

#include "dppca/baselines.h"

#include <utility>

#include "dppca/errors.h"

namespace dppca {
namespace {

double sensitivity(const BaselineOptions& opts) {
  return opts.neighbor == Neighbor::kSwap ? 2.0 : 1.0;
}

void normalize(Vector& x) {
  const double len = norm2(x);
  if (!(len > 0.0)) throw NumericalError("baseline iterate collapsed", len);
  for (double& v : x) v /= len;
}

}  // namespace

DenseMatrix symmetric_gaussian_noise(std::size_t d, double sigma,
                                     RngStream& rng) {
  DenseMatrix e(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const Vector row = sample_gaussian_vec(d - i, sigma, rng);
    for (std::size_t j = i; j < d; ++j) {
      e(i, j) = row[j - i];
      e(j, i) = row[j - i];
    }
  }
  return e;
}

BaselineResult analyze_gauss(const DenseMatrix& a, const PrivacyBudget& budget,
                             RngStream& rng, const BaselineOptions& opts) {
  require_unit_rows(a);
  const std::size_t d = a.cols();
  const double sigma =
      opts.noiseless ? 0.0
                     : gaussian_sigma(sensitivity(opts), budget, opts.noise_variant);
  DenseMatrix m = gram(a);
  if (sigma > 0.0) {
    const DenseMatrix e = symmetric_gaussian_noise(d, sigma, rng);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) m(i, j) += e(i, j);
    }
  }
  const SymEigen eig = sym_eig(m);
  BaselineResult out{eig.vectors.column(0), {sigma}};
  normalize(out.x_hat);
  return out;
}

BaselineResult noisy_power_naive(const DenseMatrix& a, int T,
                                 const PrivacyBudget& per_iter, RngStream& rng,
                                 const BaselineOptions& opts) {
  if (T < 1) throw ContractViolation("naive power: T must be at least 1");
  require_unit_rows(a);
  const std::size_t d = a.cols();
  const double sigma =
      opts.noiseless
          ? 0.0
          : gaussian_sigma(sensitivity(opts), per_iter, opts.noise_variant);
  const DenseMatrix g = gram(a);
  BaselineResult out;
  Vector x = sample_gaussian_vec(d, 1.0, rng);
  normalize(x);
  for (int t = 0; t < T; ++t) {
    Vector y = mat_vec(g, x);
    if (sigma > 0.0) {
      const Vector noise = sample_gaussian_vec(d, sigma, rng);
      for (std::size_t j = 0; j < d; ++j) y[j] += noise[j];
    }
    normalize(y);
    x = std::move(y);
    out.noise_sigmas.push_back(sigma);
  }
  out.x_hat = std::move(x);
  return out;
}

}  // namespace dppca
