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

#ifndef DPPCA_BASELINES_H_
#define DPPCA_BASELINES_H_

#include <cstddef>
#include <vector>

#include "dppca/matcore.h"
#include "dppca/mech.h"

namespace dppca {

// Neighboring relation between datasets. Add/remove-one-row gives l2
// sensitivity 1 for both baselines; replacing a row doubles it.
enum class Neighbor { kAddRemove, kSwap };

struct BaselineOptions {
  Neighbor neighbor = Neighbor::kAddRemove;
  NoiseVariant noise_variant = NoiseVariant::kAlgLine9;
  bool noiseless = false;
};

struct BaselineResult {
  Vector x_hat;
  std::vector<double> noise_sigmas;  // one entry per noise injection
};

// d x d symmetric matrix with i.i.d. N(0, sigma^2) upper triangle (diagonal
// included), drawn row by row.
DenseMatrix symmetric_gaussian_noise(std::size_t d, double sigma,
                                     RngStream& rng);

// Privatizes A^T A once with a symmetric Gaussian matrix and returns the top
// eigenvector of the noisy matrix.
BaselineResult analyze_gauss(const DenseMatrix& a, const PrivacyBudget& budget,
                             RngStream& rng, const BaselineOptions& opts = {});

// Power iteration on the full Gram with noise calibrated to the worst-case
// sensitivity ||a||^2 ||x|| <= 1 at unit x; normalizes every iteration.
BaselineResult noisy_power_naive(const DenseMatrix& a, int T,
                                 const PrivacyBudget& per_iter, RngStream& rng,
                                 const BaselineOptions& opts = {});

}  // namespace dppca

#endif  // DPPCA_BASELINES_H_
