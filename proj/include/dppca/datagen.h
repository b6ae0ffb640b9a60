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

#ifndef DPPCA_DATAGEN_H_
#define DPPCA_DATAGEN_H_

#include <cstddef>

#include "dppca/matcore.h"
#include "dppca/mech.h"

namespace dppca {

// Population spectrum of a zero-mean Gaussian: eigenvalues sigmabar_sq
// (nonincreasing, summing to 1) in the basis of a random rotation, or the
// canonical basis when rotate is off.
struct GaussSpec {
  Vector sigmabar_sq;
  bool rotate = false;

  // sigmabar_1^2 = sigma1_sq, sigmabar_2^2 = (1 - kappabar) sigma1_sq, the
  // remaining d - 2 values share what is left of the unit trace.
  static GaussSpec Spiked(std::size_t d, double sigma1_sq, double kappabar,
                          bool rotate = true);
  static GaussSpec Uniform(std::size_t d, bool rotate = false);

  std::size_t dim() const { return sigmabar_sq.size(); }
  double kappabar() const;
  void validate() const;
};

struct GaussianInstance {
  DenseMatrix a;
  Vector vbar1;         // population top eigenvector
  DenseMatrix rotation; // Q; identity when rotate is off
};

// n rows Q diag(sigmabar) z_i with z_i ~ N(0, I). Rows are not bounded.
GaussianInstance gen_gaussian_iid(std::size_t n, const GaussSpec& spec,
                                  RngStream& rng);

// Planted spectrum sigma_1^2 = sigma1_frac * n, sigma_2^2 = (1 - gap)
// sigma_1^2 and the rest at a tenth of sigma_2^2, between random orthonormal
// factors (skipped when rotate is false). The result is rescaled so the
// longest row has norm 1. Throws ParameterError when the planted trace
// exceeds n, which no matrix with unit rows can reach.
DenseMatrix gen_low_coherence(std::size_t n, std::size_t d, double sigma1_frac,
                              double gap, RngStream& rng, bool rotate = true);

struct HighCoherenceOptions {
  std::size_t spike_rows = 2;
  // Background rows are N(0, noise_level^2 / n) per coordinate, so their
  // Gram contribution stays near noise_level^2 * I for any n.
  double noise_level = 0.5;
};

// A few rows equal to e_1 carry the top direction; the rest is small
// Gaussian noise. Coherence is close to its maximum.
DenseMatrix gen_high_coherence(std::size_t n, std::size_t d, RngStream& rng,
                               const HighCoherenceOptions& opts = {});

// Haar-distributed d x d orthogonal matrix (QR of a Gaussian matrix with
// positive R diagonal).
DenseMatrix random_orthogonal(std::size_t d, RngStream& rng);

// 1 + sqrt(2 ln(n / beta)): with probability 1 - beta every row of a
// trace-1 Gaussian sample is at most this long.
double row_length_bound(std::size_t n, double beta);

struct ScaledInstance {
  DenseMatrix a;
  double L = 1;
  std::size_t clipped = 0;
};

// Divides by row_length_bound(n, beta) and clips any row still longer than
// 1 back to unit norm.
ScaledInstance scale_gaussian_rows(const DenseMatrix& a, double beta);

}  // namespace dppca

#endif  // DPPCA_DATAGEN_H_
