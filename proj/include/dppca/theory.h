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

#ifndef DPPCA_THEORY_H_
#define DPPCA_THEORY_H_

#include <cstddef>
#include <optional>

#include "dppca/datagen.h"
#include "dppca/matcore.h"

namespace dppca {

// Closed-form constants of the utility analysis. Every hidden constant is
// set to the explicit value that appears in the derivation, and to 1 where
// none is given, so the bounds are right in shape and approximate in scale.

struct KConstants {
  double c1 = 0;
  double c2 = 0;
  double K = 0;
};

// c1 = 8 sqrt(ln(2/delta) ln(2Tn/beta)),
// c2 = 8 (ln(T ln n) + 2 ln(8/beta)).
// Throws DomainError if T < 2, n < 3 or any log argument is <= 1.
KConstants constants_K(long long T, std::size_t n, double beta, double delta);

struct Rates {
  // Roots of (K/eps) s^2 - b s + (K/eps) sigma1 upsilon = 0 with
  // b = sigma1^2 - (K/eps) sigma1 upsilon - sigma2^2 - K/eps; s1 >= s2.
  // Absent when the roots are complex or not positive.
  std::optional<double> s1, s2;
  std::optional<double> alpha1, alpha2;  // sigma2^2 + K/eps + (K/eps) s_i
  std::optional<double> rate_ratio;      // alpha1 / alpha2
  double kappa = 0;
  bool condition_ok = false;
};

// True iff kappa >= 4 (K upsilon / (eps sigma1) + K^2 / (eps sigma1^2)).
bool gap_condition(double sigma1, double sigma2, double upsilon,
                   double epsilon, double K);

Rates solve_rates(double sigma1, double sigma2, double upsilon,
                  double epsilon, double K);

struct ErrorBound {
  std::optional<double> R;
  std::optional<double> B;  // absent unless the gap condition holds
};

// R = (sqrt(min(4n / sigma1^2, d)) / (eps sigma1^2 sqrt(kappa))
//      + 1 / (eps sigma1^2 kappa) + sqrt(d) / (eps sigma1^2)) K sigma1 upsilon
// B = (R + 6000 K (1 + 8 T d) (1 + kappa / 2)^-T)^2
ErrorBound bound_B(const CoherenceStats& stats, double epsilon, long long T,
                   double K, std::size_t d, std::size_t n);

struct GaussianBounds {
  double L = 0;            // row length bound
  double G = 0;            // ||A^T A - n Sigma||_2 envelope
  double wedin_bound = 0;  // sin^2 between sample and population v_1
  double n_min = 0;        // sample size that makes the pipeline valid
  double K3 = 0;           // 2 + 2 sqrt(t) + 2 t, t = ln(2n / beta)
};

// The Wedin constant is taken as 1.
GaussianBounds gaussian_bounds(const GaussSpec& spec, std::size_t n,
                               double beta);

struct TheoryInputs {
  std::size_t n = 0;
  std::size_t d = 0;
  long long T = 2;
  double epsilon = 1;
  double delta = 1e-6;
  double beta = 0.05;
  double sigma1 = 0;
  double sigma2 = 0;
  double upsilon = 0;
};

struct TheoryReport {
  KConstants constants;
  Rates rates;
  ErrorBound bound;
  std::optional<GaussianBounds> gaussian;
};

TheoryReport theory_report(const TheoryInputs& in,
                           const GaussSpec* spec = nullptr);

}  // namespace dppca

#endif  // DPPCA_THEORY_H_
