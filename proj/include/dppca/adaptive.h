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

#ifndef DPPCA_ADAPTIVE_H_
#define DPPCA_ADAPTIVE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dppca/matcore.h"
#include "dppca/mech.h"
#include "dppca/svtfilter.h"

namespace dppca {

// Parameters of one private power-iteration run. Every iteration spends
// per_iter.epsilon on the threshold search and (per_iter.epsilon,
// per_iter.delta) on the Gaussian update.
struct AdaptiveParams {
  int T = 1;
  PrivacyBudget per_iter{1.0, 1e-6};
  double beta = 0.05;
  bool normalize = true;
  NoiseVariant noise_variant = NoiseVariant::kAlgLine9;
  // Zeroes every Laplace and Gaussian draw and the threshold offset; the
  // run then reduces to exact power iteration on the unfiltered Gram.
  bool noiseless = false;
  int grid_lo_exp = -40;
  int grid_hi_exp = 1;
  GridMode grid_mode = GridMode::kScaled;
  // Keep x^(t), the injected noise and the pre-normalization update of every
  // iteration in the trace. Meant for small instances.
  bool record_iterates = false;

  // Per-iteration budget derived from a total through invert_budget().
  static AdaptiveParams FromTotal(const PrivacyBudget& total, int T,
                                  double beta);

  SvtConfig svt_config() const;
  void validate() const;
  // compose(per_iter, T): the budget the whole run spends.
  PrivacyBudget total_budget() const;
};

struct IterationRecord {
  double theta = 0;
  int exponent = 0;
  std::size_t removed_count = 0;
  std::size_t queries_issued = 0;
  double noise_sigma = 0;
  double x_norm_pre = 0;   // ||filtered_gram x + noise||
  double x_norm_post = 0;  // norm after optional normalization
  bool restarted = false;  // update collapsed to zero and was redrawn
};

struct IterationTrace {
  Vector x0;
  std::vector<IterationRecord> iterations;
  std::size_t total_removed = 0;
  int iterations_run = 0;
  int restarts = 0;
  // Filled only when record_iterates is set.
  std::vector<Vector> inputs;   // x^(t) entering iteration t
  std::vector<Vector> noise;    // Gaussian vector added in iteration t
  std::vector<Vector> updates;  // filtered_gram x^(t) + noise
};

struct AdaptiveResult {
  Vector x_hat;
  IterationTrace trace;
};

// Private power iteration with per-iteration row filtering. Rows must have
// norm at most 1 + 1e-9. The start vector is drawn N(0, I) from rng.
AdaptiveResult run_adaptive_power(const DenseMatrix& a,
                                  const AdaptiveParams& params,
                                  RngStream& rng);

// Same, from a caller-chosen start vector. Used to compare against
// closed-form power iteration; production runs draw x0 themselves.
AdaptiveResult run_adaptive_power(const DenseMatrix& a,
                                  const AdaptiveParams& params,
                                  std::span<const double> x0, RngStream& rng);

// ceil(ln(n / (beta delta epsilon)) / kappa), at least 1.
int corollary_iterations(std::size_t n, double beta, double delta,
                         double epsilon, double kappa);

struct SweepParams {
  PrivacyBudget total{1.0, 1e-5};
  int guesses = 1;
  // Defaults to total.epsilon / 2.
  std::optional<double> selection_epsilon;
  // Shared options for every candidate run; T and per_iter are overwritten.
  AdaptiveParams base;
};

struct SweepCandidate {
  double kappa_guess = 0;
  int T = 0;
  PrivacyBudget per_iter{1.0, 1e-6};
  double quality = 0;  // x_hat^T A^T A x_hat
  AdaptiveResult run;
};

struct SweepResult {
  Vector x_hat;
  std::size_t selected = 0;
  double selected_guess = 0;
  double selection_epsilon = 0;
  std::vector<SweepCandidate> candidates;
};

// Runs one candidate per eigengap guess 2^-j (j < guesses) with T from
// corollary_iterations, then picks one through the exponential mechanism
// with quality x^T A^T A x (sensitivity 1). Half of total.epsilon pays for
// the selection; each run receives (total.epsilon / 2J, total.delta / J).
SweepResult run_kappa_sweep(const DenseMatrix& a, const SweepParams& params,
                            RngStream& rng);

// Best-of-R repetitions at a fixed T, selected the same way as the sweep.
SweepResult run_restarts(const DenseMatrix& a, const SweepParams& params,
                         int T, int restarts, RngStream& rng);

}  // namespace dppca

#endif  // DPPCA_ADAPTIVE_H_
