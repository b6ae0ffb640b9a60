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

#ifndef DPPCA_SVTFILTER_H_
#define DPPCA_SVTFILTER_H_

#include <cstddef>
#include <span>

#include "dppca/matcore.h"
#include "dppca/mech.h"

namespace dppca {

enum class GridMode {
  // theta_k = 2^k * ||x|| for k in [grid_lo_exp, grid_hi_exp].
  kScaled,
  // theta_k = 2^k over the powers of two in [n^{-4T}, (2n)^T]. Only defined
  // for tiny instances (n <= 8, T <= 4) where the range fits in binary64.
  kAnalysisFaithful,
};

struct SvtConfig {
  double epsilon = 1.0;
  double beta = 0.05;
  int grid_lo_exp = -40;
  int grid_hi_exp = 1;
  bool noiseless = false;
  GridMode mode = GridMode::kScaled;
  int horizon = 1;  // iteration count T; only read by kAnalysisFaithful

  void validate() const;
};

struct ThresholdChoice {
  double theta = 0;
  int exponent = 0;  // k of the selected grid point
  std::size_t queries_issued = 0;
};

struct FilterOutcome {
  double theta = 0;
  DenseMatrix kept_gram;  // sum of a a^T over kept rows
  std::size_t removed_count = 0;
  std::size_t queries_issued = 0;
};

// ||a|| * |<a, x>| for every row.
Vector row_products(const DenseMatrix& a, std::span<const double> x);

// AboveThreshold search for the smallest grid threshold that keeps
// (noisily) all rows. One Lap(2/eps) draw for the threshold
// n - 6 ln(1/beta) / eps, then a fresh Lap(4/eps) per probe. Falls back to
// the top of the grid when no probe passes.
ThresholdChoice threshold_search(const DenseMatrix& a,
                                 std::span<const double> x,
                                 const SvtConfig& cfg, RngStream& rng);

// Same search over precomputed row products.
ThresholdChoice threshold_search(std::span<const double> products,
                                 double x_norm, const SvtConfig& cfg,
                                 RngStream& rng);

// Keeps rows with ||a|| |<a, x>| <= theta (inclusive).
FilterOutcome apply_filter(const DenseMatrix& a, std::span<const double> x,
                           double theta);

// apply_filter with the row products already computed by row_products().
FilterOutcome apply_filter_precomputed(const DenseMatrix& a,
                                       std::span<const double> products,
                                       double theta);

}  // namespace dppca

#endif  // DPPCA_SVTFILTER_H_
