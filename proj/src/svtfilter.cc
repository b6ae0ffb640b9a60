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

#include "dppca/svtfilter.h"

#include <cmath>
#include <string>

#include "dppca/errors.h"

namespace dppca {
namespace {

struct Grid {
  int lo;
  int hi;
  double base;  // theta_k = base * 2^k
};

Grid make_grid(const SvtConfig& cfg, std::size_t n, double x_norm) {
  if (cfg.mode == GridMode::kScaled) {
    return {cfg.grid_lo_exp, cfg.grid_hi_exp, x_norm};
  }
  if (n > 8 || cfg.horizon > 4) {
    throw ParameterError(
        "analysis-faithful grid needs n <= 8 and T <= 4, got n=" +
        std::to_string(n) + " T=" + std::to_string(cfg.horizon));
  }
  const double t = cfg.horizon;
  const double log2n = std::log2(static_cast<double>(n));
  const int lo = -static_cast<int>(std::ceil(4.0 * t * log2n));
  const int hi = static_cast<int>(std::ceil(t * std::log2(2.0 * n)));
  return {lo, hi, 1.0};
}

}  // namespace

void SvtConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ContractViolation("SVT epsilon must be positive");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ContractViolation("SVT beta must lie in (0, 1)");
  }
  if (mode == GridMode::kScaled && !(grid_lo_exp < grid_hi_exp)) {
    throw ContractViolation("SVT grid needs grid_lo_exp < grid_hi_exp");
  }
  if (horizon < 1) throw ContractViolation("SVT horizon must be >= 1");
}

Vector row_products(const DenseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) {
    throw ContractViolation("row_products: dimension mismatch");
  }
  Vector p(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    p[i] = norm2(r) * std::abs(dot(r, x));
  }
  return p;
}

ThresholdChoice threshold_search(std::span<const double> products,
                                 double x_norm, const SvtConfig& cfg,
                                 RngStream& rng) {
  cfg.validate();
  if (!(x_norm > 0.0)) {
    throw ContractViolation("threshold_search: x must be nonzero");
  }
  const std::size_t n = products.size();
  const Grid grid = make_grid(cfg, n, x_norm);

  double threshold = static_cast<double>(n);
  if (!cfg.noiseless) {
    threshold += -6.0 * std::log(1.0 / cfg.beta) / cfg.epsilon +
                 sample_laplace(2.0 / cfg.epsilon, rng);
  }
  ThresholdChoice choice;
  for (int k = grid.lo; k <= grid.hi; ++k) {
    const double theta = std::ldexp(grid.base, k);
    std::size_t count = 0;
    for (double p : products) count += p <= theta ? 1 : 0;
    ++choice.queries_issued;
    double noisy = static_cast<double>(count);
    if (!cfg.noiseless) noisy += sample_laplace(4.0 / cfg.epsilon, rng);
    if (noisy >= threshold || k == grid.hi) {
      choice.theta = theta;
      choice.exponent = k;
      break;
    }
  }
  return choice;
}

ThresholdChoice threshold_search(const DenseMatrix& a,
                                 std::span<const double> x,
                                 const SvtConfig& cfg, RngStream& rng) {
  const double x_norm = norm2(x);
  if (!(x_norm > 0.0)) {
    throw ContractViolation("threshold_search: x must be nonzero");
  }
  require_unit_rows(a);
  return threshold_search(row_products(a, x), x_norm, cfg, rng);
}

FilterOutcome apply_filter(const DenseMatrix& a, std::span<const double> x,
                           double theta) {
  return apply_filter_precomputed(a, row_products(a, x), theta);
}

FilterOutcome apply_filter_precomputed(const DenseMatrix& a,
                                       std::span<const double> products,
                                       double theta) {
  if (!(theta > 0.0)) throw ContractViolation("apply_filter: theta must be > 0");
  if (products.size() != a.rows()) {
    throw ContractViolation("apply_filter: one product per row required");
  }
  const std::size_t d = a.cols();
  FilterOutcome out{theta, DenseMatrix(d, d), 0, 0};
  DenseMatrix& g = out.kept_gram;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    if (!(products[r] <= theta)) {
      ++out.removed_count;
      continue;
    }
    const auto row = a.row(r);
    for (std::size_t i = 0; i < d; ++i) {
      const double ri = row[i];
      if (ri == 0.0) continue;
      for (std::size_t j = i; j < d; ++j) g(i, j) += ri * row[j];
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  }
  return out;
}

}  // namespace dppca
