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
#include <vector>

#include "dppca/errors.h"
#include "dppca/matcore.h"
#include "dppca/mech.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dppca {
namespace {

using ::dppca::testing::RandomUnit;
using ::dppca::testing::RandomUnitRows;

SvtConfig Noiseless() {
  SvtConfig cfg;
  cfg.noiseless = true;
  return cfg;
}

TEST(SvtConfigTest, Validation) {
  SvtConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.grid_lo_exp = 1;
  EXPECT_THROW(cfg.validate(), ContractViolation);
  cfg = SvtConfig{};
  cfg.beta = 1.0;
  EXPECT_THROW(cfg.validate(), ContractViolation);
  cfg = SvtConfig{};
  cfg.epsilon = 0.0;
  EXPECT_THROW(cfg.validate(), ContractViolation);
}

TEST(ThresholdSearchTest, NoiselessIdentity) {
  RngStream rng(1, 0);
  const DenseMatrix a = DenseMatrix::Identity(3);
  const ThresholdChoice c = threshold_search(a, Vector{1, 0, 0}, Noiseless(), rng);
  EXPECT_EQ(c.theta, 1.0);
  EXPECT_EQ(c.exponent, 0);
  EXPECT_EQ(c.queries_issued, 41u);
  EXPECT_EQ(rng.counter(), 0u);
}

TEST(ThresholdSearchTest, ScalesWithIterateNorm) {
  RngStream rng(1, 0);
  const ThresholdChoice c = threshold_search(DenseMatrix::Identity(3),
                                             Vector{4, 0, 0}, Noiseless(), rng);
  // Products are (4, 0, 0); the grid is 2^k * 4.
  EXPECT_EQ(c.theta, 4.0);
  EXPECT_EQ(c.exponent, 0);
}

TEST(ThresholdSearchTest, OrthogonalRowsPickBottomOfGrid) {
  RngStream rng(2, 0);
  const DenseMatrix a = DenseMatrix::FromRows({{0, 1}, {0, -0.5}, {0, 0.2}});
  const ThresholdChoice c = threshold_search(a, Vector{3, 0}, Noiseless(), rng);
  EXPECT_EQ(c.exponent, -40);
  EXPECT_EQ(c.theta, std::ldexp(3.0, -40));
}

TEST(ThresholdSearchTest, LargeOffsetPassesFirstProbe) {
  // -6 ln(1/beta)/eps pushes the noisy threshold far below zero.
  RngStream rng(3, 0);
  SvtConfig cfg;
  cfg.epsilon = 1e-3;
  cfg.beta = 1e-300;
  const ThresholdChoice c =
      threshold_search(std::vector<double>(4, 0.0), 1.0, cfg, rng);
  EXPECT_EQ(c.exponent, cfg.grid_lo_exp);
  EXPECT_EQ(c.queries_issued, 1u);
}

TEST(ThresholdSearchTest, FallsBackToTopOfGrid) {
  RngStream rng(3, 0);
  SvtConfig cfg = Noiseless();
  cfg.grid_hi_exp = -10;
  const ThresholdChoice top =
      threshold_search(std::vector<double>{1.0, 1.0}, 1.0, cfg, rng);
  EXPECT_EQ(top.exponent, -10);
  EXPECT_EQ(top.queries_issued, 31u);
}

TEST(ThresholdSearchTest, RejectsZeroIterateAndLongRows) {
  RngStream rng(4, 0);
  EXPECT_THROW(threshold_search(DenseMatrix::Identity(2), Vector{0, 0},
                                SvtConfig{}, rng),
               ContractViolation);
  EXPECT_THROW(threshold_search(DenseMatrix::FromRows({{2, 0}}), Vector{1, 0},
                                SvtConfig{}, rng),
               ContractViolation);
}

TEST(ThresholdSearchTest, DeterministicForFixedStream) {
  RngStream data(5, 0);
  const DenseMatrix a = RandomUnitRows(200, 6, data);
  const Vector x = RandomUnit(6, data);
  SvtConfig cfg;
  cfg.epsilon = 0.3;
  RngStream r1(9, 9), r2(9, 9);
  const ThresholdChoice c1 = threshold_search(a, x, cfg, r1);
  const ThresholdChoice c2 = threshold_search(a, x, cfg, r2);
  EXPECT_EQ(c1.theta, c2.theta);
  EXPECT_EQ(c1.queries_issued, c2.queries_issued);
  // One threshold draw plus one draw per probe.
  EXPECT_EQ(r1.counter(), 1 + c1.queries_issued);
}

TEST(ThresholdSearchTest, AnalysisFaithfulGrid) {
  RngStream rng(6, 0);
  SvtConfig cfg = Noiseless();
  cfg.mode = GridMode::kAnalysisFaithful;
  cfg.horizon = 2;
  const ThresholdChoice c =
      threshold_search(DenseMatrix::Identity(3), Vector{0.5, 0, 0}, cfg, rng);
  // Absolute grid: products (0.5, 0, 0), so theta = 2^-1.
  EXPECT_EQ(c.theta, 0.5);
  EXPECT_EQ(c.exponent, -1);
  // Grid starts at -ceil(4 T log2 n) = -13 for n = 3, T = 2.
  EXPECT_EQ(c.queries_issued, 13u);

  const ThresholdChoice bottom = threshold_search(
      DenseMatrix::FromRows({{0, 1}, {0, 1}, {0, 1}}), Vector{1, 0}, cfg, rng);
  EXPECT_EQ(bottom.exponent, -13);

  EXPECT_THROW(threshold_search(DenseMatrix::Identity(9), RandomUnit(9, rng),
                                cfg, rng),
               ParameterError);
  cfg.horizon = 5;
  EXPECT_THROW(threshold_search(DenseMatrix::Identity(3), Vector{1, 0, 0},
                                cfg, rng),
               ParameterError);
}

TEST(ApplyFilterTest, IdentityExample) {
  const FilterOutcome f = apply_filter(DenseMatrix::Identity(3), Vector{1, 0, 0}, 0.5);
  const double diag[] = {0, 1, 1};
  EXPECT_EQ(f.kept_gram, DenseMatrix::Diagonal(diag));
  EXPECT_EQ(f.removed_count, 1u);
  EXPECT_EQ(f.theta, 0.5);
}

TEST(ApplyFilterTest, InclusiveComparison) {
  const FilterOutcome f = apply_filter(DenseMatrix::Identity(3), Vector{1, 0, 0}, 1.0);
  EXPECT_EQ(f.removed_count, 0u);
}

TEST(ApplyFilterTest, KeepAllMatchesGramBitwise) {
  RngStream rng(7, 0);
  const DenseMatrix a = RandomUnitRows(100, 8, rng);
  const Vector x = RandomUnit(8, rng);
  const FilterOutcome f = apply_filter(a, x, 2.0);
  EXPECT_EQ(f.removed_count, 0u);
  EXPECT_EQ(f.kept_gram, gram(a));
}

TEST(ApplyFilterTest, KeepsOnlyZeroProductRows) {
  const DenseMatrix a =
      DenseMatrix::FromRows({{0, 1}, {0.5, 0.5}, {0, -0.3}, {0.1, 0}});
  const Vector x{1, 0};
  const Vector p = row_products(a, x);
  double min_pos = HUGE_VAL;
  for (double v : p) {
    if (v > 0) min_pos = std::min(min_pos, v);
  }
  const FilterOutcome f = apply_filter(a, x, 0.5 * min_pos);
  EXPECT_EQ(f.removed_count, 2u);
  EXPECT_EQ(f.kept_gram, gram(DenseMatrix::FromRows({{0, 1}, {0, -0.3}})));
}

TEST(ApplyFilterTest, RejectsNonPositiveTheta) {
  EXPECT_THROW(apply_filter(DenseMatrix::Identity(2), Vector{1, 0}, 0.0),
               ContractViolation);
}

TEST(ApplyFilterTest, PropertiesOnRandomData) {
  RngStream rng(8, 0);
  for (int rep = 0; rep < 30; ++rep) {
    const DenseMatrix a = RandomUnitRows(60, 5, rng);
    const Vector x = RandomUnit(5, rng);
    const Vector p = row_products(a, x);
    std::size_t prev_kept = 0;
    for (int k = -8; k <= 1; ++k) {
      const double theta = std::ldexp(1.0, k);
      const FilterOutcome f = apply_filter(a, x, theta);
      const std::size_t kept = a.rows() - f.removed_count;
      EXPECT_GE(kept, prev_kept);
      prev_kept = kept;
      // Removed mass is a sum of outer products, hence PSD.
      const DenseMatrix g = gram(a);
      DenseMatrix n_mat(5, 5);
      for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) n_mat(i, j) = g(i, j) - f.kept_gram(i, j);
      }
      for (double lambda : sym_eig(n_mat).values) EXPECT_GE(lambda, -1e-10);
      for (double lambda : sym_eig(f.kept_gram).values) EXPECT_GE(lambda, -1e-10);
      // Every kept row moves the update by at most theta.
      for (std::size_t i = 0; i < a.rows(); ++i) {
        if (p[i] > theta) continue;
        const double ax = dot(a.row(i), x);
        EXPECT_LE(norm2(a.row(i)) * std::abs(ax), theta + 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace dppca
