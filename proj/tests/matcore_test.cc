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

#include "dppca/matcore.h"

#include <cmath>
#include <limits>
#include <vector>

#include "dppca/errors.h"
#include "dppca/mech.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dppca {
namespace {

using ::dppca::testing::RandomMatrix;
using ::dppca::testing::RandomUnit;
using ::dppca::testing::RandomUnitRows;
using ::dppca::testing::ReconstructionResidual;

DenseMatrix Diag(double a, double b) { return DenseMatrix::FromRows({{a, 0}, {0, b}}); }

TEST(DenseMatrixTest, RejectsNonFiniteEntries) {
  EXPECT_THROW(DenseMatrix(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()}),
               ContractViolation);
  EXPECT_THROW(DenseMatrix(1, 1, {HUGE_VAL}), ContractViolation);
}

TEST(DenseMatrixTest, RejectsBadShapes) {
  EXPECT_THROW(DenseMatrix(0, 3), ContractViolation);
  EXPECT_THROW(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), ContractViolation);
  const std::size_t huge = std::numeric_limits<std::size_t>::max() / 2;
  EXPECT_THROW(DenseMatrix(huge, 4), SizingError);
}

TEST(GramTest, TwoByTwo) {
  const DenseMatrix g = gram(DenseMatrix::FromRows({{1, 2}, {3, 4}}));
  EXPECT_EQ(g, DenseMatrix::FromRows({{10, 14}, {14, 20}}));
}

TEST(GramTest, IdentityIsFixed) {
  EXPECT_EQ(gram(DenseMatrix::Identity(5)), DenseMatrix::Identity(5));
}

TEST(GramTest, ExactlySymmetricAndPsd) {
  RngStream rng(1, 1);
  const DenseMatrix g = gram(RandomMatrix(50, 7, rng));
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(g(i, j), g(j, i));
  }
  for (double lambda : sym_eig(g).values) EXPECT_GE(lambda, -1e-10);
}

TEST(SymEigTest, Diagonal) {
  const SymEigen e = sym_eig(Diag(3, 1));
  EXPECT_DOUBLE_EQ(e.values[0], 3);
  EXPECT_DOUBLE_EQ(e.values[1], 1);
  EXPECT_EQ(e.vectors, DenseMatrix::Identity(2));
}

TEST(SymEigTest, TwoByTwoClosedForm) {
  const SymEigen e = sym_eig(DenseMatrix::FromRows({{2, 1}, {1, 2}}));
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(e.values[0], 3, 1e-14);
  EXPECT_NEAR(e.values[1], 1, 1e-14);
  EXPECT_NEAR(e.vectors(0, 0), r, 1e-14);
  EXPECT_NEAR(e.vectors(1, 0), r, 1e-14);
  EXPECT_NEAR(e.vectors(0, 1), r, 1e-14);
  EXPECT_NEAR(e.vectors(1, 1), -r, 1e-14);
}

TEST(SymEigTest, RandomReconstruction) {
  RngStream rng(2, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const DenseMatrix b = RandomMatrix(8, 8, rng);
    DenseMatrix s(8, 8);
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < 8; ++j) s(i, j) = b(i, j) + b(j, i);
    }
    const SymEigen e = sym_eig(s);
    double err = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < 8; ++j) {
        double r = 0.0;
        for (std::size_t k = 0; k < 8; ++k) {
          r += e.vectors(i, k) * e.values[k] * e.vectors(j, k);
        }
        err += (s(i, j) - r) * (s(i, j) - r);
      }
    }
    EXPECT_LE(std::sqrt(err), 1e-10 * std::max(1.0, frobenius_norm(s)));
    for (std::size_t k = 1; k < 8; ++k) EXPECT_GE(e.values[k - 1], e.values[k]);
  }
}

TEST(SymEigTest, SignConvention) {
  RngStream rng(3, 0);
  const SymEigen e = sym_eig(gram(RandomMatrix(30, 6, rng)));
  for (std::size_t k = 0; k < 6; ++k) {
    for (std::size_t i = 0; i < 6; ++i) {
      if (std::abs(e.vectors(i, k)) > 1e-12) {
        EXPECT_GT(e.vectors(i, k), 0.0);
        break;
      }
    }
  }
}

TEST(SymEigTest, TiesKeepIndexOrder) {
  const SymEigen e = sym_eig(DenseMatrix::Identity(3));
  EXPECT_EQ(e.vectors, DenseMatrix::Identity(3));
  const double d[] = {1.0, 2.0, 2.0};
  const SymEigen f = sym_eig(DenseMatrix::Diagonal(d));
  EXPECT_EQ(f.vectors.column(0), (Vector{0, 1, 0}));
  EXPECT_EQ(f.vectors.column(1), (Vector{0, 0, 1}));
}

TEST(SymEigTest, RejectsAsymmetric) {
  EXPECT_THROW(sym_eig(DenseMatrix::FromRows({{1, 2}, {0, 1}})),
               ContractViolation);
  EXPECT_THROW(sym_eig(DenseMatrix(2, 3)), ContractViolation);
}

TEST(CompactSvdTest, Identity) {
  const SvdFactors f = compact_svd(DenseMatrix::Identity(3));
  EXPECT_EQ(f.spectrum.sigmas, (Vector{1, 1, 1}));
  EXPECT_EQ(f.u, DenseMatrix::Identity(3));
  EXPECT_EQ(f.v, DenseMatrix::Identity(3));
  EXPECT_EQ(f.rank, 3u);
}

TEST(CompactSvdTest, DuplicatedRow) {
  const SvdFactors f = compact_svd(DenseMatrix::FromRows({{1, 0}, {1, 0}}));
  EXPECT_NEAR(f.spectrum.sigmas[0], std::sqrt(2.0), 1e-15);
  EXPECT_EQ(f.spectrum.sigmas[1], 0.0);
  EXPECT_EQ(f.rank, 1u);
  EXPECT_NEAR(f.u(0, 0), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(f.u(1, 0), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(f.u(0, 1), 0.0);
  EXPECT_EQ(f.u(1, 1), 0.0);
}

TEST(CompactSvdTest, ZeroMatrixHasRankZero) {
  const SvdFactors f = compact_svd(DenseMatrix(4, 3));
  EXPECT_EQ(f.rank, 0u);
  EXPECT_EQ(f.spectrum.sigmas, (Vector{0, 0, 0}));
  EXPECT_EQ(f.u, DenseMatrix(4, 3));
}

TEST(CompactSvdTest, RandomReconstructionAndOrthonormality) {
  RngStream rng(4, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = 1 + rng.next_u64() % 16;
    const std::size_t n = d + rng.next_u64() % (65 - d);
    const DenseMatrix a = RandomMatrix(n, d, rng);
    const SvdFactors f = compact_svd(a);
    ASSERT_LE(ReconstructionResidual(a, f),
              1e-9 * std::max(1.0, frobenius_norm(a)))
        << n << "x" << d;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = 0; q < d; ++q) {
        const Vector vp = f.v.column(p), vq = f.v.column(q);
        EXPECT_NEAR(dot(vp, vq), p == q ? 1.0 : 0.0, 1e-9);
        if (p < f.rank && q < f.rank) {
          const Vector up = f.u.column(p), uq = f.u.column(q);
          EXPECT_NEAR(dot(up, uq), p == q ? 1.0 : 0.0, 1e-8);
        }
      }
    }
  }
}

TEST(CompactSvdTest, RankDeficientReconstruction) {
  RngStream rng(5, 0);
  const DenseMatrix b = RandomMatrix(40, 2, rng);
  DenseMatrix a(40, 6);
  for (std::size_t i = 0; i < 40; ++i) {
    for (std::size_t j = 0; j < 6; ++j) a(i, j) = b(i, j % 2) * (1.0 + j);
  }
  const SvdFactors f = compact_svd(a);
  EXPECT_EQ(f.rank, 2u);
  EXPECT_LE(ReconstructionResidual(a, f), 1e-9 * frobenius_norm(a));
  for (std::size_t k = f.rank; k < 6; ++k) {
    for (std::size_t i = 0; i < 40; ++i) EXPECT_EQ(f.u(i, k), 0.0);
  }
}

TEST(SinSqTest, Examples) {
  const Vector e1{1, 0}, e2{0, 1};
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_EQ(sin_sq(e1, e1), 0.0);
  EXPECT_EQ(sin_sq(e1, e2), 1.0);
  EXPECT_NEAR(sin_sq(e1, Vector{r, r}), 0.5, 1e-15);
}

TEST(SinSqTest, SymmetricAndSignInvariant) {
  RngStream rng(6, 0);
  for (int rep = 0; rep < 1000; ++rep) {
    const Vector u = RandomUnit(5, rng), v = RandomUnit(5, rng);
    Vector neg = v;
    for (double& x : neg) x = -x;
    const double s = sin_sq(u, v);
    EXPECT_EQ(s, sin_sq(v, u));
    EXPECT_EQ(s, sin_sq(u, neg));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_NEAR(s, 1.0 - dot(u, v) * dot(u, v), 1e-14);
  }
}

TEST(SinSqTest, ResolvesTinyAngles) {
  const double t = 1e-13;
  const Vector u{1, 0};
  const Vector v{1 / std::sqrt(1 + t * t), t / std::sqrt(1 + t * t)};
  EXPECT_NEAR(sin_sq(u, v), t * t / (1 + t * t), 1e-9 * t * t);
}

TEST(SinSqTest, RejectsNonUnit) {
  EXPECT_THROW(sin_sq(Vector{1, 1}, Vector{1, 0}), ContractViolation);
  EXPECT_THROW(sin_sq(Vector{1, 0}, Vector{1, 0, 0}), ContractViolation);
}

TEST(RayleighTest, Examples) {
  const DenseMatrix a = Diag(1, 0.5);
  EXPECT_DOUBLE_EQ(rayleigh_ratio(a, Vector{1, 0}), 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(rayleigh_ratio(a, Vector{r, r}), std::sqrt(1 + 0.0625) / std::sqrt(2.0),
              1e-15);
  EXPECT_NEAR(rayleigh_ratio(a, Vector{r, r}), 0.72887, 1e-5);
  EXPECT_THROW(rayleigh_ratio(a, Vector{0, 0}), ContractViolation);
}

TEST(RayleighTest, ScaleInvariantAndBracketed) {
  RngStream rng(7, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const DenseMatrix a = RandomMatrix(20, 5, rng);
    Vector x = sample_gaussian_vec(5, 1.0, rng);
    Vector x2 = x;
    for (double& v : x2) v *= 2;
    const double r = rayleigh_ratio(a, x);
    EXPECT_NEAR(r, rayleigh_ratio(a, x2), 1e-12 * r);
    const SvdFactors f = compact_svd(a);
    const double top = f.spectrum.sigmas[0] * f.spectrum.sigmas[0];
    const double bottom = f.spectrum.sigmas[4] * f.spectrum.sigmas[4];
    EXPECT_LE(r, top * (1 + 1e-9));
    EXPECT_GE(r, bottom * (1 - 1e-9));
    EXPECT_NEAR(rayleigh_ratio(a, f.v.column(0)), top, 1e-8 * top);
  }
}

TEST(SpectrumStatsTest, Diagonal) {
  const CoherenceStats s = spectrum_stats(Diag(1, 0.5));
  EXPECT_DOUBLE_EQ(s.upsilon, 1);
  EXPECT_DOUBLE_EQ(s.u_inf, 1);
  EXPECT_DOUBLE_EQ(s.kappa, 0.75);
  EXPECT_DOUBLE_EQ(s.mu, 2);
}

TEST(SpectrumStatsTest, DuplicatedRow) {
  const CoherenceStats s = spectrum_stats(DenseMatrix::FromRows({{1, 0}, {1, 0}}));
  EXPECT_NEAR(s.upsilon, 1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(s.kappa, 1.0);
  EXPECT_EQ(s.sigma2, 0.0);
}

TEST(SpectrumStatsTest, ZeroMatrixThrows) {
  EXPECT_THROW(spectrum_stats(DenseMatrix(3, 2)), RankError);
}

TEST(SpectrumStatsTest, CoherenceSandwich) {
  RngStream rng(8, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t d = 1 + rng.next_u64() % 8;
    const std::size_t n = d + rng.next_u64() % 40;
    const DenseMatrix a = RandomUnitRows(n, d, rng);
    const CoherenceStats s = spectrum_stats(a);
    EXPECT_GT(s.upsilon, 0.0);
    EXPECT_LE(s.upsilon, s.u_inf);
    EXPECT_LE(s.u_inf, std::sqrt(s.mu / static_cast<double>(n)) + 1e-9);
    EXPECT_LE(s.u_inf, 1.0 + 1e-12);
    EXPECT_GE(s.u_inf, 1 / std::sqrt(static_cast<double>(n)) - 1e-12);
    EXPECT_GE(s.mu, 1.0 - 1e-9);
    EXPECT_GE(s.kappa, 0.0);
    EXPECT_LE(s.kappa, 1.0);
    EXPECT_LE(s.sigma1 * s.upsilon, max_row_norm(a) + 1e-9);
  }
}

TEST(SpectrumStatsTest, GaussianRowsAreIncoherent) {
  const double bound = 6 * std::sqrt(std::log(4096.0) / 4096.0);
  EXPECT_NEAR(bound, 0.271, 1e-3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream rng(seed, 9);
    EXPECT_LE(spectrum_stats(RandomMatrix(4096, 16, rng)).u_inf, bound);
  }
}

TEST(ScaleRowsTest, Examples) {
  RngStream rng(10, 0);
  const DenseMatrix a = RandomMatrix(10, 3, rng);
  EXPECT_EQ(scale_rows(a, 1.0), a);
  EXPECT_EQ(scale_rows(Diag(2, 1), 0.5), Diag(1, 0.5));
  EXPECT_THROW(scale_rows(a, 0.0), ContractViolation);
  EXPECT_THROW(scale_rows(a, -1.0), ContractViolation);
  EXPECT_THROW(scale_rows(a, HUGE_VAL), ContractViolation);
}

TEST(ScaleRowsTest, GapAndCoherenceUnchanged) {
  RngStream rng(11, 0);
  const DenseMatrix a = RandomMatrix(30, 4, rng);
  const CoherenceStats s = spectrum_stats(a);
  const CoherenceStats t = spectrum_stats(scale_rows(a, 0.3));
  EXPECT_NEAR(s.kappa, t.kappa, 1e-12);
  EXPECT_NEAR(s.upsilon, t.upsilon, 1e-12);
  EXPECT_NEAR(0.3 * s.sigma1, t.sigma1, 1e-12 * s.sigma1);
}

TEST(RequireUnitRowsTest, ToleranceBoundary) {
  EXPECT_NO_THROW(require_unit_rows(DenseMatrix::FromRows({{1 + 5e-10, 0}})));
  EXPECT_THROW(require_unit_rows(DenseMatrix::FromRows({{1 + 1e-8, 0}})),
               ContractViolation);
}

}  // namespace
}  // namespace dppca
