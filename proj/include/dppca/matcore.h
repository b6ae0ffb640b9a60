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

#ifndef DPPCA_MATCORE_H_
#define DPPCA_MATCORE_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dppca {

using Vector = std::vector<double>;

// Dense row-major matrix of binary64 values. Rows are datapoints, the unit
// of privacy. Every instance has at least one row and one column and only
// finite entries.
class DenseMatrix {
 public:
  // Zero-filled rows x cols matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);
  // Takes ownership of row-major `data`; throws if sizes disagree or any
  // entry is not finite.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static DenseMatrix FromRows(
      std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix Identity(std::size_t n);
  static DenseMatrix Diagonal(std::span<const double> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> mutable_row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> data() const { return data_; }

  Vector column(std::size_t j) const;

  bool operator==(const DenseMatrix& other) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

// Relative threshold below which a singular value counts as zero.
inline constexpr double kRankTol = 1e-12;

// Eigendecomposition of a symmetric matrix: eigenvalues nonincreasing,
// eigenvectors stored as the columns of `vectors`.
struct SymEigen {
  Vector values;
  DenseMatrix vectors;
  int sweeps = 0;
};

struct Spectrum {
  Vector sigmas;  // nonincreasing, nonnegative
};

// Compact SVD A = U diag(sigma) V^T with U n x d and V d x d. Columns of U
// at or beyond `rank` are zero.
struct SvdFactors {
  DenseMatrix u;
  Spectrum spectrum;
  DenseMatrix v;
  std::size_t rank = 0;
};

struct CoherenceStats {
  double upsilon = 0;  // max_i |U_{i,1}|
  double u_inf = 0;    // max |U_ij| over the compact factor
  double v_inf = 0;    // max |V_ij|
  double mu = 0;       // max{n u_inf^2, d v_inf^2}
  double kappa = 0;    // (sigma1^2 - sigma2^2) / sigma1^2
  double sigma1 = 0;
  double sigma2 = 0;
  std::size_t rank = 0;
};

// A^T A, accumulated row by row and mirrored so the result is exactly
// symmetric.
DenseMatrix gram(const DenseMatrix& a);

// Cyclic Jacobi eigensolver. Stops when the off-diagonal Frobenius norm is
// at most 1e-12 * ||S||_F; throws NumericalError after 100 sweeps.
// Eigenvector signs are fixed so the first component with magnitude above
// 1e-12 is positive. Near-equal eigenvalues keep their original order.
SymEigen sym_eig(const DenseMatrix& s);

SvdFactors compact_svd(const DenseMatrix& a);

// 1 - <u,v>^2 for unit vectors, clamped to [0, 1].
double sin_sq(std::span<const double> u, std::span<const double> v);

// ||A^T A x|| / ||x||.
double rayleigh_ratio(const DenseMatrix& a, std::span<const double> x);

// Throws RankError for the zero matrix.
CoherenceStats spectrum_stats(const DenseMatrix& a);
CoherenceStats spectrum_stats(const SvdFactors& f);

DenseMatrix scale_rows(const DenseMatrix& a, double factor);

// Small vector helpers shared by the other modules.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
Vector mat_vec(const DenseMatrix& m, std::span<const double> x);
// A^T (A x) without forming the Gram matrix.
Vector gram_vec(const DenseMatrix& a, std::span<const double> x);
double frobenius_norm(const DenseMatrix& m);
double max_row_norm(const DenseMatrix& a);
// Throws ContractViolation if some row is longer than 1 + tol.
void require_unit_rows(const DenseMatrix& a, double tol = 1e-9);
// Flips sign so the first component above 1e-12 in magnitude is positive.
void canonicalize_sign(std::span<double> v);

}  // namespace dppca

#endif  // DPPCA_MATCORE_H_
