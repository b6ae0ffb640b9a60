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

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "dppca/errors.h"

namespace dppca {
namespace {

constexpr int kMaxSweeps = 100;
constexpr double kJacobiTol = 1e-12;
constexpr double kSignTol = 1e-12;
constexpr double kTieTol = 1e-12;
constexpr double kUnitTol = 1e-9;

std::size_t checked_size(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw ContractViolation("matrix dimensions must be positive");
  }
  if (rows > std::numeric_limits<std::size_t>::max() / sizeof(double) / cols) {
    throw SizingError("matrix of " + std::to_string(rows) + " x " +
                      std::to_string(cols) + " exceeds addressable size");
  }
  return rows * cols;
}

double off_diagonal_norm(const DenseMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

// One Jacobi rotation annihilating a(p, q).
void rotate(DenseMatrix& a, DenseMatrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    if (theta < 0) t = -t;
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t d = a.rows();
  for (std::size_t k = 0; k < d; ++k) {
    if (k == p || k == q) continue;
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(p, k) = a(k, p);
    a(k, q) = s * akp + c * akq;
    a(q, k) = a(k, q);
  }
  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

void require_unit(std::span<const double> u, const char* name) {
  const double n = norm2(u);
  if (!(std::abs(n - 1.0) <= kUnitTol)) {
    throw ContractViolation(std::string("sin_sq: ") + name +
                            " is not a unit vector (norm " +
                            std::to_string(n) + ")");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(checked_size(rows, cols), 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != checked_size(rows, cols)) {
    throw ContractViolation("matrix data size does not match dimensions");
  }
  for (double x : data_) {
    if (!std::isfinite(x)) {
      throw ContractViolation("matrix entries must be finite");
    }
  }
}

DenseMatrix DenseMatrix::FromRows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t d = n == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(n * d);
  for (const auto& r : rows) {
    if (r.size() != d) throw ContractViolation("ragged rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return DenseMatrix(n, d, std::move(data));
}

DenseMatrix DenseMatrix::Identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::Diagonal(std::span<const double> diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Vector DenseMatrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Vector mat_vec(const DenseMatrix& m, std::span<const double> x) {
  if (x.size() != m.cols()) throw ContractViolation("mat_vec: size mismatch");
  Vector y(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) y[i] = dot(m.row(i), x);
  return y;
}

Vector gram_vec(const DenseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw ContractViolation("gram_vec: size mismatch");
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    const double p = dot(r, x);
    for (std::size_t j = 0; j < r.size(); ++j) y[j] += p * r[j];
  }
  return y;
}

double frobenius_norm(const DenseMatrix& m) { return norm2(m.data()); }

double max_row_norm(const DenseMatrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    best = std::max(best, norm2(a.row(i)));
  }
  return best;
}

void require_unit_rows(const DenseMatrix& a, double tol) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double len = norm2(a.row(i));
    if (len > 1.0 + tol) {
      throw ContractViolation("row " + std::to_string(i) + " has norm " +
                              std::to_string(len) +
                              " > 1; rescale the input (e.g. --auto-scale)");
    }
  }
}

void canonicalize_sign(std::span<double> v) {
  for (double x : v) {
    if (std::abs(x) > kSignTol) {
      if (x < 0) {
        for (double& y : v) y = -y;
      }
      return;
    }
  }
}

DenseMatrix gram(const DenseMatrix& a) {
  const std::size_t d = a.cols();
  checked_size(d, d);
  DenseMatrix g(d, d);
  for (std::size_t r = 0; r < a.rows(); ++r) {
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
  return g;
}

SymEigen sym_eig(const DenseMatrix& s) {
  const std::size_t d = s.rows();
  if (s.cols() != d) throw ContractViolation("sym_eig: matrix is not square");
  const double scale = frobenius_norm(s);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(s(i, j) - s(j, i)) > 1e-9 * std::max(1.0, scale)) {
        throw ContractViolation("sym_eig: matrix is not symmetric");
      }
    }
  }

  DenseMatrix a = s;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      a(i, j) = a(j, i) = 0.5 * (s(i, j) + s(j, i));
    }
  }
  DenseMatrix v = DenseMatrix::Identity(d);

  int sweeps = 0;
  double off = off_diagonal_norm(a);
  while (off > kJacobiTol * scale) {
    if (sweeps == kMaxSweeps) {
      throw NumericalError("sym_eig: no convergence after 100 sweeps",
                           off / scale);
    }
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        if (a(p, q) != 0.0) rotate(a, v, p, q);
      }
    }
    ++sweeps;
    off = off_diagonal_norm(a);
  }

  Vector diag(d);
  for (std::size_t i = 0; i < d; ++i) diag[i] = a(i, i);
  const double top =
      d == 0 ? 0.0 : std::abs(*std::max_element(diag.begin(), diag.end()));
  const double tie = kTieTol * top;

  // Insertion sort: an index only moves ahead of its predecessor when its
  // eigenvalue is larger by more than the tie tolerance.
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 1; i < d; ++i) {
    const std::size_t cur = order[i];
    std::size_t j = i;
    while (j > 0 && diag[cur] > diag[order[j - 1]] + tie) {
      order[j] = order[j - 1];
      --j;
    }
    order[j] = cur;
  }

  SymEigen out{Vector(d), DenseMatrix(d, d), sweeps};
  Vector col(d);
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t src = order[k];
    out.values[k] = diag[src];
    for (std::size_t i = 0; i < d; ++i) col[i] = v(i, src);
    canonicalize_sign(col);
    for (std::size_t i = 0; i < d; ++i) out.vectors(i, k) = col[i];
  }
  return out;
}

SvdFactors compact_svd(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  const std::size_t d = a.cols();
  SymEigen eig = sym_eig(gram(a));

  // Eigenvalues of the Gram matrix are only resolved to about d * eps
  // relative to the largest; anything below that is treated as zero.
  const double lam1 = std::max(eig.values[0], 0.0);
  const double floor = 4.0 * static_cast<double>(d) * DBL_EPSILON * lam1;

  SvdFactors f{DenseMatrix(n, d), Spectrum{Vector(d, 0.0)}, eig.vectors, 0};
  for (std::size_t j = 0; j < d; ++j) {
    const double lam = eig.values[j];
    f.spectrum.sigmas[j] = lam > floor ? std::sqrt(lam) : 0.0;
  }
  const double sigma1 = f.spectrum.sigmas[0];
  for (std::size_t j = 0; j < d; ++j) {
    if (sigma1 > 0 && f.spectrum.sigmas[j] > kRankTol * sigma1) ++f.rank;
  }
  Vector vj(d);
  for (std::size_t j = 0; j < f.rank; ++j) {
    for (std::size_t k = 0; k < d; ++k) vj[k] = f.v(k, j);
    const double sj = f.spectrum.sigmas[j];
    for (std::size_t i = 0; i < n; ++i) f.u(i, j) = dot(a.row(i), vj) / sj;
  }
  return f;
}

double sin_sq(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ContractViolation("sin_sq: size mismatch");
  require_unit(u, "u");
  require_unit(v, "v");
  const double c = dot(u, v);
  double s;
  if (c * c < 0.5) {
    s = 1.0 - c * c;
  } else {
    // Near-parallel vectors: 1 - c^2 cancels catastrophically, so measure
    // the orthogonal residual in both directions instead.
    double ru = 0.0;
    double rv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double a = u[i] - c * v[i];
      const double b = v[i] - c * u[i];
      ru += a * a;
      rv += b * b;
    }
    s = 0.5 * (ru + rv);
  }
  return std::clamp(s, 0.0, 1.0);
}

double rayleigh_ratio(const DenseMatrix& a, std::span<const double> x) {
  const double nx = norm2(x);
  if (!(nx > 0.0)) throw ContractViolation("rayleigh_ratio: zero vector");
  return norm2(gram_vec(a, x)) / nx;
}

CoherenceStats spectrum_stats(const SvdFactors& f) {
  if (f.rank == 0) throw RankError("spectrum_stats: matrix has rank 0");
  const std::size_t n = f.u.rows();
  const std::size_t d = f.v.rows();
  CoherenceStats st;
  st.rank = f.rank;
  for (std::size_t i = 0; i < n; ++i) {
    st.upsilon = std::max(st.upsilon, std::abs(f.u(i, 0)));
    for (std::size_t j = 0; j < f.rank; ++j) {
      st.u_inf = std::max(st.u_inf, std::abs(f.u(i, j)));
    }
  }
  for (double x : f.v.data()) st.v_inf = std::max(st.v_inf, std::abs(x));
  st.mu = std::max(static_cast<double>(n) * st.u_inf * st.u_inf,
                   static_cast<double>(d) * st.v_inf * st.v_inf);
  st.sigma1 = f.spectrum.sigmas[0];
  st.sigma2 = f.rank >= 2 ? f.spectrum.sigmas[1] : 0.0;
  const double s1 = st.sigma1 * st.sigma1;
  st.kappa = std::clamp((s1 - st.sigma2 * st.sigma2) / s1, 0.0, 1.0);
  return st;
}

CoherenceStats spectrum_stats(const DenseMatrix& a) {
  return spectrum_stats(compact_svd(a));
}

DenseMatrix scale_rows(const DenseMatrix& a, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw ContractViolation("scale_rows: factor must be positive and finite");
  }
  std::vector<double> data(a.data().begin(), a.data().end());
  for (double& x : data) x *= factor;
  return DenseMatrix(a.rows(), a.cols(), std::move(data));
}

}  // namespace dppca
