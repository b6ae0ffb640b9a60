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

#include "dppca/datagen.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "dppca/errors.h"

namespace dppca {
namespace {

constexpr double kTailFraction = 0.1;

// Column-oriented modified Gram-Schmidt with one reorthogonalization pass.
// The input columns are Gaussian, so they are linearly independent almost
// surely; R's diagonal is positive by construction.
DenseMatrix orthonormal_columns(std::size_t n, std::size_t k, RngStream& rng) {
  std::vector<Vector> cols(k);
  for (auto& c : cols) c = sample_gaussian_vec(n, 1.0, rng);
  for (std::size_t j = 0; j < k; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        const double r = dot(cols[i], cols[j]);
        for (std::size_t t = 0; t < n; ++t) cols[j][t] -= r * cols[i][t];
      }
    }
    const double len = norm2(cols[j]);
    if (!(len > 0.0)) throw NumericalError("orthonormalization failed", len);
    for (double& v : cols[j]) v /= len;
  }
  DenseMatrix q(n, k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) q(i, j) = cols[j][i];
  }
  return q;
}

std::size_t uniform_index(std::size_t bound, RngStream& rng) {
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(rng.next_u64()) * bound;
  return static_cast<std::size_t>(wide >> 64);
}

void clip_row(std::span<double> row) {
  const double len = norm2(row);
  if (len > 1.0) {
    for (double& v : row) v /= len;
  }
}

}  // namespace

GaussSpec GaussSpec::Spiked(std::size_t d, double sigma1_sq, double kappabar,
                            bool rotate) {
  if (d < 2) throw ParameterError("spiked spectrum needs d >= 2");
  GaussSpec spec;
  spec.rotate = rotate;
  spec.sigmabar_sq.assign(d, 0.0);
  spec.sigmabar_sq[0] = sigma1_sq;
  spec.sigmabar_sq[1] = (1.0 - kappabar) * sigma1_sq;
  const double rest = 1.0 - spec.sigmabar_sq[0] - spec.sigmabar_sq[1];
  if (d > 2) {
    for (std::size_t i = 2; i < d; ++i) {
      spec.sigmabar_sq[i] = rest / static_cast<double>(d - 2);
    }
  } else if (std::abs(rest) > 1e-12) {
    throw ParameterError("with d = 2 the two spikes must sum to 1");
  }
  spec.validate();
  return spec;
}

GaussSpec GaussSpec::Uniform(std::size_t d, bool rotate) {
  GaussSpec spec;
  spec.rotate = rotate;
  spec.sigmabar_sq.assign(d, 1.0 / static_cast<double>(d));
  spec.validate();
  return spec;
}

double GaussSpec::kappabar() const {
  const double s1 = sigmabar_sq.at(0);
  const double s2 = sigmabar_sq.size() > 1 ? sigmabar_sq[1] : 0.0;
  return (s1 - s2) / s1;
}

void GaussSpec::validate() const {
  if (sigmabar_sq.empty()) throw ParameterError("empty Gaussian spectrum");
  double sum = 0.0;
  for (std::size_t i = 0; i < sigmabar_sq.size(); ++i) {
    const double s = sigmabar_sq[i];
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw ParameterError("spectrum entries must be nonnegative");
    }
    if (i > 0 && s > sigmabar_sq[i - 1]) {
      throw ParameterError("spectrum must be nonincreasing");
    }
    sum += s;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ParameterError("spectrum must sum to 1, got " + std::to_string(sum));
  }
  if (!(sigmabar_sq[0] > 0.0)) throw ParameterError("spectrum is all zero");
}

DenseMatrix random_orthogonal(std::size_t d, RngStream& rng) {
  return orthonormal_columns(d, d, rng);
}

GaussianInstance gen_gaussian_iid(std::size_t n, const GaussSpec& spec,
                                  RngStream& rng) {
  spec.validate();
  if (n < 1) throw ContractViolation("gen_gaussian_iid: n must be >= 1");
  const std::size_t d = spec.dim();
  DenseMatrix q = spec.rotate ? random_orthogonal(d, rng)
                              : DenseMatrix::Identity(d);
  Vector scale(d);
  for (std::size_t j = 0; j < d; ++j) scale[j] = std::sqrt(spec.sigmabar_sq[j]);

  DenseMatrix a(n, d);
  Vector w(d);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector z = sample_gaussian_vec(d, 1.0, rng);
    for (std::size_t j = 0; j < d; ++j) w[j] = scale[j] * z[j];
    auto row = a.mutable_row(i);
    if (spec.rotate) {
      for (std::size_t r = 0; r < d; ++r) row[r] = dot(q.row(r), w);
    } else {
      std::copy(w.begin(), w.end(), row.begin());
    }
  }
  Vector vbar1 = q.column(0);
  return {std::move(a), std::move(vbar1), std::move(q)};
}

DenseMatrix gen_low_coherence(std::size_t n, std::size_t d, double sigma1_frac,
                              double gap, RngStream& rng, bool rotate) {
  if (n < d) throw ParameterError("gen_low_coherence needs n >= d");
  if (!(sigma1_frac > 0.0 && sigma1_frac < 1.0)) {
    throw ParameterError("sigma1_frac must lie in (0, 1)");
  }
  if (!(gap > 0.0 && gap < 1.0)) throw ParameterError("gap must lie in (0, 1)");

  Vector sq(d);
  sq[0] = sigma1_frac * static_cast<double>(n);
  if (d > 1) sq[1] = (1.0 - gap) * sq[0];
  for (std::size_t j = 2; j < d; ++j) sq[j] = kTailFraction * sq[1];
  const double trace = std::accumulate(sq.begin(), sq.end(), 0.0);
  if (trace > static_cast<double>(n) * (1.0 + 1e-12)) {
    throw ParameterError(
        "planted spectrum has trace " + std::to_string(trace) +
        " > n; no matrix with unit-length rows has it");
  }

  DenseMatrix u(n, d);
  DenseMatrix v = DenseMatrix::Identity(d);
  if (rotate) {
    u = orthonormal_columns(n, d, rng);
    v = random_orthogonal(d, rng);
  } else {
    for (std::size_t j = 0; j < d; ++j) u(j, j) = 1.0;
  }
  // A = U diag(sigma) V^T.
  DenseMatrix a(n, d);
  Vector w(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) w[j] = u(i, j) * std::sqrt(sq[j]);
    auto row = a.mutable_row(i);
    for (std::size_t c = 0; c < d; ++c) row[c] = dot(v.row(c), w);
  }
  const double longest = max_row_norm(a);
  return longest == 1.0 ? a : scale_rows(a, 1.0 / longest);
}

DenseMatrix gen_high_coherence(std::size_t n, std::size_t d, RngStream& rng,
                               const HighCoherenceOptions& opts) {
  if (n < d) throw ParameterError("gen_high_coherence needs n >= d");
  if (opts.spike_rows < 1 || opts.spike_rows > n) {
    throw ParameterError("spike_rows must lie in [1, n]");
  }
  if (!(opts.noise_level >= 0.0)) {
    throw ParameterError("noise_level must be nonnegative");
  }
  // Partial Fisher-Yates picks the spike positions.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<bool> spike(n, false);
  for (std::size_t k = 0; k < opts.spike_rows; ++k) {
    const std::size_t pick = k + uniform_index(n - k, rng);
    std::swap(order[k], order[pick]);
    spike[order[k]] = true;
  }
  const double sigma = opts.noise_level / std::sqrt(static_cast<double>(n));
  DenseMatrix a(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = a.mutable_row(i);
    if (spike[i]) {
      row[0] = 1.0;
      continue;
    }
    if (sigma == 0.0) continue;
    const Vector g = sample_gaussian_vec(d, sigma, rng);
    std::copy(g.begin(), g.end(), row.begin());
    clip_row(row);
  }
  return a;
}

double row_length_bound(std::size_t n, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ContractViolation("beta must lie in (0, 1)");
  }
  const double t = std::log(static_cast<double>(n) / beta);
  return 1.0 + std::sqrt(2.0 * std::max(t, 0.0));
}

ScaledInstance scale_gaussian_rows(const DenseMatrix& a, double beta) {
  ScaledInstance out{scale_rows(a, 1.0 / row_length_bound(a.rows(), beta)),
                     row_length_bound(a.rows(), beta), 0};
  for (std::size_t i = 0; i < out.a.rows(); ++i) {
    auto row = out.a.mutable_row(i);
    if (norm2(row) > 1.0) {
      clip_row(row);
      ++out.clipped;
    }
  }
  return out;
}

}  // namespace dppca
