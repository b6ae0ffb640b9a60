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

#include "dppca/theory.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dppca/errors.h"

namespace dppca {
namespace {

double checked_log(double arg, const char* what) {
  if (!(arg > 1.0) || !std::isfinite(arg)) {
    throw DomainError(std::string("log argument <= 1 in ") + what);
  }
  return std::log(arg);
}

}  // namespace

KConstants constants_K(long long T, std::size_t n, double beta, double delta) {
  if (T < 2) throw DomainError("constants_K needs T >= 2");
  if (n < 3) throw DomainError("constants_K needs n >= 3");
  const double tn = static_cast<double>(T) * static_cast<double>(n);
  const double l_delta = checked_log(2.0 / delta, "2/delta");
  const double l_tn = checked_log(2.0 * tn / beta, "2Tn/beta");
  const double l_tlogn = checked_log(
      static_cast<double>(T) * std::log(static_cast<double>(n)), "T ln n");
  const double l_beta = checked_log(8.0 / beta, "8/beta");
  KConstants k;
  k.c1 = 8.0 * std::sqrt(l_delta * l_tn);
  k.c2 = 8.0 * (l_tlogn + 2.0 * l_beta);
  k.K = k.c1 + k.c2;
  return k;
}

bool gap_condition(double sigma1, double sigma2, double upsilon,
                   double epsilon, double K) {
  const double s1sq = sigma1 * sigma1;
  const double kappa = (s1sq - sigma2 * sigma2) / s1sq;
  return kappa >= 4.0 * (K * upsilon / (epsilon * sigma1) +
                         K * K / (epsilon * s1sq));
}

Rates solve_rates(double sigma1, double sigma2, double upsilon,
                  double epsilon, double K) {
  if (!(sigma1 > 0 && sigma2 > 0 && upsilon > 0 && epsilon > 0 && K > 0)) {
    throw ContractViolation("solve_rates inputs must be positive");
  }
  if (sigma2 > sigma1) throw ContractViolation("solve_rates needs sigma1 >= sigma2");
  Rates r;
  const double s1sq = sigma1 * sigma1;
  const double s2sq = sigma2 * sigma2;
  r.kappa = (s1sq - s2sq) / s1sq;

  const double q = K / epsilon;
  const double c = q * sigma1 * upsilon;
  const double b = s1sq - c - s2sq - q;
  const double disc = b * b - 4.0 * q * c;
  if (disc >= 0.0 && b > 0.0) {
    // Larger root directly, smaller one from the product of roots so it
    // does not suffer cancellation.
    const double big = b + std::sqrt(disc);
    const double s_hi = big / (2.0 * q);
    const double s_lo = 2.0 * c / big;
    r.s1 = s_hi;
    r.s2 = s_lo;
    r.alpha1 = s2sq + q + q * s_hi;
    r.alpha2 = s2sq + q + q * s_lo;
    r.rate_ratio = *r.alpha1 / *r.alpha2;
  }
  r.condition_ok =
      r.s1.has_value() && gap_condition(sigma1, sigma2, upsilon, epsilon, K);
  return r;
}

ErrorBound bound_B(const CoherenceStats& stats, double epsilon, long long T,
                   double K, std::size_t d, std::size_t n) {
  ErrorBound out;
  const double s1 = stats.sigma1;
  const double kappa = stats.kappa;
  if (!(s1 > 0.0) || !(kappa > 0.0) || !(epsilon > 0.0)) return out;
  const double s1sq = s1 * s1;
  const double dd = static_cast<double>(d);
  const double head =
      std::sqrt(std::min(4.0 * static_cast<double>(n) / s1sq, dd)) /
      (epsilon * s1sq * std::sqrt(kappa));
  const double mid = 1.0 / (epsilon * s1sq * kappa);
  const double tail = std::sqrt(dd) / (epsilon * s1sq);
  out.R = (head + mid + tail) * K * s1 * stats.upsilon;

  if (stats.upsilon > 0.0 &&
      gap_condition(s1, stats.sigma2, stats.upsilon, epsilon, K)) {
    const double decay =
        std::pow(1.0 + kappa / 2.0, -static_cast<double>(T));
    const double geo =
        6000.0 * K * (1.0 + 8.0 * static_cast<double>(T) * dd) * decay;
    const double root = *out.R + geo;
    out.B = root * root;
  }
  return out;
}

GaussianBounds gaussian_bounds(const GaussSpec& spec, std::size_t n,
                               double beta) {
  spec.validate();
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ContractViolation("beta must lie in (0, 1)");
  }
  GaussianBounds g;
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(spec.dim());
  const double trace =
      std::accumulate(spec.sigmabar_sq.begin(), spec.sigmabar_sq.end(), 0.0);
  const double s1sq = spec.sigmabar_sq[0];
  const double kbar = spec.kappabar();

  g.L = row_length_bound(n, beta);
  const double t = std::log(2.0 * nn / beta);
  g.K3 = 2.0 + 2.0 * std::sqrt(t) + 2.0 * t;
  const double r_b = g.K3 * trace;
  const double m = nn * s1sq * trace;
  const double l = std::log(2.0 * dd / beta);
  g.G = std::max(std::sqrt(2.0 * m * l), 6.0 * r_b * l);

  if (kbar > 0.0) {
    const double ratio = g.G / (nn * s1sq * kbar);
    g.wedin_bound = std::min(1.0, ratio * ratio);
  } else {
    g.wedin_bound = 1.0;
  }

  const double k3sq = g.K3 * g.K3;
  g.n_min = std::max(dd, 4.0 * k3sq * dd);
  if (kbar > 0.0) {
    g.n_min = std::max(g.n_min, 16.0 * k3sq * dd / (kbar * kbar));
  } else {
    g.n_min = HUGE_VAL;
  }
  return g;
}

TheoryReport theory_report(const TheoryInputs& in, const GaussSpec* spec) {
  TheoryReport rep;
  rep.constants = constants_K(in.T, in.n, in.beta, in.delta);
  rep.rates = solve_rates(in.sigma1, in.sigma2, in.upsilon, in.epsilon,
                          rep.constants.K);
  CoherenceStats stats;
  stats.sigma1 = in.sigma1;
  stats.sigma2 = in.sigma2;
  stats.upsilon = in.upsilon;
  stats.kappa = rep.rates.kappa;
  rep.bound = bound_B(stats, in.epsilon, in.T, rep.constants.K, in.d, in.n);
  if (spec != nullptr) rep.gaussian = gaussian_bounds(*spec, in.n, in.beta);
  return rep;
}

}  // namespace dppca
