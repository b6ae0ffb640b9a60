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

#include "dppca/adaptive.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "dppca/errors.h"

namespace dppca {
namespace {

double quality(const DenseMatrix& a, std::span<const double> x) {
  double q = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double p = dot(a.row(i), x);
    q += p * p;
  }
  return q;
}

struct CandidatePlan {
  double kappa_guess;
  int T;
  PrivacyBudget per_iter;
};

SweepResult run_candidates(const DenseMatrix& a, const AdaptiveParams& base,
                           std::vector<CandidatePlan> plans,
                           double selection_epsilon, RngStream& rng) {
  SweepResult out;
  out.selection_epsilon = selection_epsilon;
  std::vector<double> qualities;
  for (std::size_t j = 0; j < plans.size(); ++j) {
    AdaptiveParams p = base;
    p.T = plans[j].T;
    p.per_iter = plans[j].per_iter;
    RngStream stream = rng.derive(j);
    SweepCandidate c{plans[j].kappa_guess, plans[j].T, plans[j].per_iter, 0.0,
                     run_adaptive_power(a, p, stream)};
    c.quality = quality(a, c.run.x_hat);
    qualities.push_back(c.quality);
    out.candidates.push_back(std::move(c));
  }
  out.selected = exp_mech_select(qualities, 1.0, selection_epsilon, rng);
  out.selected_guess = out.candidates[out.selected].kappa_guess;
  out.x_hat = out.candidates[out.selected].run.x_hat;
  return out;
}

}  // namespace

AdaptiveParams AdaptiveParams::FromTotal(const PrivacyBudget& total, int T,
                                         double beta) {
  AdaptiveParams p;
  p.T = T;
  p.per_iter = invert_budget(total, T);
  p.beta = beta;
  return p;
}

SvtConfig AdaptiveParams::svt_config() const {
  SvtConfig cfg;
  cfg.epsilon = per_iter.epsilon();
  cfg.beta = beta;
  cfg.grid_lo_exp = grid_lo_exp;
  cfg.grid_hi_exp = grid_hi_exp;
  cfg.noiseless = noiseless;
  cfg.mode = grid_mode;
  cfg.horizon = T;
  return cfg;
}

void AdaptiveParams::validate() const {
  if (T < 1) throw ContractViolation("adaptive: T must be at least 1");
  svt_config().validate();
}

PrivacyBudget AdaptiveParams::total_budget() const {
  return compose(per_iter, T);
}

AdaptiveResult run_adaptive_power(const DenseMatrix& a,
                                  const AdaptiveParams& params,
                                  RngStream& rng) {
  const Vector x0 = sample_gaussian_vec(a.cols(), 1.0, rng);
  return run_adaptive_power(a, params, x0, rng);
}

AdaptiveResult run_adaptive_power(const DenseMatrix& a,
                                  const AdaptiveParams& params,
                                  std::span<const double> x0, RngStream& rng) {
  params.validate();
  require_unit_rows(a);
  const std::size_t d = a.cols();
  if (x0.size() != d) throw ContractViolation("adaptive: x0 has wrong size");
  if (!(norm2(x0) > 0.0)) throw ContractViolation("adaptive: x0 is zero");

  const SvtConfig svt = params.svt_config();
  AdaptiveResult result;
  IterationTrace& trace = result.trace;
  trace.x0.assign(x0.begin(), x0.end());
  trace.iterations.reserve(params.T);

  Vector x = trace.x0;
  for (int t = 0; t < params.T; ++t) {
    IterationRecord rec;
    const Vector products = row_products(a, x);
    const ThresholdChoice choice =
        threshold_search(products, norm2(x), svt, rng);
    const FilterOutcome filtered =
        apply_filter_precomputed(a, products, choice.theta);
    rec.theta = choice.theta;
    rec.exponent = choice.exponent;
    rec.queries_issued = choice.queries_issued;
    rec.removed_count = filtered.removed_count;
    rec.noise_sigma =
        params.noiseless
            ? 0.0
            : gaussian_sigma(choice.theta, params.per_iter, params.noise_variant);

    Vector noise = params.noiseless ? Vector(d, 0.0)
                                    : sample_gaussian_vec(d, rec.noise_sigma, rng);
    Vector y = mat_vec(filtered.kept_gram, x);
    for (std::size_t j = 0; j < d; ++j) y[j] += noise[j];

    rec.x_norm_pre = norm2(y);
    if (!std::isfinite(rec.x_norm_pre)) {
      throw NumericalError("adaptive: iterate overflowed at iteration " +
                               std::to_string(t) +
                               "; enable normalization",
                           rec.x_norm_pre);
    }
    if (rec.x_norm_pre == 0.0) {
      y = sample_gaussian_vec(d, 1.0, rng);
      rec.restarted = true;
      ++trace.restarts;
    }
    if (params.record_iterates) {
      trace.inputs.push_back(x);
      trace.noise.push_back(noise);
      trace.updates.push_back(y);
    }
    if (params.normalize) {
      const double len = norm2(y);
      for (double& v : y) v /= len;
    }
    rec.x_norm_post = norm2(y);
    x = std::move(y);

    trace.total_removed += rec.removed_count;
    ++trace.iterations_run;
    trace.iterations.push_back(rec);
  }

  const double len = norm2(x);
  result.x_hat = x;
  for (double& v : result.x_hat) v /= len;
  return result;
}

int corollary_iterations(std::size_t n, double beta, double delta,
                         double epsilon, double kappa) {
  if (!(kappa > 0.0)) {
    throw ContractViolation("corollary_iterations: kappa must be positive");
  }
  const double arg = static_cast<double>(n) / (beta * delta * epsilon);
  const double t = std::ceil(std::log(arg) / kappa);
  if (!(t >= 1.0)) return 1;
  if (t > 1e7) throw ParameterError("corollary_iterations: T is too large");
  return static_cast<int>(t);
}

SweepResult run_kappa_sweep(const DenseMatrix& a, const SweepParams& params,
                            RngStream& rng) {
  const int J = params.guesses;
  if (J < 1) throw ContractViolation("kappa sweep needs at least one guess");
  const double run_eps = params.total.epsilon() / (2.0 * J);
  const double run_delta = params.total.delta() / J;
  std::vector<CandidatePlan> plans;
  for (int j = 0; j < J; ++j) {
    const double guess = std::ldexp(1.0, -j);
    int T = 0;
    try {
      T = corollary_iterations(a.rows(), params.base.beta, run_delta, run_eps,
                               guess);
    } catch (const ParameterError& e) {
      throw BudgetError("kappa sweep: guess " + std::to_string(guess) +
                        " needs too many iterations (" + e.what() + ")");
    }
    plans.push_back({guess, T, invert_budget(run_eps, run_delta, T)});
  }
  return run_candidates(
      a, params.base, std::move(plans),
      params.selection_epsilon.value_or(params.total.epsilon() / 2.0), rng);
}

SweepResult run_restarts(const DenseMatrix& a, const SweepParams& params,
                         int T, int restarts, RngStream& rng) {
  if (restarts < 1) throw ContractViolation("restarts must be at least 1");
  const double run_eps = params.total.epsilon() / (2.0 * restarts);
  const double run_delta = params.total.delta() / restarts;
  const PrivacyBudget per_iter = invert_budget(run_eps, run_delta, T);
  std::vector<CandidatePlan> plans(restarts, CandidatePlan{0.0, T, per_iter});
  return run_candidates(
      a, params.base, std::move(plans),
      params.selection_epsilon.value_or(params.total.epsilon() / 2.0), rng);
}

}  // namespace dppca
