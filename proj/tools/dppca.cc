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

// Command-line front end: data generation, single private runs, budget
// accounting, closed-form bounds and the benchmark grid.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dppca/adaptive.h"
#include "dppca/baselines.h"
#include "dppca/bench.h"
#include "dppca/datagen.h"
#include "dppca/errors.h"
#include "dppca/matcore.h"
#include "dppca/matrix_io.h"
#include "dppca/mech.h"
#include "dppca/theory.h"
#include "json.hpp"

namespace {

using nlohmann::json;
using namespace dppca;

json opt(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << j.dump(2) << '\n';
}

json trace_json(const IterationTrace& t) {
  json iters = json::array();
  for (const IterationRecord& r : t.iterations) {
    iters.push_back({{"theta", r.theta},
                     {"exponent", r.exponent},
                     {"removed_count", r.removed_count},
                     {"queries_issued", r.queries_issued},
                     {"noise_sigma", r.noise_sigma},
                     {"x_norm_pre", r.x_norm_pre},
                     {"x_norm_post", r.x_norm_post},
                     {"restarted", r.restarted}});
  }
  return {{"x0", t.x0},
          {"iterations", iters},
          {"total_removed", t.total_removed},
          {"iterations_run", t.iterations_run},
          {"restarts", t.restarts}};
}

json budget_json(const PrivacyBudget& b) {
  return {{"epsilon", b.epsilon()}, {"delta", b.delta()}};
}

struct GenArgs {
  std::string kind = "gaussian";
  std::size_t n = 1000;
  std::size_t d = 10;
  std::vector<double> spec;
  double sigma1_frac = 0.3;
  double gap = 0.5;
  bool rotate = false;
  bool raw = false;
  double beta = 0.05;
  std::size_t spike_rows = 2;
  std::uint64_t seed = 0;
  std::string out;
  std::string meta;
};

int cmd_gen(const GenArgs& g) {
  RngStream rng(g.seed, 0);
  json meta = {{"kind", g.kind}, {"n", g.n}, {"d", g.d}, {"seed", g.seed}};
  DenseMatrix a(1, 1);
  if (g.kind == "gaussian") {
    GaussSpec spec = g.spec.empty() ? GaussSpec::Uniform(g.d) : GaussSpec{};
    if (!g.spec.empty()) spec.sigmabar_sq = g.spec;
    spec.rotate = g.rotate;
    if (spec.dim() != g.d) throw ParameterError("--spec length must equal --d");
    GaussianInstance inst = gen_gaussian_iid(g.n, spec, rng);
    meta["vbar1"] = inst.vbar1;
    meta["spectrum"] = spec.sigmabar_sq;
    if (g.raw) {
      a = std::move(inst.a);
      meta["L"] = nullptr;
      meta["clip_count"] = 0;
    } else {
      ScaledInstance s = scale_gaussian_rows(inst.a, g.beta);
      a = std::move(s.a);
      meta["L"] = s.L;
      meta["clip_count"] = s.clipped;
    }
  } else if (g.kind == "low-coh") {
    a = gen_low_coherence(g.n, g.d, g.sigma1_frac, g.gap, rng, g.rotate);
    meta["sigma1_frac"] = g.sigma1_frac;
    meta["gap"] = g.gap;
  } else {
    HighCoherenceOptions opts;
    opts.spike_rows = g.spike_rows;
    a = gen_high_coherence(g.n, g.d, rng, opts);
    meta["spike_rows"] = g.spike_rows;
  }
  save_matrix(g.out, a);
  if (!g.meta.empty()) write_json(g.meta, meta);
  return 0;
}

struct RunArgs {
  std::string algo = "adaptive";
  std::string in;
  double eps_total = 1;
  double delta_total = 1e-5;
  int T = 0;  // 0: corollary_iterations with the empirical gap
  double beta = 0.05;
  int sweep = 0;
  int restarts = 0;
  bool noiseless = false;
  bool unnormalized = false;
  bool auto_scale = false;
  bool proof_noise = false;
  int grid_lo = -40;
  int grid_hi = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string trace;
};

int cmd_run(const RunArgs& r) {
  DenseMatrix a = load_matrix(r.in);
  json result = {{"algo", r.algo}, {"input", r.in}, {"seed", r.seed}};
  if (r.auto_scale) {
    ScaledInstance s = scale_gaussian_rows(a, r.beta);
    a = std::move(s.a);
    result["scale_L"] = s.L;
    result["clip_count"] = s.clipped;
  }
  const SvdFactors svd = compact_svd(a);
  const CoherenceStats stats = spectrum_stats(svd);
  const PrivacyBudget total(r.eps_total, r.delta_total);
  const int T = r.T > 0 ? r.T
                        : corollary_iterations(a.rows(), r.beta, r.delta_total,
                                               r.eps_total, stats.kappa);
  RngStream rng(r.seed, 0);

  AdaptiveParams base;
  base.beta = r.beta;
  base.normalize = !r.unnormalized;
  base.noiseless = r.noiseless;
  base.grid_lo_exp = r.grid_lo;
  base.grid_hi_exp = r.grid_hi;
  base.noise_variant =
      r.proof_noise ? NoiseVariant::kProof : NoiseVariant::kAlgLine9;
  BaselineOptions bopts;
  bopts.noiseless = r.noiseless;
  bopts.noise_variant = base.noise_variant;

  Vector x_hat;
  json accounting = {{"total", budget_json(total)}};
  json trace;
  if (r.algo == "adaptive" && (r.sweep > 0 || r.restarts > 0)) {
    SweepParams sp;
    sp.total = total;
    sp.base = base;
    SweepResult s;
    if (r.sweep > 0) {
      sp.guesses = r.sweep;
      s = run_kappa_sweep(a, sp, rng);
    } else {
      s = run_restarts(a, sp, T, r.restarts, rng);
    }
    x_hat = s.x_hat;
    const SweepCandidate& c = s.candidates[s.selected];
    accounting["selection_epsilon"] = s.selection_epsilon;
    accounting["candidates"] = s.candidates.size();
    accounting["per_iter"] = budget_json(c.per_iter);
    accounting["T"] = c.T;
    result["selected"] = s.selected;
    result["selected_guess"] = s.selected_guess;
    trace = trace_json(c.run.trace);
  } else if (r.algo == "adaptive") {
    AdaptiveParams p = base;
    const AdaptiveParams derived = AdaptiveParams::FromTotal(total, T, r.beta);
    p.T = derived.T;
    p.per_iter = derived.per_iter;
    AdaptiveResult res = run_adaptive_power(a, p, rng);
    x_hat = res.x_hat;
    accounting["per_iter"] = budget_json(p.per_iter);
    accounting["composed"] = budget_json(p.total_budget());
    accounting["T"] = T;
    trace = trace_json(res.trace);
  } else if (r.algo == "analyze-gauss") {
    BaselineResult res = analyze_gauss(a, total, rng, bopts);
    x_hat = res.x_hat;
    trace = {{"noise_sigmas", res.noise_sigmas}};
  } else if (r.algo == "naive-power") {
    const PrivacyBudget per_iter = invert_budget(total, T);
    BaselineResult res = noisy_power_naive(a, T, per_iter, rng, bopts);
    x_hat = res.x_hat;
    accounting["per_iter"] = budget_json(per_iter);
    accounting["T"] = T;
    trace = {{"noise_sigmas", res.noise_sigmas}};
  } else {
    throw ParameterError("unknown --algo " + r.algo);
  }

  const Vector v1 = svd.v.column(0);
  result["x_hat"] = x_hat;
  result["sin2_vs_v1"] = sin_sq(x_hat, v1);
  result["rayleigh_ratio"] = rayleigh_ratio(a, x_hat);
  result["sigma1_sq"] = stats.sigma1 * stats.sigma1;
  result["kappa"] = stats.kappa;
  result["upsilon"] = stats.upsilon;
  result["accounting"] = accounting;
  if (!r.out.empty()) {
    write_json(r.out, result);
  } else {
    std::cout << result.dump(2) << '\n';
  }
  if (!r.trace.empty()) write_json(r.trace, trace);
  return 0;
}

struct TheoryArgs {
  TheoryInputs in;
  std::vector<double> gauss_spec;
};

int cmd_theory(const TheoryArgs& t) {
  std::optional<GaussSpec> spec;
  if (!t.gauss_spec.empty()) {
    spec.emplace();
    spec->sigmabar_sq = t.gauss_spec;
  }
  const TheoryReport rep = theory_report(t.in, spec ? &*spec : nullptr);
  json j = {{"c1", rep.constants.c1},
            {"c2", rep.constants.c2},
            {"K", rep.constants.K},
            {"s1", opt(rep.rates.s1)},
            {"s2", opt(rep.rates.s2)},
            {"alpha1", opt(rep.rates.alpha1)},
            {"alpha2", opt(rep.rates.alpha2)},
            {"rate_ratio", opt(rep.rates.rate_ratio)},
            {"kappa", rep.rates.kappa},
            {"condition_ok", rep.rates.condition_ok},
            {"R", opt(rep.bound.R)},
            {"B", opt(rep.bound.B)}};
  if (rep.gaussian) {
    j["gaussian"] = {{"L", rep.gaussian->L},
                     {"G", rep.gaussian->G},
                     {"wedin_bound", rep.gaussian->wedin_bound},
                     {"n_min", rep.gaussian->n_min},
                     {"K3", rep.gaussian->K3}};
  } else {
    j["gaussian"] = nullptr;
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

void print_budget(const PrivacyBudget& b) {
  std::printf("epsilon=%.17g delta=%.17g\n", b.epsilon(), b.delta());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Row-level private top-eigenvector estimation"};
  app.require_subcommand(1);

  GenArgs g;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic matrix");
  gen->add_option("--kind", g.kind)
      ->check(CLI::IsMember({"gaussian", "low-coh", "high-coh"}));
  gen->add_option("--n", g.n)->required();
  gen->add_option("--d", g.d)->required();
  gen->add_option("--spec", g.spec, "Gaussian spectrum s1,s2,...")
      ->delimiter(',');
  gen->add_option("--sigma1-frac", g.sigma1_frac);
  gen->add_option("--gap", g.gap);
  gen->add_option("--spike-rows", g.spike_rows);
  gen->add_flag("--rotate", g.rotate);
  gen->add_flag("--raw", g.raw, "Skip the 1/L row scaling of Gaussian data");
  gen->add_option("--beta", g.beta);
  gen->add_option("--seed", g.seed);
  gen->add_option("--out", g.out)->required();
  gen->add_option("--meta", g.meta);

  RunArgs r;
  auto* run = app.add_subcommand("run", "Run one private estimator");
  run->add_option("--algo", r.algo)
      ->check(CLI::IsMember({"adaptive", "analyze-gauss", "naive-power"}));
  run->add_option("--in", r.in)->required();
  run->add_option("--eps-total", r.eps_total);
  run->add_option("--delta-total", r.delta_total);
  run->add_option("--T", r.T, "Iterations; 0 derives them from the gap");
  run->add_option("--beta", r.beta);
  run->add_option("--sweep", r.sweep, "Number of eigengap guesses");
  run->add_option("--restarts", r.restarts);
  run->add_flag("--noiseless", r.noiseless);
  run->add_flag("--unnormalized", r.unnormalized);
  run->add_flag("--auto-scale", r.auto_scale);
  run->add_flag("--proof-noise", r.proof_noise);
  run->add_option("--svt-grid-lo", r.grid_lo);
  run->add_option("--svt-grid-hi", r.grid_hi);
  run->add_option("--seed", r.seed);
  run->add_option("--out", r.out);
  run->add_option("--trace", r.trace);

  auto* acct = app.add_subcommand("accountant", "Privacy composition");
  acct->require_subcommand(1);
  double c_eps = 0, c_delta = 0;
  long long c_T = 1;
  auto* compose_cmd = acct->add_subcommand("compose", "Per-iteration to total");
  compose_cmd->add_option("--eps", c_eps)->required();
  compose_cmd->add_option("--delta", c_delta)->required();
  compose_cmd->add_option("--T", c_T)->required();
  double i_eps = 0, i_delta = 0;
  long long i_T = 1;
  auto* invert_cmd = acct->add_subcommand("invert", "Total to per-iteration");
  invert_cmd->add_option("--eps-total", i_eps)->required();
  invert_cmd->add_option("--delta-total", i_delta)->required();
  invert_cmd->add_option("--T", i_T)->required();

  TheoryArgs t;
  auto* theory = app.add_subcommand("theory", "Closed-form constants and bounds");
  theory->add_option("--n", t.in.n)->required();
  theory->add_option("--d", t.in.d)->required();
  theory->add_option("--T", t.in.T)->required();
  theory->add_option("--eps", t.in.epsilon)->required();
  theory->add_option("--delta", t.in.delta)->required();
  theory->add_option("--beta", t.in.beta);
  theory->add_option("--sigma1", t.in.sigma1)->required();
  theory->add_option("--sigma2", t.in.sigma2)->required();
  theory->add_option("--upsilon", t.in.upsilon)->required();
  theory->add_option("--gauss-spec", t.gauss_spec)->delimiter(',');

  std::string cfg_path, csv_path;
  int threads = 0;
  auto* bench = app.add_subcommand("bench", "Run an experiment grid");
  bench->add_option("--config", cfg_path)->required();
  bench->add_option("--out", csv_path);
  bench->add_option("--threads", threads);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(g);
    if (run->parsed()) return cmd_run(r);
    if (compose_cmd->parsed()) {
      print_budget(compose(PrivacyBudget(c_eps, c_delta), c_T));
      return 0;
    }
    if (invert_cmd->parsed()) {
      print_budget(invert_budget(i_eps, i_delta, i_T));
      return 0;
    }
    if (theory->parsed()) return cmd_theory(t);
    if (bench->parsed()) {
      const ExperimentConfig cfg = ExperimentConfig::FromFile(cfg_path);
      const std::string out = csv_path.empty() ? cfg.output : csv_path;
      if (out.empty()) throw ParameterError("no output path (--out or config)");
      write_csv(out, run_experiment(cfg, threads));
      return 0;
    }
  } catch (const dppca::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
