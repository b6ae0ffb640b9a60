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

#include "dppca/bench.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include "dppca/adaptive.h"
#include "dppca/baselines.h"
#include "dppca/errors.h"
#include "dppca/matcore.h"
#include "dppca/mech.h"
#include "dppca/theory.h"
#include "json.hpp"

namespace dppca {
namespace {

using nlohmann::json;

// Tag for the algorithm stream of a trial; the data stream uses the trial
// index under the generator's key instead.
constexpr std::uint64_t kAlgorithmTag = 0x616c676f;  // "algo"

const std::set<std::string> kGenerators = {"gaussian", "low-coh", "high-coh"};
const std::set<std::string> kAlgorithms = {"adaptive", "adaptive-sweep",
                                           "analyze-gauss", "naive-power"};
const std::set<std::string> kBlockKeys = {
    "generator",   "n",     "d",           "spec",    "sigma1_sq",
    "kappabar",    "rotate", "sigma1_frac", "gap",     "spike_rows",
    "noise_level", "algorithm", "eps_total", "delta_total", "T",
    "sweep_J",     "beta"};
const std::set<std::string> kTopKeys = {"master_seed", "trials", "threads",
                                        "output", "record_wall_time", "grid"};

std::vector<json> axis(const json& block, const char* key, json fallback) {
  if (!block.contains(key)) return {std::move(fallback)};
  const json& v = block.at(key);
  if (v.is_array()) {
    if (v.empty()) {
      throw ParameterError(std::string("empty list for ") + key);
    }
    return std::vector<json>(v.begin(), v.end());
  }
  return {v};
}

template <typename T>
T scalar(const json& block, const char* key, T fallback) {
  if (!block.contains(key)) return fallback;
  return block.at(key).get<T>();
}

std::optional<int> parse_T(const json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "corollary") return std::nullopt;
    throw ParameterError("T must be an integer or \"corollary\"");
  }
  return v.get<int>();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string error_code(const std::exception& e) {
  const char* code = "internal";
  if (dynamic_cast<const BudgetError*>(&e)) code = "budget";
  else if (dynamic_cast<const ParameterError*>(&e)) code = "parameter";
  else if (dynamic_cast<const DomainError*>(&e)) code = "domain";
  else if (dynamic_cast<const NumericalError*>(&e)) code = "numerical";
  else if (dynamic_cast<const RankError*>(&e)) code = "rank";
  else if (dynamic_cast<const ContractViolation*>(&e)) code = "contract";
  else if (dynamic_cast<const SizingError*>(&e)) code = "sizing";
  std::string detail = e.what();
  for (char& c : detail) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  }
  return std::string(code) + ": " + detail;
}

struct TrialData {
  DenseMatrix a{1, 1};
  std::optional<Vector> vbar1;
  std::optional<double> kappabar;
  std::size_t clipped = 0;
};

TrialData generate(const GeneratorSpec& g, double beta, RngStream& rng) {
  TrialData out;
  if (g.kind == "gaussian") {
    const GaussSpec spec = g.gauss_spec();
    GaussianInstance inst = gen_gaussian_iid(g.n, spec, rng);
    ScaledInstance scaled = scale_gaussian_rows(inst.a, beta);
    out.a = std::move(scaled.a);
    out.clipped = scaled.clipped;
    out.vbar1 = std::move(inst.vbar1);
    out.kappabar = spec.kappabar();
  } else if (g.kind == "low-coh") {
    out.a = gen_low_coherence(g.n, g.d, g.sigma1_frac, g.gap, rng, g.rotate);
  } else {
    HighCoherenceOptions opts;
    opts.spike_rows = g.spike_rows;
    opts.noise_level = g.noise_level;
    out.a = gen_high_coherence(g.n, g.d, rng, opts);
  }
  return out;
}

std::optional<double> theory_bound(const CoherenceStats& stats, int T,
                                   const PrivacyBudget& per_iter,
                                   const CellSpec& cell) {
  try {
    const KConstants k = constants_K(T, cell.gen.n, cell.beta, per_iter.delta());
    return bound_B(stats, per_iter.epsilon(), T, k.K, cell.gen.d, cell.gen.n).B;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace

GaussSpec GeneratorSpec::gauss_spec() const {
  if (!spec.empty()) {
    GaussSpec s;
    s.sigmabar_sq = spec;
    s.rotate = rotate;
    s.validate();
    return s;
  }
  return GaussSpec::Spiked(d, sigma1_sq, kappabar, rotate);
}

std::uint64_t GeneratorSpec::data_key() const {
  std::ostringstream os;
  os << kind << '|' << n << '|' << d << '|' << rotate << '|';
  if (kind == "gaussian") {
    for (double v : spec) os << fmt_double(v) << ';';
    os << fmt_double(sigma1_sq) << '|' << fmt_double(kappabar);
  } else if (kind == "low-coh") {
    os << fmt_double(sigma1_frac) << '|' << fmt_double(gap);
  } else {
    os << spike_rows << '|' << fmt_double(noise_level);
  }
  return fnv1a(os.str());
}

ExperimentConfig ExperimentConfig::FromJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("config must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!kTopKeys.count(key)) throw ParameterError("unknown config key " + key);
  }

  ExperimentConfig cfg;
  try {
    cfg.master_seed = scalar<std::uint64_t>(doc, "master_seed", 0);
    cfg.trials = scalar<int>(doc, "trials", 1);
    cfg.threads = scalar<int>(doc, "threads", 0);
    cfg.output = scalar<std::string>(doc, "output", "");
    cfg.record_wall_time = scalar<bool>(doc, "record_wall_time", false);
    if (!doc.contains("grid") || !doc.at("grid").is_array()) {
      throw ParameterError("config needs a \"grid\" list");
    }
    int next_id = 0;
    for (const json& block : doc.at("grid")) {
      if (!block.is_object()) throw ParameterError("grid entries are objects");
      for (const auto& [key, _] : block.items()) {
        if (!kBlockKeys.count(key)) {
          throw ParameterError("unknown grid key " + key);
        }
      }
      GeneratorSpec base;
      base.kind = scalar<std::string>(block, "generator", base.kind);
      base.spec = scalar<Vector>(block, "spec", {});
      base.sigma1_sq = scalar<double>(block, "sigma1_sq", base.sigma1_sq);
      base.kappabar = scalar<double>(block, "kappabar", base.kappabar);
      base.rotate = scalar<bool>(block, "rotate", base.rotate);
      base.sigma1_frac = scalar<double>(block, "sigma1_frac", base.sigma1_frac);
      base.gap = scalar<double>(block, "gap", base.gap);
      base.spike_rows = scalar<std::size_t>(block, "spike_rows", base.spike_rows);
      base.noise_level = scalar<double>(block, "noise_level", base.noise_level);

      for (const json& n : axis(block, "n", base.n))
        for (const json& d : axis(block, "d", base.spec.empty() ? base.d : base.spec.size()))
          for (const json& algo : axis(block, "algorithm", "adaptive"))
            for (const json& eps : axis(block, "eps_total", 1.0))
              for (const json& delta : axis(block, "delta_total", 1e-5))
                for (const json& t : axis(block, "T", "corollary"))
                  for (const json& j : axis(block, "sweep_J", 1))
                    for (const json& beta : axis(block, "beta", 0.05)) {
                      CellSpec cell;
                      cell.id = next_id++;
                      cell.gen = base;
                      cell.gen.n = n.get<std::size_t>();
                      cell.gen.d = d.get<std::size_t>();
                      cell.algorithm = algo.get<std::string>();
                      cell.eps_total = eps.get<double>();
                      cell.delta_total = delta.get<double>();
                      cell.T = parse_T(t);
                      cell.sweep_J = j.get<int>();
                      cell.beta = beta.get<double>();
                      cfg.cells.push_back(std::move(cell));
                    }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad config value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return FromJson(ss.str());
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ParameterError("trials must be >= 1");
  if (threads < 0) throw ParameterError("threads must be >= 0");
  if (cells.empty()) throw ParameterError("grid expands to no cells");
  for (const CellSpec& c : cells) {
    const std::string where = " (cell " + std::to_string(c.id) + ")";
    if (!kGenerators.count(c.gen.kind)) {
      throw ParameterError("unknown generator " + c.gen.kind + where);
    }
    if (!kAlgorithms.count(c.algorithm)) {
      throw ParameterError("unknown algorithm " + c.algorithm + where);
    }
    if (c.gen.d < 1 || c.gen.n < c.gen.d) {
      throw ParameterError("need n >= d >= 1" + where);
    }
    if (c.gen.kind == "gaussian") {
      const GaussSpec spec = c.gen.gauss_spec();
      if (spec.dim() != c.gen.d) throw ParameterError("spec length != d" + where);
    }
    PrivacyBudget(c.eps_total, c.delta_total);  // throws BudgetError
    if (!(c.beta > 0.0 && c.beta < 1.0)) {
      throw ParameterError("beta must lie in (0, 1)" + where);
    }
    if (c.T && *c.T < 1) throw ParameterError("T must be >= 1" + where);
    if (c.sweep_J < 1) throw ParameterError("sweep_J must be >= 1" + where);
  }
}

int resolve_threads(int configured) {
  if (configured > 0) return configured;
  if (const char* env = std::getenv("DPPCA_THREADS")) {
    int v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    auto res = std::from_chars(env, end, v);
    if (res.ec == std::errc() && res.ptr == end && v > 0) return v;
  }
  return 1;
}

ResultRecord run_trial(const ExperimentConfig& cfg, const CellSpec& cell,
                       int trial) {
  ResultRecord rec;
  rec.cell = cell.id;
  rec.trial = trial;
  rec.algo = cell.algorithm;
  rec.n = cell.gen.n;
  rec.d = cell.gen.d;
  rec.eps_total = cell.eps_total;
  rec.delta_total = cell.delta_total;
  rec.gen = cell.gen.kind;

  const std::uint64_t global =
      static_cast<std::uint64_t>(cell.id) * static_cast<std::uint64_t>(cfg.trials) +
      static_cast<std::uint64_t>(trial);
  RngStream algo_rng = RngStream(cfg.master_seed, global).derive(kAlgorithmTag);
  RngStream data_rng =
      RngStream(cfg.master_seed, cell.gen.data_key())
          .derive(static_cast<std::uint64_t>(trial));
  rec.stream_id = algo_rng.stream_id();

  try {
    TrialData data = generate(cell.gen, cell.beta, data_rng);
    rec.clipped = data.clipped;
    const SvdFactors svd = compact_svd(data.a);
    const CoherenceStats stats = spectrum_stats(svd);
    rec.kappa = stats.kappa;
    rec.upsilon = stats.upsilon;
    rec.u_inf = stats.u_inf;
    const Vector v1 = svd.v.column(0);

    const PrivacyBudget total(cell.eps_total, cell.delta_total);
    // Iteration count: the population gap is public for Gaussian data; for
    // the other generators the empirical gap stands in for an oracle value.
    const double gap_for_T = data.kappabar.value_or(stats.kappa);
    auto iterations = [&]() {
      return cell.T ? *cell.T
                    : corollary_iterations(cell.gen.n, cell.beta,
                                           cell.delta_total, cell.eps_total,
                                           gap_for_T);
    };

    const auto t0 = std::chrono::steady_clock::now();
    Vector x_hat;
    if (cell.algorithm == "adaptive") {
      rec.T = iterations();
      AdaptiveParams p = AdaptiveParams::FromTotal(total, rec.T, cell.beta);
      AdaptiveResult r = run_adaptive_power(data.a, p, algo_rng);
      x_hat = std::move(r.x_hat);
      rec.removed = r.trace.total_removed;
      rec.theory_B = theory_bound(stats, rec.T, p.per_iter, cell);
    } else if (cell.algorithm == "adaptive-sweep") {
      SweepParams sp;
      sp.total = total;
      sp.guesses = cell.sweep_J;
      sp.base.beta = cell.beta;
      SweepResult r = run_kappa_sweep(data.a, sp, algo_rng);
      const SweepCandidate& chosen = r.candidates[r.selected];
      rec.T = chosen.T;
      x_hat = std::move(r.x_hat);
      rec.removed = chosen.run.trace.total_removed;
      rec.theory_B = theory_bound(stats, rec.T, chosen.per_iter, cell);
    } else if (cell.algorithm == "analyze-gauss") {
      rec.T = 0;
      x_hat = analyze_gauss(data.a, total, algo_rng).x_hat;
    } else {
      rec.T = iterations();
      const PrivacyBudget per_iter = invert_budget(total, rec.T);
      x_hat = noisy_power_naive(data.a, rec.T, per_iter, algo_rng).x_hat;
    }
    const auto t1 = std::chrono::steady_clock::now();
    if (cfg.record_wall_time) {
      rec.wall_ms =
          std::chrono::duration<double, std::milli>(t1 - t0).count();
    }

    rec.sin2_emp = sin_sq(x_hat, v1);
    if (data.vbar1) rec.sin2_pop = sin_sq(x_hat, *data.vbar1);
    rec.rayleigh = rayleigh_ratio(data.a, x_hat);
  } catch (const std::exception& e) {
    rec.error = error_code(e);
  }
  return rec;
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg,
                                         int threads) {
  cfg.validate();
  const int workers = resolve_threads(threads > 0 ? threads : cfg.threads);
  const std::size_t per_cell = static_cast<std::size_t>(cfg.trials);
  const std::size_t total = cfg.cells.size() * per_cell;
  std::vector<ResultRecord> out(total);
  std::atomic<std::size_t> next{0};

  auto work = [&]() {
    for (std::size_t k = next++; k < total; k = next++) {
      const CellSpec& cell = cfg.cells[k / per_cell];
      out[k] = run_trial(cfg, cell, static_cast<int>(k % per_cell));
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    const std::size_t count = std::min<std::size_t>(workers, total);
    for (std::size_t i = 0; i < count; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ResultRecord& x, const ResultRecord& y) {
                     return std::pair(x.cell, x.trial) <
                            std::pair(y.cell, y.trial);
                   });
  return out;
}

const char* const kCsvHeader =
    "cell,trial,algo,n,d,eps_total,delta_total,T,gen,sin2_emp,sin2_pop,"
    "rayleigh,kappa,upsilon,u_inf,removed,clipped,theory_B,wall_ms,error";

std::string to_csv(const std::vector<ResultRecord>& records) {
  std::string s = kCsvHeader;
  s += '\n';
  auto opt = [&s](const std::optional<double>& v) {
    if (v) s += fmt_double(*v);
    s += ',';
  };
  for (const ResultRecord& r : records) {
    s += std::to_string(r.cell) + ',' + std::to_string(r.trial) + ',' + r.algo +
         ',' + std::to_string(r.n) + ',' + std::to_string(r.d) + ',' +
         fmt_double(r.eps_total) + ',' + fmt_double(r.delta_total) + ',' +
         std::to_string(r.T) + ',' + r.gen + ',';
    opt(r.sin2_emp);
    opt(r.sin2_pop);
    opt(r.rayleigh);
    opt(r.kappa);
    opt(r.upsilon);
    opt(r.u_inf);
    if (r.removed) s += std::to_string(*r.removed);
    s += ',' + std::to_string(r.clipped) + ',';
    opt(r.theory_B);
    opt(r.wall_ms);
    s += r.error;
    s += '\n';
  }
  return s;
}

void write_csv(const std::string& path,
               const std::vector<ResultRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << to_csv(records);
  if (!out) throw FormatError("write failed for " + path);
}

Quantiles quantiles(std::vector<double> values) {
  if (values.empty()) throw ContractViolation("quantiles of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() - 1;
  auto at = [&](double p) {
    return values[static_cast<std::size_t>(std::floor(static_cast<double>(m) * p))];
  };
  Quantiles q;
  q.count = values.size();
  q.median = at(0.5);
  q.q25 = at(0.25);
  q.q75 = at(0.75);
  double sum = 0.0;
  for (double v : values) sum += v;
  q.mean = sum / static_cast<double>(values.size());
  return q;
}

std::vector<CellSummary> summarize(const std::vector<ResultRecord>& records) {
  if (records.empty()) throw ContractViolation("summarize needs records");
  std::map<int, CellSummary> cells;
  std::map<int, std::map<std::string, std::vector<double>>> values;
  for (const ResultRecord& r : records) {
    CellSummary& c = cells[r.cell];
    c.cell = r.cell;
    c.algo = r.algo;
    c.n = r.n;
    c.eps_total = r.eps_total;
    if (!r.error.empty()) {
      ++c.errors;
      continue;
    }
    auto& v = values[r.cell];
    auto put = [&v](const char* name, const std::optional<double>& x) {
      if (x) v[name].push_back(*x);
    };
    put("sin2_emp", r.sin2_emp);
    put("sin2_pop", r.sin2_pop);
    put("rayleigh", r.rayleigh);
    put("theory_B", r.theory_B);
    if (r.removed) v["removed"].push_back(static_cast<double>(*r.removed));
  }
  std::vector<CellSummary> out;
  for (auto& [id, c] : cells) {
    for (auto& [name, xs] : values[id]) c.metrics[name] = quantiles(xs);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace dppca
