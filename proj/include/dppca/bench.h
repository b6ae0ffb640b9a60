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

#ifndef DPPCA_BENCH_H_
#define DPPCA_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dppca/datagen.h"

namespace dppca {

struct GeneratorSpec {
  std::string kind = "gaussian";  // gaussian | low-coh | high-coh
  std::size_t n = 1000;
  std::size_t d = 20;
  // gaussian: an explicit spectrum wins over the spiked parameters.
  Vector spec;
  double sigma1_sq = 0.5;
  double kappabar = 0.5;
  bool rotate = true;
  // low-coh
  double sigma1_frac = 0.3;
  double gap = 0.5;
  // high-coh
  std::size_t spike_rows = 2;
  double noise_level = 0.5;

  GaussSpec gauss_spec() const;
  // Stable across runs; cells with equal generators share their data.
  std::uint64_t data_key() const;
};

struct CellSpec {
  int id = 0;
  GeneratorSpec gen;
  std::string algorithm = "adaptive";
  double eps_total = 1;
  double delta_total = 1e-5;
  std::optional<int> T;  // nullopt: iteration count from corollary_iterations
  int sweep_J = 1;
  double beta = 0.05;
};

struct ExperimentConfig {
  std::uint64_t master_seed = 0;
  int trials = 1;
  int threads = 0;  // 0: DPPCA_THREADS, then 1
  std::string output;
  // wall_ms is left empty otherwise so output bytes stay reproducible.
  bool record_wall_time = false;
  std::vector<CellSpec> cells;

  // Each "grid" entry is an object whose generator fields are scalars and
  // whose n, d, algorithm, eps_total, delta_total, T, sweep_J and beta may
  // each be a scalar or a list; lists expand to their cartesian product.
  static ExperimentConfig FromJson(const std::string& text);
  static ExperimentConfig FromFile(const std::string& path);
  void validate() const;
};

struct ResultRecord {
  int cell = 0;
  int trial = 0;
  std::uint64_t stream_id = 0;
  std::string algo;
  std::size_t n = 0;
  std::size_t d = 0;
  double eps_total = 0;
  double delta_total = 0;
  int T = 0;
  std::string gen;
  std::optional<double> sin2_emp;
  std::optional<double> sin2_pop;
  std::optional<double> rayleigh;
  std::optional<double> kappa;
  std::optional<double> upsilon;
  std::optional<double> u_inf;
  std::optional<std::size_t> removed;
  std::size_t clipped = 0;
  std::optional<double> theory_B;
  std::optional<double> wall_ms;
  std::string error;  // empty on success, "<code>: <detail>" otherwise
};

// Thread count used when the config leaves it at 0.
int resolve_threads(int configured);

// Runs every (cell, trial) pair. Output is sorted by (cell, trial) and does
// not depend on the number of threads.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg,
                                         int threads = 0);

// One trial in isolation; run_experiment is a parallel loop over this.
ResultRecord run_trial(const ExperimentConfig& cfg, const CellSpec& cell,
                       int trial);

extern const char* const kCsvHeader;
std::string to_csv(const std::vector<ResultRecord>& records);
void write_csv(const std::string& path,
               const std::vector<ResultRecord>& records);

struct Quantiles {
  double median = 0;
  double q25 = 0;
  double q75 = 0;
  double mean = 0;
  std::size_t count = 0;
};

// Order statistic at index floor((count - 1) p) of the sorted values, which
// makes the median of an even count the lower middle value.
Quantiles quantiles(std::vector<double> values);

struct CellSummary {
  int cell = 0;
  std::string algo;
  std::size_t n = 0;
  double eps_total = 0;
  std::size_t errors = 0;
  std::map<std::string, Quantiles> metrics;  // metric name -> quantiles
};

// Per-cell summaries ordered by cell id. Error rows are only counted.
std::vector<CellSummary> summarize(const std::vector<ResultRecord>& records);

}  // namespace dppca

#endif  // DPPCA_BENCH_H_
