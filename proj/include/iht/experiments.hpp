#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "iht/data.hpp"
#include "iht/objectives.hpp"
#include "iht/optim.hpp"
#include "iht/rss.hpp"
#include "iht/stability.hpp"
#include "iht/thresholding.hpp"

namespace iht {

inline constexpr std::size_t kIrisParams = kIrisFeatures * kIrisClasses + kIrisClasses;  // 15

struct SeedTriple {
  std::uint64_t data = 0;
  std::uint64_t init = 0;
  std::uint64_t support = 0;  // unused (0) for dense runs

  friend auto operator<=>(const SeedTriple&, const SeedTriple&) = default;
};

struct ProtocolParams {
  std::size_t max_steps = 2'000;  // desk scale; the full protocol uses 10,000
  double loss_stop = 0.05;
  std::size_t n_monte = kDefaultMonteCarloTrials;
  std::size_t trace_every = 1;
};

enum class RunKind { kDense, kSparse };
std::string_view to_string(RunKind kind);

struct ExperimentRecord {
  RunKind kind = RunKind::kSparse;
  SeedTriple seeds;
  std::size_t s = 0;  // kIrisParams for dense runs
  bool ok = true;
  std::string error;  // set when !ok

  double l_hat = 0.0;
  double gamma = 0.0;
  StopReason stop = StopReason::kMaxSteps;
  std::size_t steps = 0;
  double train_loss = 0.0;
  double test_loss = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  bool has_stability = false;  // sparse runs only
  StabilityReport stability;
  Support final_support;
  Vector final_theta;
  Vector final_gradient;  // training-loss gradient at final_theta
  std::array<std::size_t, kIrisClasses> train_class_counts{};

  bool reached_loss_stop() const noexcept { return ok && stop == StopReason::kLossStop; }
};

// Initial point: support of size s drawn uniformly without replacement from
// the support_seed stream; values are standard normal from the init_seed
// stream. Coordinate i always receives the i-th draw of the init stream, so
// the dense initialisation for the same init_seed agrees on the support.
SparseVector sparse_init(std::size_t n, std::size_t s, std::uint64_t init_seed, std::uint64_t support_seed);
Vector dense_init(std::size_t n, std::uint64_t init_seed);

struct SparseRun {
  ExperimentRecord record;
  SparseVector initial;
  Trace trace;  // empty when the run failed
};

struct DenseRun {
  ExperimentRecord record;
  Vector initial;
  Trace trace;
};

// split → sparse_init → estimate_l2s on the training loss → γ = 1/L̂₂ₛ → IHT
// → metrics and HT-stability at the final iterate. Divergence or a degenerate
// estimate yields a record with ok = false instead of an exception.
SparseRun run_sparse_experiment_traced(const Dataset& iris, const SeedTriple& seeds, std::size_t s,
                                       const ProtocolParams& protocol);
ExperimentRecord run_sparse_experiment(const Dataset& iris, const SeedTriple& seeds, std::size_t s,
                                       const ProtocolParams& protocol);

// Dense initialisation, γ from the same estimator with s = n, gradient descent.
DenseRun run_dense_baseline_traced(const Dataset& iris, std::uint64_t data_seed, std::uint64_t init_seed,
                                   const ProtocolParams& protocol);
ExperimentRecord run_dense_baseline(const Dataset& iris, std::uint64_t data_seed, std::uint64_t init_seed,
                                    const ProtocolParams& protocol);

struct SweepConfig {
  std::vector<std::size_t> sparsities;  // empty: 1..14
  std::size_t runs = 50;
  std::uint64_t master_seed = 0;
  bool include_dense = true;
  bool pair_data_seeds = false;  // sparse run r reuses dense run r's data seed
  ProtocolParams protocol;
  std::size_t threads = 1;
};

// Seeds for run r are drawn from a stream keyed by (master_seed, s, r), so
// adding sparsity levels or runs never changes existing rows.
SeedTriple sweep_sparse_seeds(const SweepConfig& cfg, std::size_t s, std::size_t run);
SeedTriple sweep_dense_seeds(const SweepConfig& cfg, std::size_t run);

// All records, sorted by (kind, s, seeds). Independent of `threads`.
std::vector<ExperimentRecord> run_sweep(const Dataset& iris, const SweepConfig& cfg);

void sort_records(std::vector<ExperimentRecord>& records);

struct Stats {
  std::size_t n = 0;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0, mean = 0.0;
};

// Quartiles by linear interpolation between order statistics. NaNs for n = 0.
Stats summarize(std::vector<double> values);

struct SummaryGroup {
  RunKind kind = RunKind::kSparse;
  std::size_t s = 0;
  std::size_t runs = 0;
  std::size_t failed = 0;
  std::size_t loss_stop = 0;
  std::size_t max_steps = 0;
  std::size_t stable = 0;
  double stable_rate = 0.0;  // stable / successful runs
  std::map<std::string, Stats> metrics;  // over successful runs
};

inline const std::vector<std::string> kSummaryMetrics = {"gamma",     "l_hat",    "train_loss", "test_loss",
                                                         "train_acc", "test_acc", "steps"};

// One group per (kind, s), ordered like sort_records. InvalidArgument on empty input.
std::vector<SummaryGroup> aggregate(const std::vector<ExperimentRecord>& records);

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> read_records_csv(std::istream& in);
void write_summary_csv(std::ostream& out, const std::vector<SummaryGroup>& groups);

}  // namespace iht
