#include "iht/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "iht/errors.hpp"
#include "iht/format.hpp"
#include "iht/rng.hpp"

namespace iht {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kDenseSweepTag = 0xde45e;

// Seeds handed out by the sweep stay in 31 bits so they are easy to retype
// on the command line.
std::uint64_t draw_seed(Rng& rng) { return rng.next() >> 33; }

void fail(ExperimentRecord& rec, const std::exception& e) {
  rec.ok = false;
  rec.error = e.what();
  rec.train_loss = rec.test_loss = rec.train_acc = rec.test_acc = kNaN;
  rec.has_stability = false;
}

void fill_metrics(ExperimentRecord& rec, const OneLayerClassifier& model, const SplitData& data,
                  const Trace& trace) {
  rec.stop = trace.stop;
  rec.steps = trace.steps_taken;
  rec.train_loss = trace.final_loss;
  rec.final_theta = trace.final_theta;
  rec.final_gradient = trace.final_gradient;
  rec.final_support = Support::of(trace.final_theta);
  const Batch test = data.test.batch();
  const Batch train = data.train.batch();
  rec.test_loss = model.value_grad(trace.final_theta, test).value;
  rec.train_acc = model.accuracy(trace.final_theta, train);
  rec.test_acc = model.accuracy(trace.final_theta, test);
}

}  // namespace

std::string_view to_string(RunKind kind) { return kind == RunKind::kDense ? "dense" : "sparse"; }

Vector dense_init(std::size_t n, std::uint64_t init_seed) {
  Rng rng(derive_seed(init_seed, {kStreamInit}));
  Vector v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

SparseVector sparse_init(std::size_t n, std::size_t s, std::uint64_t init_seed, std::uint64_t support_seed) {
  if (s < 1 || s >= n) {
    throw InvalidArgument("sparse_init: s=" + std::to_string(s) + " outside [1, " + std::to_string(n - 1) + "]");
  }
  Rng rng(derive_seed(support_seed, {kStreamSupport}));
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < s; ++i) {
    std::swap(pool[i], pool[i + static_cast<std::size_t>(rng.below(n - i))]);
  }
  const Vector values = dense_init(n, init_seed);
  Vector theta(n);
  for (std::size_t k = 0; k < s; ++k) theta[pool[k]] = values[pool[k]];
  // A standard-normal draw of exactly 0 would shrink the support; it has
  // probability zero and from_dense still accepts it (‖θ‖₀ <= s).
  return SparseVector::from_dense(std::move(theta), s);
}

SparseRun run_sparse_experiment_traced(const Dataset& iris, const SeedTriple& seeds, std::size_t s,
                                       const ProtocolParams& protocol) {
  const OneLayerClassifier model;
  SparseRun run;
  ExperimentRecord& rec = run.record;
  rec.kind = RunKind::kSparse;
  rec.seeds = seeds;
  rec.s = s;

  const SplitData data = split_and_standardize(iris, seeds.data);
  rec.train_class_counts = data.train.class_counts();
  const ClassifierObjective train_loss(model, data.train.batch());
  run.initial = sparse_init(model.param_count(), s, seeds.init, seeds.support);

  try {
    const RssEstimate est = estimate_l2s(train_loss, s, protocol.n_monte, seeds.init);
    rec.l_hat = est.l_hat;
    rec.gamma = derive_learning_rate(est);

    IhtConfig cfg;
    cfg.s = s;
    cfg.gamma = rec.gamma;
    cfg.max_steps = protocol.max_steps;
    cfg.loss_stop = protocol.loss_stop;
    cfg.trace_every = protocol.trace_every;
    IhtResult result = iht_run(train_loss, run.initial, cfg);
    fill_metrics(rec, model, data, result.trace);
    rec.stability = check_ht_stable(result.theta, result.trace.final_gradient, rec.gamma);
    rec.has_stability = true;
    run.trace = std::move(result.trace);
  } catch (const DivergenceError& e) {
    fail(rec, e);
  } catch (const DegenerateEstimateError& e) {
    fail(rec, e);
  } catch (const ConvergenceError& e) {
    fail(rec, e);
  }
  return run;
}

ExperimentRecord run_sparse_experiment(const Dataset& iris, const SeedTriple& seeds, std::size_t s,
                                       const ProtocolParams& protocol) {
  ProtocolParams quiet = protocol;
  quiet.trace_every = std::numeric_limits<std::size_t>::max();
  return run_sparse_experiment_traced(iris, seeds, s, quiet).record;
}

DenseRun run_dense_baseline_traced(const Dataset& iris, std::uint64_t data_seed, std::uint64_t init_seed,
                                   const ProtocolParams& protocol) {
  const OneLayerClassifier model;
  DenseRun run;
  ExperimentRecord& rec = run.record;
  rec.kind = RunKind::kDense;
  rec.seeds = SeedTriple{data_seed, init_seed, 0};
  rec.s = model.param_count();

  const SplitData data = split_and_standardize(iris, data_seed);
  rec.train_class_counts = data.train.class_counts();
  const ClassifierObjective train_loss(model, data.train.batch());
  run.initial = dense_init(model.param_count(), init_seed);

  try {
    const RssEstimate est = estimate_l2s(train_loss, model.param_count(), protocol.n_monte, init_seed);
    rec.l_hat = est.l_hat;
    rec.gamma = derive_learning_rate(est);
    GdResult result =
        gd_run(train_loss, run.initial, rec.gamma, protocol.max_steps, protocol.loss_stop, protocol.trace_every);
    fill_metrics(rec, model, data, result.trace);
    run.trace = std::move(result.trace);
  } catch (const DivergenceError& e) {
    fail(rec, e);
  } catch (const DegenerateEstimateError& e) {
    fail(rec, e);
  } catch (const ConvergenceError& e) {
    fail(rec, e);
  }
  return run;
}

ExperimentRecord run_dense_baseline(const Dataset& iris, std::uint64_t data_seed, std::uint64_t init_seed,
                                    const ProtocolParams& protocol) {
  ProtocolParams quiet = protocol;
  quiet.trace_every = std::numeric_limits<std::size_t>::max();
  return run_dense_baseline_traced(iris, data_seed, init_seed, quiet).record;
}

SeedTriple sweep_dense_seeds(const SweepConfig& cfg, std::size_t run) {
  Rng rng(derive_seed(cfg.master_seed, {kStreamSweep, kDenseSweepTag, run}));
  SeedTriple seeds;
  seeds.data = draw_seed(rng);
  seeds.init = draw_seed(rng);
  return seeds;
}

SeedTriple sweep_sparse_seeds(const SweepConfig& cfg, std::size_t s, std::size_t run) {
  Rng rng(derive_seed(cfg.master_seed, {kStreamSweep, s, run}));
  SeedTriple seeds;
  seeds.data = draw_seed(rng);
  seeds.init = draw_seed(rng);
  seeds.support = draw_seed(rng);
  if (cfg.pair_data_seeds) seeds.data = sweep_dense_seeds(cfg, run).data;
  return seeds;
}

void sort_records(std::vector<ExperimentRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.s != b.s) return a.s < b.s;
    return a.seeds < b.seeds;
  });
}

std::vector<ExperimentRecord> run_sweep(const Dataset& iris, const SweepConfig& cfg) {
  if (cfg.runs < 1) throw InvalidArgument("run_sweep: runs must be >= 1");
  std::vector<std::size_t> levels = cfg.sparsities;
  if (levels.empty()) {
    for (std::size_t s = 1; s < kIrisParams; ++s) levels.push_back(s);
  }
  for (std::size_t s : levels) {
    if (s < 1 || s >= kIrisParams) throw InvalidArgument("run_sweep: sparsity " + std::to_string(s) + " outside [1, 14]");
  }

  struct Job {
    bool dense;
    std::size_t s;
    SeedTriple seeds;
  };
  std::vector<Job> jobs;
  if (cfg.include_dense) {
    for (std::size_t r = 0; r < cfg.runs; ++r) jobs.push_back({true, kIrisParams, sweep_dense_seeds(cfg, r)});
  }
  for (std::size_t s : levels)
    for (std::size_t r = 0; r < cfg.runs; ++r) jobs.push_back({false, s, sweep_sparse_seeds(cfg, s, r)});

  std::vector<ExperimentRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      records[i] = job.dense ? run_dense_baseline(iris, job.seeds.data, job.seeds.init, cfg.protocol)
                             : run_sparse_experiment(iris, job.seeds, job.s, cfg.protocol);
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(cfg.threads, jobs.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  sort_records(records);
  return records;
}

Stats summarize(std::vector<double> values) {
  Stats st;
  st.n = values.size();
  if (values.empty()) {
    st.min = st.q1 = st.median = st.q3 = st.max = st.mean = kNaN;
    return st;
  }
  std::sort(values.begin(), values.end());
  const auto quantile = [&values](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  st.min = values.front();
  st.max = values.back();
  st.q1 = quantile(0.25);
  st.median = quantile(0.5);
  st.q3 = quantile(0.75);
  st.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return st;
}

std::vector<SummaryGroup> aggregate(const std::vector<ExperimentRecord>& records) {
  if (records.empty()) throw InvalidArgument("aggregate: no records");
  std::map<std::pair<RunKind, std::size_t>, std::vector<const ExperimentRecord*>> groups;
  for (const auto& rec : records) groups[{rec.kind, rec.s}].push_back(&rec);

  std::vector<SummaryGroup> out;
  for (const auto& [key, members] : groups) {
    SummaryGroup g;
    g.kind = key.first;
    g.s = key.second;
    g.runs = members.size();
    std::map<std::string, std::vector<double>> series;
    for (const ExperimentRecord* rec : members) {
      if (!rec->ok) {
        ++g.failed;
        continue;
      }
      (rec->stop == StopReason::kLossStop ? g.loss_stop : g.max_steps) += 1;
      if (rec->has_stability && rec->stability.is_stable) ++g.stable;
      series["gamma"].push_back(rec->gamma);
      series["l_hat"].push_back(rec->l_hat);
      series["train_loss"].push_back(rec->train_loss);
      series["test_loss"].push_back(rec->test_loss);
      series["train_acc"].push_back(rec->train_acc);
      series["test_acc"].push_back(rec->test_acc);
      series["steps"].push_back(static_cast<double>(rec->steps));
    }
    const std::size_t ok = g.runs - g.failed;
    g.stable_rate = ok ? static_cast<double>(g.stable) / static_cast<double>(ok) : kNaN;
    for (const std::string& name : kSummaryMetrics) g.metrics[name] = summarize(series[name]);
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

const char* const kRecordColumns =
    "kind,status,s,data_seed,init_seed,support_seed,l_hat,gamma,stop_reason,steps,train_loss,test_loss,"
    "train_acc,test_acc,min_abs_support,max_grad_off,stable,margin,support,train_class_counts,theta,gradient,"
    "error";

std::string sanitize(std::string text) {
  for (char& c : text)
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  return text;
}

std::string format_cell(double x) { return std::isnan(x) ? "nan" : format_real(x); }

double parse_cell(const std::string& cell) {
  if (cell == "nan" || cell.empty()) return kNaN;
  return parse_real(cell);
}

std::uint64_t parse_uint(const std::string& cell, std::size_t line) {
  if (cell.empty()) return 0;
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected an unsigned integer, found '" + cell + "'");
  }
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << "# iht records v1; one row per run; floats to 9 significant digits; features standardised with "
         "training-split mean and population std; theta/gradient list all 15 coordinates as w11..w43 then "
         "b1..b3; columns: "
      << kRecordColumns << '\n';
  out << kRecordColumns << '\n';
  for (const auto& r : records) {
    const bool stab = r.ok && r.has_stability;
    out << to_string(r.kind) << ',' << (r.ok ? "ok" : "failed") << ',' << r.s << ',' << r.seeds.data << ','
        << r.seeds.init << ',';
    if (r.kind == RunKind::kSparse) out << r.seeds.support;
    out << ',' << format_cell(r.l_hat) << ',' << format_cell(r.gamma) << ',' << (r.ok ? to_string(r.stop) : "")
        << ',' << (r.ok ? std::to_string(r.steps) : "") << ',' << format_cell(r.train_loss) << ','
        << format_cell(r.test_loss) << ',' << format_cell(r.train_acc) << ',' << format_cell(r.test_acc) << ','
        << (stab ? format_real(r.stability.min_abs_on_support) : "") << ','
        << (stab ? format_real(r.stability.max_grad_off_support) : "") << ','
        << (stab ? (r.stability.is_stable ? "1" : "0") : "") << ',' << (stab ? format_real(r.stability.margin) : "")
        << ',' << r.final_support.to_string() << ',' << r.train_class_counts[0] << ';' << r.train_class_counts[1]
        << ';' << r.train_class_counts[2] << ',' << format_real_list(r.final_theta.values()) << ','
        << format_real_list(r.final_gradient.values()) << ',' << sanitize(r.error) << '\n';
  }
}

std::vector<ExperimentRecord> read_records_csv(std::istream& in) {
  std::vector<ExperimentRecord> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kRecordColumns && line != std::string(kRecordColumns) + '\r') {
        throw ParseError(line_no, "unexpected records header");
      }
      header_seen = true;
      continue;
    }
    const auto c = split_csv_line(line);
    if (c.size() != 23) throw ParseError(line_no, "expected 23 columns, found " + std::to_string(c.size()));
    try {
      ExperimentRecord r;
      if (c[0] == "dense") {
        r.kind = RunKind::kDense;
      } else if (c[0] == "sparse") {
        r.kind = RunKind::kSparse;
      } else {
        throw ParseError(line_no, "unknown kind '" + c[0] + "'");
      }
      r.ok = c[1] == "ok";
      r.s = parse_uint(c[2], line_no);
      r.seeds = {parse_uint(c[3], line_no), parse_uint(c[4], line_no), parse_uint(c[5], line_no)};
      r.l_hat = parse_cell(c[6]);
      r.gamma = parse_cell(c[7]);
      if (r.ok) {
        r.stop = parse_stop_reason(c[8]);
        r.steps = parse_uint(c[9], line_no);
      }
      r.train_loss = parse_cell(c[10]);
      r.test_loss = parse_cell(c[11]);
      r.train_acc = parse_cell(c[12]);
      r.test_acc = parse_cell(c[13]);
      r.has_stability = !c[16].empty();
      if (r.has_stability) {
        r.stability.min_abs_on_support = parse_cell(c[14]);
        r.stability.max_grad_off_support = parse_cell(c[15]);
        r.stability.is_stable = c[16] == "1";
        r.stability.margin = parse_cell(c[17]);
        r.stability.gamma = r.gamma;
      }
      r.final_support = Support::parse(c[18]);
      const auto counts = parse_real_list(c[19]);
      for (std::size_t k = 0; k < std::min<std::size_t>(counts.size(), kIrisClasses); ++k)
        r.train_class_counts[k] = static_cast<std::size_t>(counts[k]);
      r.final_theta = Vector(parse_real_list(c[20]));
      r.final_gradient = Vector(parse_real_list(c[21]));
      r.error = c[22];
      out.push_back(std::move(r));
    } catch (const InvalidArgument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!header_seen) throw ParseError(line_no, "records file has no header");
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryGroup>& groups) {
  out << "# iht summary v1; one row per (kind, s, metric); statistics over successful runs; quartiles by "
         "linear interpolation\n";
  out << "kind,s,metric,n,min,q1,median,q3,max,mean,runs,failed,loss_stop,max_steps,stable,stable_rate\n";
  for (const auto& g : groups) {
    for (const std::string& name : kSummaryMetrics) {
      const Stats& st = g.metrics.at(name);
      out << to_string(g.kind) << ',' << g.s << ',' << name << ',' << st.n << ',' << format_cell(st.min) << ','
          << format_cell(st.q1) << ',' << format_cell(st.median) << ',' << format_cell(st.q3) << ','
          << format_cell(st.max) << ',' << format_cell(st.mean) << ',' << g.runs << ',' << g.failed << ','
          << g.loss_stop << ',' << g.max_steps << ',' << g.stable << ','
          << (g.kind == RunKind::kSparse ? format_cell(g.stable_rate) : "") << '\n';
    }
  }
}

}  // namespace iht
