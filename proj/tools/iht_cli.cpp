// iht: sparse one-layer IRIS classifiers trained with iterative hard thresholding.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "iht/data.hpp"
#include "iht/errors.hpp"
#include "iht/experiments.hpp"
#include "iht/format.hpp"
#include "iht/plot.hpp"
#include "iht/rss.hpp"
#include "iht/stability.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string iris;
  std::uint64_t seed_data = 42;
  std::uint64_t seed_init = 21;
  std::uint64_t seed_support = 84;
  std::size_t sparsity = 7;
  std::vector<std::size_t> sweep_sparsities;
  std::size_t runs = 50;
  std::size_t max_steps = 2'000;
  double loss_stop = 0.05;
  std::size_t n_monte = iht::kDefaultMonteCarloTrials;
  std::string out_dir = "iht_out";
  std::uint64_t master_seed = 0;
  bool pair_data_seeds = false;
  bool no_dense = false;
  std::size_t threads = 1;
  std::string records;
  std::string record;
  std::optional<double> dense_loss;
  double eps = 0.02;
};

void add_iris(CLI::App* cmd, Flags& f) {
  cmd->add_option("--iris", f.iris, "IRIS CSV (4 numeric columns + class); built-in copy when omitted");
}

void add_out_dir(CLI::App* cmd, Flags& f) {
  cmd->add_option("--out-dir", f.out_dir, "Directory for all output files")
      ->envname("IHT_OUT_DIR")
      ->capture_default_str();
}

void add_protocol(CLI::App* cmd, Flags& f) {
  cmd->add_option("--max-steps", f.max_steps, "Iteration cap per run")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--loss-stop", f.loss_stop, "Stop once the training loss is at or below this value")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--n-monte", f.n_monte, "Monte Carlo trials for the L2s estimate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_seeds(CLI::App* cmd, Flags& f, bool with_support) {
  cmd->add_option("--seed-data", f.seed_data, "Data seed (train/test split)")->capture_default_str();
  cmd->add_option("--seed-init", f.seed_init, "Initialisation seed (parameter values, Monte Carlo streams)")
      ->capture_default_str();
  if (with_support) {
    cmd->add_option("--seed-support", f.seed_support, "Support seed (initial nonzero coordinates)")
        ->capture_default_str();
  }
}

iht::ProtocolParams protocol_of(const Flags& f) {
  iht::ProtocolParams p;
  p.max_steps = f.max_steps;
  p.loss_stop = f.loss_stop;
  p.n_monte = f.n_monte;
  return p;
}

iht::Dataset load_dataset(const Flags& f) { return f.iris.empty() ? iht::load_iris() : iht::load_iris(f.iris); }

fs::path prepare_out_dir(const Flags& f) {
  const fs::path dir(f.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw RuntimeFailure("cannot create output directory '" + f.out_dir + "'");
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw RuntimeFailure("write failed for '" + path.string() + "'");
}

std::string real_or_nan(double x) { return std::isnan(x) ? "nan" : iht::format_real(x); }

void print_record(std::ostream& out, const iht::ExperimentRecord& r) {
  out << "kind: " << iht::to_string(r.kind) << '\n'
      << "status: " << (r.ok ? "ok" : "failed") << '\n'
      << "s: " << r.s << '\n'
      << "data_seed: " << r.seeds.data << '\n'
      << "init_seed: " << r.seeds.init << '\n';
  if (r.kind == iht::RunKind::kSparse) out << "support_seed: " << r.seeds.support << '\n';
  out << "l_hat: " << real_or_nan(r.l_hat) << '\n' << "gamma: " << real_or_nan(r.gamma) << '\n';
  if (!r.ok) {
    out << "error: " << r.error << '\n';
    return;
  }
  out << "stop_reason: " << iht::to_string(r.stop) << '\n'
      << "steps: " << r.steps << '\n'
      << "train_loss: " << iht::format_real(r.train_loss) << '\n'
      << "test_loss: " << iht::format_real(r.test_loss) << '\n'
      << "train_acc: " << iht::format_real(r.train_acc) << '\n'
      << "test_acc: " << iht::format_real(r.test_acc) << '\n'
      << "final_support: " << r.final_support.to_string() << '\n';
  if (r.has_stability) {
    out << "min_abs_support: " << iht::format_real(r.stability.min_abs_on_support) << '\n'
        << "max_grad_off: " << iht::format_real(r.stability.max_grad_off_support) << '\n'
        << "stable: " << (r.stability.is_stable ? "true" : "false") << '\n'
        << "margin: " << iht::format_real(r.stability.margin) << '\n';
  }
}

std::string params_csv(const iht::Vector& initial, const iht::ExperimentRecord& r) {
  const iht::OneLayerClassifier model;
  const auto names = model.param_names();
  std::ostringstream csv;
  csv << "parameter,index,initial,theta,gradient\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    csv << names[i] << ',' << i << ',' << iht::format_real(initial[i]) << ','
        << (r.ok ? iht::format_real(r.final_theta[i]) : "nan") << ','
        << (r.ok ? iht::format_real(r.final_gradient[i]) : "nan") << '\n';
  }
  return csv.str();
}

std::string records_text(const std::vector<iht::ExperimentRecord>& records) {
  std::ostringstream out;
  iht::write_records_csv(out, records);
  return out.str();
}

std::string trace_text(const iht::Trace& trace) {
  std::ostringstream out;
  iht::write_trace_csv(out, trace);
  return out.str();
}

int cmd_train_sparse(const Flags& f) {
  const iht::Dataset iris = load_dataset(f);
  const fs::path dir = prepare_out_dir(f);
  const iht::SeedTriple seeds{f.seed_data, f.seed_init, f.seed_support};
  const iht::SparseRun run = iht::run_sparse_experiment_traced(iris, seeds, f.sparsity, protocol_of(f));

  const std::string tag = "sparse_s" + std::to_string(f.sparsity) + "_d" + std::to_string(f.seed_data) + "_i" +
                          std::to_string(f.seed_init) + "_p" + std::to_string(f.seed_support);
  write_file(dir / (tag + "_record.csv"), records_text({run.record}));
  write_file(dir / (tag + "_params.csv"), params_csv(run.initial.dense, run.record));
  if (run.record.ok) write_file(dir / (tag + "_trace.csv"), trace_text(run.trace));
  print_record(std::cout, run.record);
  if (!run.record.ok) {
    std::cerr << "iht: run failed: " << run.record.error << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_train_dense(const Flags& f) {
  const iht::Dataset iris = load_dataset(f);
  const fs::path dir = prepare_out_dir(f);
  const iht::DenseRun run = iht::run_dense_baseline_traced(iris, f.seed_data, f.seed_init, protocol_of(f));

  const std::string tag = "dense_d" + std::to_string(f.seed_data) + "_i" + std::to_string(f.seed_init);
  write_file(dir / (tag + "_record.csv"), records_text({run.record}));
  write_file(dir / (tag + "_params.csv"), params_csv(run.initial, run.record));
  if (run.record.ok) write_file(dir / (tag + "_trace.csv"), trace_text(run.trace));
  print_record(std::cout, run.record);
  if (!run.record.ok) {
    std::cerr << "iht: run failed: " << run.record.error << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_estimate(const Flags& f) {
  const iht::Dataset iris = load_dataset(f);
  const fs::path dir = prepare_out_dir(f);
  const iht::SplitData data = iht::split_and_standardize(iris, f.seed_data);
  const iht::ClassifierObjective objective(iht::OneLayerClassifier{}, data.train.batch());
  const iht::RssEstimate est = iht::estimate_l2s(objective, f.sparsity, f.n_monte, f.seed_init);

  std::ostringstream csv;
  csv << "trial,ratio\n";
  for (std::size_t j = 0; j < est.trial_ratios.size(); ++j)
    csv << j << ',' << iht::format_real(est.trial_ratios[j]) << '\n';
  write_file(dir / ("l2s_s" + std::to_string(f.sparsity) + "_d" + std::to_string(f.seed_data) + "_i" +
                    std::to_string(f.seed_init) + "_trials.csv"),
             csv.str());

  std::cout << "s: " << est.s << '\n'
            << "n_monte: " << est.n_monte << '\n'
            << "redraws: " << est.redraws << '\n'
            << "l_hat: " << iht::format_real(est.l_hat) << '\n';
  if (est.degenerate()) {
    std::cerr << "iht: degenerate estimate (all sampled ratios are zero)\n";
    return kExitFailure;
  }
  std::cout << "gamma: " << iht::format_real(iht::derive_learning_rate(est)) << '\n';
  return kExitOk;
}

int cmd_sweep(const Flags& f) {
  const iht::Dataset iris = load_dataset(f);
  const fs::path dir = prepare_out_dir(f);
  iht::SweepConfig cfg;
  cfg.sparsities = f.sweep_sparsities;
  cfg.runs = f.runs;
  cfg.master_seed = f.master_seed;
  cfg.include_dense = !f.no_dense;
  cfg.pair_data_seeds = f.pair_data_seeds;
  cfg.protocol = protocol_of(f);
  cfg.threads = f.threads;

  const auto records = iht::run_sweep(iris, cfg);
  const auto groups = iht::aggregate(records);
  write_file(dir / "records.csv", records_text(records));
  std::ostringstream summary;
  iht::write_summary_csv(summary, groups);
  write_file(dir / "summary.csv", summary.str());

  std::cout << "kind    s  runs failed loss_stop stable  median_gamma median_train median_test median_test_acc\n";
  for (const auto& g : groups) {
    std::cout << std::left << std::setw(7) << iht::to_string(g.kind) << std::right << std::setw(3) << g.s
              << std::setw(6) << g.runs << std::setw(7) << g.failed << std::setw(10) << g.loss_stop << std::setw(7)
              << (g.kind == iht::RunKind::kSparse ? std::to_string(g.stable) : "-") << "  " << std::setw(12)
              << real_or_nan(g.metrics.at("gamma").median) << ' ' << std::setw(12)
              << real_or_nan(g.metrics.at("train_loss").median) << ' ' << std::setw(11)
              << real_or_nan(g.metrics.at("test_loss").median) << ' ' << std::setw(15)
              << real_or_nan(g.metrics.at("test_acc").median) << '\n';
  }
  std::cout << "wrote " << (dir / "records.csv").string() << " and " << (dir / "summary.csv").string() << '\n';
  return kExitOk;
}

std::vector<iht::ExperimentRecord> read_records_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeFailure("cannot read '" + path.string() + "'");
  return iht::read_records_csv(in);
}

// The record matching the seed/sparsity flags that were given explicitly, or
// the first record when none were.
const iht::ExperimentRecord* select_record(const std::vector<iht::ExperimentRecord>& records, const Flags& f,
                                           const CLI::App& cmd) {
  const bool by_s = cmd.count("--sparsity") > 0;
  const bool by_data = cmd.count("--seed-data") > 0;
  const bool by_init = cmd.count("--seed-init") > 0;
  const bool by_support = cmd.count("--seed-support") > 0;
  for (const auto& r : records) {
    if (r.kind != iht::RunKind::kSparse || !r.ok) continue;
    if (by_s && r.s != f.sparsity) continue;
    if (by_data && r.seeds.data != f.seed_data) continue;
    if (by_init && r.seeds.init != f.seed_init) continue;
    if (by_support && r.seeds.support != f.seed_support) continue;
    return &r;
  }
  return nullptr;
}

int cmd_plot(const Flags& f, const CLI::App& cmd) {
  const fs::path dir(f.out_dir);
  const fs::path source = f.records.empty() ? dir / "records.csv" : fs::path(f.records);
  if (!fs::exists(source)) throw RuntimeFailure("records file '" + source.string() + "' not found");
  const auto records = read_records_file(source);
  const iht::ExperimentRecord* showcase = select_record(records, f, cmd);
  if (!showcase) throw RuntimeFailure("no successful sparse record in '" + source.string() + "' to plot");
  prepare_out_dir(f);
  for (const auto& path : iht::write_figures(records, *showcase, dir / "plots")) std::cout << path.string() << '\n';
  return kExitOk;
}

int cmd_certify(const Flags& f, const CLI::App& cmd) {
  if (f.record.empty()) throw RuntimeFailure("certify needs --record <file>");
  if (!fs::exists(f.record)) throw RuntimeFailure("record file '" + f.record + "' not found");
  const auto records = read_records_file(f.record);
  const iht::ExperimentRecord* rec = select_record(records, f, cmd);
  if (!rec) throw RuntimeFailure("no successful sparse record in '" + f.record + "'");

  const iht::Dataset iris = load_dataset(f);
  const iht::SplitData data = iht::split_and_standardize(iris, rec->seeds.data);
  const iht::ClassifierObjective objective(iht::OneLayerClassifier{}, data.train.batch());
  if (rec->final_theta.size() != objective.dim()) throw RuntimeFailure("record has no final parameter vector");
  const iht::ValueGrad vg = objective.value_grad(rec->final_theta);
  const iht::StabilityReport report = iht::check_ht_stable(rec->final_theta, vg.gradient, rec->gamma);

  double dense_loss = 0.0;
  std::string dense_source;
  if (f.dense_loss) {
    dense_loss = *f.dense_loss;
    dense_source = "--dense-loss";
  } else {
    std::vector<double> dense;
    for (const auto& r : records)
      if (r.kind == iht::RunKind::kDense && r.ok) dense.push_back(r.train_loss);
    if (!dense.empty()) {
      dense_loss = iht::summarize(dense).median;
      dense_source = "median of " + std::to_string(dense.size()) + " dense records";
    } else {
      const auto baseline = iht::run_dense_baseline(iris, rec->seeds.data, rec->seeds.init, protocol_of(f));
      if (!baseline.ok) throw RuntimeFailure("dense reference run failed: " + baseline.error);
      dense_loss = baseline.train_loss;
      dense_source = "dense baseline (data " + std::to_string(rec->seeds.data) + ", init " +
                     std::to_string(rec->seeds.init) + ")";
    }
  }
  const bool eps_ok = iht::check_eps_optimality(dense_loss, vg.value, f.eps);

  std::cout << "s: " << rec->s << '\n'
            << "seeds: data " << rec->seeds.data << ", init " << rec->seeds.init << ", support "
            << rec->seeds.support << '\n'
            << "support: " << iht::Support::of(rec->final_theta).to_string() << '\n'
            << "gamma: " << iht::format_real(report.gamma) << '\n'
            << "min_abs_support: " << iht::format_real(report.min_abs_on_support) << '\n'
            << "max_grad_off: " << iht::format_real(report.max_grad_off_support) << '\n'
            << "margin: " << iht::format_real(report.margin) << '\n'
            << "ht_stable: " << (report.is_stable ? "true" : "false") << '\n'
            << "train_loss: " << iht::format_real(vg.value) << '\n'
            << "dense_loss: " << iht::format_real(dense_loss) << " (" << dense_source << ")\n"
            << "eps: " << iht::format_real(f.eps) << '\n'
            << "eps_optimal: " << (eps_ok ? "true" : "false") << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse IRIS classifiers trained with iterative hard thresholding"};
  app.require_subcommand(1);
  Flags f;

  auto* train_sparse = app.add_subcommand("train-sparse", "One IHT run; prints the record, writes trace/params CSV");
  add_iris(train_sparse, f);
  add_seeds(train_sparse, f, true);
  train_sparse->add_option("--sparsity", f.sparsity, "Sparsity level s")
      ->check(CLI::Range(1, 14))
      ->capture_default_str();
  add_protocol(train_sparse, f);
  add_out_dir(train_sparse, f);

  auto* train_dense = app.add_subcommand("train-dense", "One dense gradient-descent baseline run");
  add_iris(train_dense, f);
  add_seeds(train_dense, f, false);
  add_protocol(train_dense, f);
  add_out_dir(train_dense, f);

  auto* estimate = app.add_subcommand("estimate-l2s", "Monte Carlo estimate of L2s on a training split");
  add_iris(estimate, f);
  add_seeds(estimate, f, false);
  estimate->add_option("--sparsity", f.sparsity, "Sparsity level s (15 = unrestricted)")
      ->check(CLI::Range(1, 15))
      ->capture_default_str();
  estimate->add_option("--n-monte", f.n_monte, "Monte Carlo trials")->check(CLI::PositiveNumber)->capture_default_str();
  add_out_dir(estimate, f);

  auto* sweep = app.add_subcommand("sweep", "Seeded runs over sparsity levels plus the dense baseline");
  add_iris(sweep, f);
  sweep->add_option("--sparsity", f.sweep_sparsities, "Sparsity levels to run (default 1..14)")
      ->check(CLI::Range(1, 14));
  sweep->add_option("--runs", f.runs, "Runs per sparsity level (and dense runs)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep->add_option("--seed", f.master_seed, "Master seed the per-run seed triples are drawn from")
      ->capture_default_str();
  sweep->add_flag("--pair-data-seeds", f.pair_data_seeds, "Sparse run r reuses dense run r's data seed");
  sweep->add_flag("--no-dense", f.no_dense, "Skip the dense baseline runs");
  sweep->add_option("--threads", f.threads, "Worker threads (output does not depend on it)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_protocol(sweep, f);
  add_out_dir(sweep, f);

  auto* certify = app.add_subcommand("certify", "HT-stability and eps-optimality of a stored run");
  add_iris(certify, f);
  certify->add_option("--record", f.record, "Record file (records.csv format) holding the run")->required();
  add_seeds(certify, f, true);
  certify->add_option("--sparsity", f.sparsity, "Select the record with this sparsity level")->check(CLI::Range(1, 14));
  certify->add_option("--eps", f.eps, "eps of the eps-optimality check")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  certify->add_option("--dense-loss", f.dense_loss, "Dense reference loss (default: dense records, else a fresh dense run)");
  add_protocol(certify, f);
  add_out_dir(certify, f);

  auto* plot = app.add_subcommand("plot", "SVG figures and per-figure CSV from records.csv");
  plot->add_option("--records", f.records, "Records file (default: <out-dir>/records.csv)");
  add_seeds(plot, f, true);
  plot->add_option("--sparsity", f.sparsity, "Sparsity level of the run shown in the parameter chart")
      ->check(CLI::Range(1, 14));
  add_out_dir(plot, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*train_sparse) return cmd_train_sparse(f);
    if (*train_dense) return cmd_train_dense(f);
    if (*estimate) return cmd_estimate(f);
    if (*sweep) return cmd_sweep(f);
    if (*certify) return cmd_certify(f, *certify);
    if (*plot) return cmd_plot(f, *plot);
  } catch (const std::exception& e) {
    std::cerr << "iht: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
