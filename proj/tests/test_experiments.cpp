#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "iht/errors.hpp"
#include "iht/experiments.hpp"
#include "iht/format.hpp"

using namespace iht;

namespace {

ProtocolParams quick() {
  ProtocolParams p;
  p.max_steps = 300;
  p.n_monte = 20;
  return p;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("sparse initialisation") {
    for (std::size_t s = 1; s <= 14; ++s) {
      const SparseVector v = sparse_init(15, s, 21, 84);
      CHECK(v.support.size() == s);
      CHECK(std::count(v.dense.begin(), v.dense.end(), 0.0) == static_cast<long>(15 - s));
    }
    const SparseVector a = sparse_init(15, 7, 21, 84);
    CHECK(a.dense == sparse_init(15, 7, 21, 84).dense);
    CHECK(a.support.indices() != sparse_init(15, 7, 21, 85).support.indices());
    const Vector dense = dense_init(15, 21);
    for (std::size_t i : a.support.indices()) CHECK(a.dense[i] == dense[i]);
    CHECK_THROWS_AS(sparse_init(15, 0, 1, 1), InvalidArgument);
    CHECK_THROWS_AS(sparse_init(15, 16, 1, 1), InvalidArgument);
  }

  TEST_CASE("showcase run is reproducible and self-consistent") {
    const Dataset iris = load_iris();
    const SeedTriple seeds{42, 21, 84};
    const SparseRun run = run_sparse_experiment_traced(iris, seeds, 7, quick());
    const ExperimentRecord& r = run.record;
    REQUIRE(r.ok);
    CHECK(r.s == 7);
    CHECK(r.gamma == doctest::Approx(1.0 / r.l_hat));
    CHECK(r.final_support.size() <= 7);
    CHECK(r.train_class_counts[0] + r.train_class_counts[1] + r.train_class_counts[2] == 120);
    CHECK(r.train_acc >= 0.0);
    CHECK(r.train_acc <= 1.0);
    CHECK(r.has_stability);
    CHECK(r.stability.is_stable == check_ht_stable(r.final_theta, r.final_gradient, r.gamma).is_stable);
    CHECK(run.trace.rows.front().loss >= run.trace.final_loss);
    CHECK(r.train_loss == run.trace.final_loss);

    const ExperimentRecord again = run_sparse_experiment(iris, seeds, 7, quick());
    CHECK(again.final_theta == r.final_theta);
    CHECK(again.l_hat == r.l_hat);
    CHECK(again.steps == r.steps);
  }

  TEST_CASE("dense baseline") {
    const ExperimentRecord r = run_dense_baseline(load_iris(), 42, 21, quick());
    REQUIRE(r.ok);
    CHECK(r.kind == RunKind::kDense);
    CHECK(r.s == kIrisParams);
    CHECK_FALSE(r.has_stability);
    CHECK(r.train_loss < std::log(3.0));
  }

  TEST_CASE("sweep seeds are stable under extension") {
    SweepConfig a;
    a.sparsities = {3};
    SweepConfig b = a;
    b.sparsities = {1, 2, 3, 4};
    b.runs = 80;
    CHECK(sweep_sparse_seeds(a, 3, 5) == sweep_sparse_seeds(b, 3, 5));
    CHECK(sweep_sparse_seeds(a, 3, 5) != sweep_sparse_seeds(a, 4, 5));
    CHECK(sweep_dense_seeds(a, 2) == sweep_dense_seeds(b, 2));
    CHECK(sweep_dense_seeds(a, 2).support == 0);
    a.pair_data_seeds = true;
    CHECK(sweep_sparse_seeds(a, 3, 5).data == sweep_dense_seeds(a, 5).data);
  }

  TEST_CASE("summaries") {
    const Stats st = summarize({4, 1, 3, 2});
    CHECK(st.n == 4);
    CHECK(st.min == 1);
    CHECK(st.q1 == doctest::Approx(1.75));
    CHECK(st.median == doctest::Approx(2.5));
    CHECK(st.q3 == doctest::Approx(3.25));
    CHECK(st.max == 4);
    CHECK(st.mean == doctest::Approx(2.5));
    CHECK(std::isnan(summarize({}).median));
  }

  TEST_CASE("aggregate of a single record") {
    ExperimentRecord r;
    r.s = 4;
    r.train_loss = 0.3;
    r.stop = StopReason::kLossStop;
    r.has_stability = true;
    r.stability.is_stable = true;
    const auto groups = aggregate({r});
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].runs == 1);
    CHECK(groups[0].loss_stop == 1);
    CHECK(groups[0].stable_rate == 1.0);
    const Stats& st = groups[0].metrics.at("train_loss");
    CHECK(st.min == 0.3);
    CHECK(st.median == 0.3);
    CHECK(st.max == 0.3);
    CHECK_THROWS_AS(aggregate({}), InvalidArgument);
  }

  TEST_CASE("sweep output is order- and thread-independent; CSV round-trips") {
    const Dataset iris = load_iris();
    SweepConfig cfg;
    cfg.sparsities = {2, 9};
    cfg.runs = 3;
    cfg.protocol = quick();
    auto one = run_sweep(iris, cfg);
    cfg.threads = 3;
    const auto three = run_sweep(iris, cfg);
    CHECK(one.size() == 9);

    std::ostringstream a, b;
    write_records_csv(a, one);
    write_records_csv(b, three);
    CHECK(a.str() == b.str());

    std::mt19937_64 gen(3);
    auto shuffled = one;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    std::ostringstream s1, s2;
    write_summary_csv(s1, aggregate(one));
    write_summary_csv(s2, aggregate(shuffled));
    CHECK(s1.str() == s2.str());
    sort_records(shuffled);
    std::ostringstream c;
    write_records_csv(c, shuffled);
    CHECK(c.str() == a.str());

    std::istringstream in(a.str());
    const auto back = read_records_csv(in);
    std::ostringstream again;
    write_records_csv(again, back);
    CHECK(again.str() == a.str());
    REQUIRE(back.size() == one.size());
    for (std::size_t k = 0; k < back.size(); ++k) {
      CHECK(back[k].seeds == one[k].seeds);
      CHECK(back[k].final_support.indices() == one[k].final_support.indices());
      if (back[k].has_stability)
        CHECK(back[k].stability.is_stable ==
              check_ht_stable(back[k].final_theta, back[k].final_gradient, back[k].gamma).is_stable);
    }
  }

  TEST_CASE("malformed records are rejected") {
    std::istringstream in("# comment\nkind,status\nsparse,ok\n");
    CHECK_THROWS(read_records_csv(in));
  }
}
