#include "doctest.h"

#include <cmath>

#include "farey/experiments.hpp"
#include "farey/measure.hpp"

using farey::AtomObservable;
using farey::ExperimentConfig;
using farey::ExperimentKind;
using farey::Index;
using farey::TailSequence;

TEST_CASE("helpers") {
  CHECK(farey::strictly_decreasing({3.0, 2.0, 1.0}));
  CHECK_FALSE(farey::strictly_decreasing({3.0, 3.0, 1.0}));
  CHECK(farey::strictly_increasing({1.0, 2.0}));
  CHECK(farey::experiment_kind_from_string(farey::to_string(ExperimentKind::Cesaro)) == ExperimentKind::Cesaro);
  CHECK_THROWS(farey::experiment_kind_from_string("nope"));
}

TEST_CASE("first part on the harmonic family") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::DeltaOne;
  cfg.checkpoints = {100, 1000, 10000};
  const auto r = farey::run_experiment(TailSequence::harmonic(), AtomObservable::indicator(3), cfg);
  CHECK(r.target == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(r.verdict);
  const auto s = r.series("A_1");
  REQUIRE(s.size() == 3);
  CHECK(s[0].n == 100);
  for (const auto& rec : s) CHECK(rec.defect == std::fabs(rec.value - rec.target));
  CHECK(r.updates <= r.estimate);

  // delta < 1 is refused.
  CHECK_THROWS(farey::run_experiment(TailSequence::power_law(0.75), AtomObservable::indicator(1), cfg));
}

TEST_CASE("runs are deterministic") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Regular;
  cfg.checkpoints = {100, 1000};
  const auto seq = TailSequence::power_law(0.75);
  const auto v = AtomObservable::eta_power(0.3, 0.75);
  const auto a = farey::run_experiment(seq, v, cfg);
  const auto b = farey::run_experiment(seq, v, cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].value == b.records[i].value);
  const double want = farey::gamma_consts(0.75).gamma_delta * farey::integral_lambda(seq, v).value;
  CHECK(a.target == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("second part reduces to the first at delta one") {
  ExperimentConfig cfg;
  cfg.checkpoints = {100, 1000};
  const auto seq = TailSequence::harmonic();
  cfg.kind = ExperimentKind::Regular;
  const auto r = farey::run_experiment(seq, AtomObservable::indicator(1), cfg);
  CHECK(r.target == doctest::Approx(seq.atom_length(1)).epsilon(1e-15));
}

TEST_CASE("extension spread") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Extension;
  cfg.checkpoints = {1000, 10000};
  cfg.m_max = 20;
  const auto r = farey::run_experiment(TailSequence::power_law(0.75), AtomObservable::indicator(1), cfg);
  const auto spread = r.series("spread");
  REQUIRE(spread.size() == 2);
  CHECK(r.verdict);
  CHECK(std::fabs(spread[1].value / spread[1].target - 1.0) < std::fabs(spread[0].value / spread[0].target - 1.0));
}

TEST_CASE("counterexample refuses small budgets") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Counterexample;
  cfg.budget = 1e6;
  const auto p = farey::CounterexampleParams::first_example(0.6);
  CHECK_THROWS_AS(farey::run_experiment(TailSequence::power_law(0.6), AtomObservable::counterexample(p), cfg),
                  farey::BudgetError);
}
