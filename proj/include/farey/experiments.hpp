#pragma once

#include <string>
#include <vector>

#include "farey/observable.hpp"
#include "farey/partition.hpp"
#include "farey/transfer.hpp"

namespace farey {

struct ExperimentRecord {
  Index n = 0;
  std::string label;
  double value = 0.0;
  double target = 0.0;
  double defect = 0.0;  // |value - target|
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentReport {
  std::string kind;
  std::vector<ExperimentRecord> records;
  std::vector<Check> checks;
  bool verdict = false;
  double target = 0.0;
  double updates = 0.0;   // coefficient updates actually performed
  double estimate = 0.0;  // the a-priori estimate checked against the budget

  /// Records with the given label, in run order.
  std::vector<ExperimentRecord> series(const std::string& label) const;
  const Check* check(const std::string& name) const;
};

enum class ExperimentKind { DeltaOne, Regular, Counterexample, Extension, Cesaro };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::DeltaOne;
  std::vector<Index> checkpoints{100, 1000, 10000};
  Index eval_atoms = 8;
  /// Compact set [t_{m_max+1}, 1) for the extension experiment.
  Index m_max = 20;
  double budget = kDefaultBudget;
  /// Iterate v / h_alpha instead of v (extension and Cesaro runs).
  bool over_density = false;
  /// Peak range for the counterexample run.
  Index k_min = 3;
  Index k_max = 6;
};

ExperimentReport exp_delta_one(const TailSequence& seq, const AtomObservable& v, const ExperimentConfig& cfg);
ExperimentReport exp_regular(const TailSequence& seq, const AtomObservable& v, const ExperimentConfig& cfg);
ExperimentReport exp_counterexample(const TailSequence& seq, const AtomObservable& v, const ExperimentConfig& cfg);
ExperimentReport exp_extension(const TailSequence& seq, const AtomObservable& v, const ExperimentConfig& cfg);
ExperimentReport exp_cesaro(const TailSequence& seq, const AtomObservable& v, const ExperimentConfig& cfg);

ExperimentReport run_experiment(const TailSequence& seq, const AtomObservable& v, const ExperimentConfig& cfg);

/// True when every entry is strictly smaller than the one before.
bool strictly_decreasing(const std::vector<double>& xs);
bool strictly_increasing(const std::vector<double>& xs);

}  // namespace farey
