#pragma once

#include <json.hpp>

#include <optional>
#include <string>

#include "farey/experiments.hpp"
#include "farey/observable.hpp"
#include "farey/partition.hpp"

namespace lab {

using json = nlohmann::json;

/// Reads a JSON file; parse failures become farey::ValidationError.
json load_json(const std::string& path);

/// {"kind": "power"|..., "delta": d, "params": {...}}
farey::TailSequence make_family(const json& spec);

/// {"kind": "indicator"|"constant"|"eta_power"|"counterexample"|"finite", "params": {...}}.
/// Counterexample params may name a preset ("first" or "second") and override any of
/// epsilon, g1, g2, g3; the family's delta is used unless params.delta is given.
farey::CounterexampleParams make_counterexample_params(const json& params, double family_delta);
farey::AtomObservable make_observable(const json& spec, const farey::TailSequence& seq);

/// The observable used when a config names none.
json default_observable(farey::ExperimentKind kind);

/// {"kind": ..., "checkpoints": [...], "eval_atoms": m, "budget": N, "m_max": M,
///  "over_density": bool, "k_min": a, "k_max": b}
farey::ExperimentConfig make_experiment(const json& spec);

/// Throws ValidationError when delta is outside (0,1].
void check_delta(double delta);

}  // namespace lab
