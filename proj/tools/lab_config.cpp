#include "lab_config.hpp"

#include <fstream>
#include <sstream>

#include "farey/errors.hpp"

namespace lab {

using farey::ValidationError;

namespace {

double number(const json& obj, const char* key, double fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

farey::Index integer(const json& obj, const char* key, farey::Index fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ValidationError(std::string("'") + key + "' must be an integer");
  return v.get<farey::Index>();
}

const json& params_of(const json& spec) {
  static const json empty = json::object();
  if (spec.contains("params")) {
    if (!spec.at("params").is_object()) throw ValidationError("'params' must be an object");
    return spec.at("params");
  }
  return empty;
}

std::string kind_of(const json& spec, const char* what) {
  if (!spec.is_object()) throw ValidationError(std::string(what) + " must be a JSON object");
  if (!spec.contains("kind") || !spec.at("kind").is_string()) {
    throw ValidationError(std::string(what) + " needs a string 'kind'");
  }
  return spec.at("kind").get<std::string>();
}

}  // namespace

json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in (0,1]");
}

farey::TailSequence make_family(const json& spec) {
  const auto kind = farey::family_kind_from_string(kind_of(spec, "family"));
  const auto& p = params_of(spec);
  const bool has_delta = spec.contains("delta");
  const double delta = number(spec, "delta", 1.0);
  check_delta(delta);
  auto unit_delta = [&](const char* name) {
    if (has_delta && delta != 1.0) throw ValidationError(std::string(name) + " family has delta = 1");
  };
  switch (kind) {
    case farey::FamilyKind::PowerLaw:
      if (!has_delta) throw ValidationError("power family needs 'delta'");
      return farey::TailSequence::power_law(delta);
    case farey::FamilyKind::Delta1Harmonic:
      unit_delta("delta1_harmonic");
      return farey::TailSequence::harmonic();
    case farey::FamilyKind::ExpSqrtLog:
      unit_delta("exp_sqrt_log");
      return farey::TailSequence::exp_sqrt_log();
    case farey::FamilyKind::ExpLogOverLogLog:
      unit_delta("exp_log_over_loglog");
      return farey::TailSequence::exp_log_over_loglog();
    case farey::FamilyKind::CustomTable: {
      if (!p.contains("tails") || !p.at("tails").is_array()) {
        throw ValidationError("custom_table needs params.tails (t_1..t_K)");
      }
      return farey::TailSequence::custom_table(p.at("tails").get<std::vector<double>>(),
                                               number(p, "tail_delta", delta));
    }
    case farey::FamilyKind::Ekstrom:
      unit_delta("ekstrom");
      return farey::TailSequence::ekstrom(
          farey::EkstromFunction::power_slopes(number(p, "scale", 1.0), number(p, "power", 1.0)));
  }
  throw ValidationError("unsupported family");
}

farey::CounterexampleParams make_counterexample_params(const json& params, double family_delta) {
  const double delta = number(params, "delta", family_delta);
  const std::string preset = params.contains("preset") ? params.at("preset").get<std::string>() : "first";
  farey::CounterexampleParams p;
  if (preset == "first") {
    std::optional<double> g3;
    if (params.contains("g3")) g3 = number(params, "g3", 0.3);
    p = farey::CounterexampleParams::first_example(delta, number(params, "epsilon", 0.01), g3);
  } else if (preset == "second") {
    p = farey::CounterexampleParams::second_example(delta);
  } else {
    throw ValidationError("counterexample preset must be 'first' or 'second'");
  }
  p.epsilon = number(params, "epsilon", p.epsilon);
  p.g1 = number(params, "g1", p.g1);
  p.g2 = number(params, "g2", p.g2);
  p.g3 = number(params, "g3", p.g3);
  return p;
}

farey::AtomObservable make_observable(const json& spec, const farey::TailSequence& seq) {
  const auto kind = kind_of(spec, "observable");
  const auto& p = params_of(spec);
  if (kind == "indicator") return farey::AtomObservable::indicator(integer(p, "n", 1));
  if (kind == "constant") return farey::AtomObservable::constant(number(p, "value", 1.0));
  if (kind == "eta_power") return farey::AtomObservable::eta_power(number(p, "eta", 0.3), seq.delta());
  if (kind == "counterexample") {
    return farey::AtomObservable::counterexample(make_counterexample_params(p, seq.delta()));
  }
  if (kind == "finite") {
    if (!p.contains("coeffs") || !p.at("coeffs").is_array()) throw ValidationError("finite needs params.coeffs");
    return farey::AtomObservable::finite(p.at("coeffs").get<std::vector<double>>(), number(p, "value_at_one", 0.0));
  }
  throw ValidationError("unknown observable kind '" + kind + "'");
}

json default_observable(farey::ExperimentKind kind) {
  switch (kind) {
    case farey::ExperimentKind::Regular:
      return {{"kind", "eta_power"}, {"params", {{"eta", 0.3}}}};
    case farey::ExperimentKind::Counterexample:
      return {{"kind", "counterexample"}, {"params", {{"preset", "first"}}}};
    default:
      return {{"kind", "indicator"}, {"params", {{"n", 1}}}};
  }
}

farey::ExperimentConfig make_experiment(const json& spec) {
  farey::ExperimentConfig cfg;
  cfg.kind = farey::experiment_kind_from_string(kind_of(spec, "experiment"));
  if (spec.contains("checkpoints")) {
    if (!spec.at("checkpoints").is_array()) throw ValidationError("'checkpoints' must be an array");
    cfg.checkpoints = spec.at("checkpoints").get<std::vector<farey::Index>>();
  }
  cfg.eval_atoms = integer(spec, "eval_atoms", cfg.eval_atoms);
  cfg.m_max = integer(spec, "m_max", cfg.m_max);
  cfg.k_min = integer(spec, "k_min", cfg.k_min);
  cfg.k_max = integer(spec, "k_max", cfg.k_max);
  cfg.budget = number(spec, "budget", cfg.budget);
  if (spec.contains("over_density")) cfg.over_density = spec.at("over_density").get<bool>();
  if (cfg.eval_atoms < 1) throw ValidationError("eval_atoms must be >= 1");
  if (!(cfg.budget > 0.0)) throw ValidationError("budget must be positive");
  return cfg;
}

}  // namespace lab
