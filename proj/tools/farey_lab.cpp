// farey-lab: command-line front end for the farey library.
//
// Exit codes: 0 ok, 1 runtime error or failed verdict, 2 usage or validation
// error, 3 budget refusal.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "farey/experiments.hpp"
#include "farey/map.hpp"
#include "farey/measure.hpp"
#include "farey/transfer.hpp"
#include "farey/varying.hpp"
#include "lab_config.hpp"
#include "lab_output.hpp"

namespace {

using farey::Index;
using lab::Cell;
using lab::json;
using lab::Table;

enum Exit { kOk = 0, kRuntime = 1, kUsage = 2, kBudget = 3 };

struct Options {
  std::string config_path;
  std::optional<std::string> family;
  std::optional<double> delta;
  Index max_n = 1000;
  std::string out;
  std::string format = "csv";
  bool no_meta = false;
  std::optional<double> budget;

  // family
  bool varying = false;
  // plot
  std::string plot_what;
  Index points = 4096;
  // iterate
  Index steps = 0;
  Index atoms = 8;
  Index every = 1;
  std::optional<std::string> observable;
  std::optional<Index> index;
  std::optional<double> eta;
  // experiment
  std::optional<std::string> kind;
  std::vector<Index> checkpoints;
  std::optional<Index> eval_atoms;
};

json load_config(const Options& o) { return o.config_path.empty() ? json::object() : lab::load_json(o.config_path); }

json family_spec(const Options& o, const json& cfg) {
  json spec = cfg.contains("family") ? cfg.at("family") : json{{"kind", "power"}, {"delta", 0.6}};
  if (o.family) {
    if (spec.value("kind", "") != *o.family) spec = json{{"kind", *o.family}};
  }
  if (o.delta) spec["delta"] = *o.delta;
  return spec;
}

json observable_spec(const Options& o, const json& cfg, farey::ExperimentKind fallback) {
  json spec = cfg.contains("observable") ? cfg.at("observable") : lab::default_observable(fallback);
  if (o.observable) spec = json{{"kind", *o.observable}, {"params", json::object()}};
  if (o.index) spec["params"]["n"] = *o.index;
  if (o.eta) spec["params"]["eta"] = *o.eta;
  return spec;
}

lab::OutputOptions output(const Options& o, const std::string& command) {
  return {o.out, o.format, !o.no_meta, command};
}

double budget_of(const Options& o, const json& exp) {
  if (o.budget) return *o.budget;
  if (exp.is_object() && exp.contains("budget")) return exp.at("budget").get<double>();
  return farey::kDefaultBudget;
}

int cmd_family(const Options& o) {
  const json cfg = load_config(o);
  const auto seq = lab::make_family(family_spec(o, cfg));
  if (o.max_n < 1) throw farey::ValidationError("--max-n must be >= 1");
  const farey::WanderingRate w(seq);
  w.prewarm(o.max_n + 1);
  Table t;
  t.columns = o.varying ? std::vector<std::string>{"n", "t_n", "a_n", "w_n", "karamata_diag", "moderate_ratio"}
                        : std::vector<std::string>{"n", "t_n", "a_n", "w_n", "h_coeff"};
  const bool karamata = seq.delta() < 1.0;
  for (Index n = 1; n <= o.max_n; ++n) {
    std::vector<Cell> row{static_cast<long long>(n), seq.tail(n), seq.atom_length(n), w(n)};
    if (o.varying) {
      row.emplace_back(karamata ? Cell{farey::karamata_diag(w, n)} : Cell{});
      row.emplace_back(farey::moderate_ratio(w, n));
    } else {
      row.emplace_back(seq.density_coeff(n));
    }
    t.rows.push_back(std::move(row));
  }
  t.extra["family"] = seq.name();
  lab::write_table(t, output(o, "family"));
  return kOk;
}

// Uniform grid on [lo, hi] plus both sides of every breakpoint wider than the grid step.
std::vector<double> grid_with_breaks(double lo, double hi, Index points, const std::vector<double>& breaks) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(points + 1 + 2 * breaks.size()));
  for (Index i = 0; i <= points; ++i) {
    xs.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points));
  }
  for (double b : breaks) {
    if (b < lo || b > hi) continue;
    xs.push_back(b);
    if (b > lo) xs.push_back(std::nextafter(b, lo));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

int cmd_plot(const Options& o) {
  const json cfg = load_config(o);
  const auto seq = lab::make_family(family_spec(o, cfg));
  if (o.points < 2) throw farey::ValidationError("--points must be >= 2");
  const double step = 1.0 / static_cast<double>(o.points);
  Table t;
  if (o.plot_what == "map") {
    std::vector<double> breaks;
    // Left endpoints of the atoms the grid can resolve.
    for (Index n = 1; seq.atom_length(n) >= step; ++n) breaks.push_back(seq.tail(n + 1));
    t.columns = {"x", "Fx"};
    for (double x : grid_with_breaks(0.0, 1.0, o.points, breaks)) t.rows.push_back({x, farey::farey_apply(seq, x)});
  } else if (o.plot_what == "induced") {
    const double t2 = seq.tail(2);
    std::vector<double> breaks;
    for (Index n = 1;; ++n) {
      const auto c = farey::return_cylinder(seq, n);
      if (c.length() < (1.0 - t2) * step) break;
      breaks.push_back(c.right);
    }
    t.columns = {"x", "Gx"};
    for (double x : grid_with_breaks(t2, 1.0, o.points, breaks)) t.rows.push_back({x, farey::induced_apply(seq, x)});
  } else if (o.plot_what == "density") {
    t.columns = {"x", "h"};
    for (const auto& [x, h] : farey::density_steps(seq, o.max_n)) t.rows.push_back({x, h});
  } else {
    throw farey::ValidationError("plot target must be map, induced or density");
  }
  lab::write_table(t, output(o, "plot " + o.plot_what));
  return kOk;
}

int cmd_iterate(const Options& o) {
  const json cfg = load_config(o);
  const auto seq = lab::make_family(family_spec(o, cfg));
  const auto v = lab::make_observable(observable_spec(o, cfg, farey::ExperimentKind::DeltaOne), seq);
  if (o.steps < 0 || o.atoms < 1 || o.every < 1) throw farey::ValidationError("need --steps >= 0, --atoms >= 1, --every >= 1");
  if (o.format == "csv" && o.atoms > 16) throw farey::ValidationError("CSV output holds at most 16 atoms; use --format json");
  const json exp = cfg.contains("experiment") ? cfg.at("experiment") : json::object();
  farey::TransferRun run(seq, v, o.steps, o.atoms, budget_of(o, exp));
  Table t;
  t.columns.push_back("step");
  for (Index j = 1; j <= o.atoms; ++j) t.columns.push_back("u_" + std::to_string(j));
  for (Index s = 0; s <= o.steps; ++s) {
    run.advance_to(s);
    if (s % o.every != 0 && s != o.steps) continue;
    std::vector<Cell> row{static_cast<long long>(s)};
    for (Index j = 1; j <= o.atoms; ++j) row.emplace_back(run.coeff(j));
    t.rows.push_back(std::move(row));
  }
  t.extra["updates"] = run.updates();
  lab::write_table(t, output(o, "iterate"));
  return kOk;
}

int cmd_renewal(const Options& o) {
  const json cfg = load_config(o);
  const auto seq = lab::make_family(family_spec(o, cfg));
  const json exp = cfg.contains("experiment") ? cfg.at("experiment") : json::object();
  const auto u = farey::renewal_sequence(seq, o.max_n, budget_of(o, exp));
  const farey::WanderingRate w(seq);
  Table t;
  t.columns = {"n", "u_n", "w_n", "w_n_u_n"};
  t.rows.push_back({0LL, u[0], Cell{}, Cell{}});
  for (Index n = 1; n <= o.max_n; ++n) {
    const double un = u[static_cast<std::size_t>(n)];
    t.rows.push_back({static_cast<long long>(n), un, w(n), w(n) * un});
  }
  if (seq.delta() <= 1.0 && seq.delta() > 0.0) t.extra["gamma_delta"] = farey::gamma_consts(seq.delta()).gamma_delta;
  lab::write_table(t, output(o, "renewal"));
  return kOk;
}

int cmd_experiment(const Options& o) {
  const json cfg = load_config(o);
  json exp = cfg.contains("experiment") ? cfg.at("experiment") : json::object();
  if (o.kind) exp["kind"] = *o.kind;
  if (!exp.contains("kind")) throw farey::ValidationError("experiment needs a kind (--kind or experiment.kind)");
  if (!o.checkpoints.empty()) exp["checkpoints"] = o.checkpoints;
  if (o.eval_atoms) exp["eval_atoms"] = *o.eval_atoms;
  if (o.budget) exp["budget"] = *o.budget;
  const auto ecfg = lab::make_experiment(exp);
  const auto seq = lab::make_family(family_spec(o, cfg));
  const auto v = lab::make_observable(observable_spec(o, cfg, ecfg.kind), seq);
  const auto report = farey::run_experiment(seq, v, ecfg);

  Table t;
  t.columns = {"n", "label", "value", "target", "defect"};
  for (const auto& r : report.records) {
    t.rows.push_back({static_cast<long long>(r.n), r.label, r.value, r.target, r.defect});
  }
  json checks = json::array();
  for (const auto& c : report.checks) {
    t.rows.push_back({Cell{}, "check: " + c.name, static_cast<long long>(c.pass), Cell{}, Cell{}});
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  t.rows.push_back({Cell{}, "verdict", static_cast<long long>(report.verdict), Cell{}, Cell{}});
  t.extra = {{"kind", report.kind}, {"target", report.target}, {"verdict", report.verdict},
             {"updates", report.updates}, {"estimate", report.estimate}, {"checks", checks}};
  lab::write_table(t, output(o, "experiment " + report.kind));
  std::cerr << report.kind << ": verdict " << (report.verdict ? "PASS" : "FAIL") << " (" << report.updates
            << " coefficient updates)\n";
  return report.verdict ? kOk : kRuntime;
}

int cmd_validate(const Options& o) {
  const json cfg = load_config(o);
  const auto seq = lab::make_family(family_spec(o, cfg));
  Table t;
  t.columns = {"condition", "pass", "lhs", "rhs", "detail"};
  t.rows.push_back({"family", 1LL, seq.delta(), Cell{}, seq.name()});
  bool ok = true;
  std::string failed;
  if (cfg.contains("observable")) {
    const auto& obs = cfg.at("observable");
    if (obs.value("kind", "") == "counterexample") {
      const json params = obs.contains("params") ? obs.at("params") : json::object();
      const auto p = lab::make_counterexample_params(params, seq.delta());
      const auto rep = farey::validate_counterexample(p);
      for (const auto& c : rep.conditions) {
        t.rows.push_back({c.name, static_cast<long long>(c.pass), c.lhs, c.rhs, c.detail});
      }
      if (!rep.ok()) {
        ok = false;
        failed = rep.failures();
      }
    } else {
      (void)lab::make_observable(obs, seq);
      t.rows.push_back({"observable", 1LL, Cell{}, Cell{}, obs.value("kind", "")});
    }
  }
  if (cfg.contains("experiment")) {
    const auto e = lab::make_experiment(cfg.at("experiment"));
    t.rows.push_back({"experiment", 1LL, Cell{}, Cell{}, farey::to_string(e.kind)});
  }
  lab::write_table(t, output(o, "validate"));
  if (!ok) {
    std::cerr << "farey-lab: validation failed: " << failed << "\n";
    return kUsage;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"farey-lab: transfer-operator experiments for alpha-Farey maps"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--family", o.family, "power, delta1_harmonic, exp_sqrt_log, exp_log_over_loglog, custom_table, ekstrom");
  app.add_option("--delta", o.delta, "tail exponent in (0,1]");
  app.add_option("--max-n", o.max_n, "number of atoms / sequence length")->capture_default_str();
  app.add_option("--out", o.out, "output path (default: standard output)");
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_flag("--no-meta", o.no_meta, "omit the timestamped meta header");
  app.add_option("--budget", o.budget, "coefficient-update budget")->check(CLI::PositiveNumber);

  auto* family = app.add_subcommand("family", "tail table of a family");
  family->add_flag("--varying", o.varying, "wandering-rate diagnostics instead of the density column");

  auto* plot = app.add_subcommand("plot", "figure data: map, induced or density");
  plot->add_option("what", o.plot_what, "map, induced or density")->required()->check(CLI::IsMember({"map", "induced", "density"}));
  plot->add_option("--points", o.points, "uniform grid points")->capture_default_str();

  auto* iterate = app.add_subcommand("iterate", "iterate the transfer operator on an observable");
  iterate->add_option("--steps", o.steps, "number of steps")->required();
  iterate->add_option("--atoms", o.atoms, "atoms reported")->capture_default_str();
  iterate->add_option("--every", o.every, "report every k steps")->capture_default_str();
  iterate->add_option("--observable", o.observable, "indicator, constant, eta_power, counterexample");
  iterate->add_option("--index", o.index, "atom index for the indicator");
  iterate->add_option("--eta", o.eta, "exponent for eta_power");

  app.add_subcommand("renewal", "renewal sequence u_0..u_{max-n}");

  auto* experiment = app.add_subcommand("experiment", "checkpointed asymptotic experiment");
  experiment->add_option("--kind", o.kind, "delta_one, regular, counterexample, extension, cesaro");
  experiment->add_option("--checkpoints", o.checkpoints, "increasing step counts");
  experiment->add_option("--eval-atoms", o.eval_atoms, "atoms evaluated per checkpoint");

  app.add_subcommand("validate", "validate a config (family, observable, experiment)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "family") return cmd_family(o);
    if (name == "plot") return cmd_plot(o);
    if (name == "iterate") return cmd_iterate(o);
    if (name == "renewal") return cmd_renewal(o);
    if (name == "experiment") return cmd_experiment(o);
    if (name == "validate") return cmd_validate(o);
    return kUsage;
  } catch (const farey::BudgetError& e) {
    std::cerr << "farey-lab: budget refusal: " << e.what() << " (estimate " << e.estimate() << ", budget " << e.budget()
              << ")\n";
    return kBudget;
  } catch (const farey::ValidationError& e) {
    std::cerr << "farey-lab: " << e.what() << "\n";
    return kUsage;
  } catch (const farey::DomainError& e) {
    std::cerr << "farey-lab: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "farey-lab: config: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "farey-lab: " << e.what() << "\n";
    return kRuntime;
  }
}
