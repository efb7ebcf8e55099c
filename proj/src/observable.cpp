#include "farey/observable.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "farey/compensated.hpp"
#include "farey/measure.hpp"
#include "farey/transfer.hpp"

namespace farey {

namespace {

constexpr double kExactLimit = 9007199254740992.0;  // 2^53

}  // namespace

CounterexampleParams CounterexampleParams::first_example(double delta, double epsilon,
                                                       std::optional<double> g3) {
  CounterexampleParams p;
  p.delta = delta;
  p.epsilon = epsilon;
  p.g1 = (1.0 + epsilon) / (1.0 - delta);
  p.g2 = delta / (1.0 - delta);
  if (g3) {
    p.g3 = *g3;
  } else {
    const double bound = (1.0 - delta) - p.rho() * epsilon;
    p.g3 = (0.3 < bound || bound <= 0.0) ? 0.3 : 0.9 * bound;
  }
  return p;
}

CounterexampleParams CounterexampleParams::second_example(double delta) {
  CounterexampleParams p;
  const double c = 1.0 - delta;
  p.delta = delta;
  p.g1 = 1.0 / (c * c);
  p.g2 = (delta * delta + 2.0 * delta - 1.0) / (2.0 * delta * c * c);
  p.g3 = 0.125;
  p.epsilon = delta * c * c / (2.0 * delta * delta + 12.0 * delta - 2.0);
  return p;
}

double CounterexampleParams::block_end(Index k) const {
  const double v = std::exp2(g1 * static_cast<double>(k));
  return v < kExactLimit ? std::ceil(v) : v;
}

double CounterexampleParams::block_width(Index k) const {
  const double v = std::exp2(g2 * static_cast<double>(k));
  return v < kExactLimit ? std::floor(v) : v;
}

double CounterexampleParams::height(Index k) const { return std::exp2(-g3 * static_cast<double>(k)); }

Index CounterexampleParams::max_indexable_block() const {
  return static_cast<Index>(std::floor(61.9 / g1));
}

std::optional<Index> CounterexampleParams::block_of(Index j) const {
  if (j < 1) return std::nullopt;
  const auto x = static_cast<double>(j);
  const auto k0 = static_cast<Index>(std::floor(std::log2(x) / g1));
  for (Index k = std::max<Index>(1, k0 - 1); k <= k0 + 2; ++k) {
    if (block_start(k) <= x && x <= block_end(k)) return k;
  }
  return std::nullopt;
}

bool ValidationReport::ok() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
}

std::string ValidationReport::failures() const {
  std::string out;
  for (const auto& c : conditions) {
    if (c.pass) continue;
    if (!out.empty()) out += ", ";
    out += c.name;
  }
  return out;
}

ValidationReport validate_counterexample(const CounterexampleParams& p) {
  ValidationReport report;
  auto add = [&](std::string name, bool pass, double lhs, double rhs, std::string detail) {
    report.conditions.push_back({std::move(name), pass, lhs, rhs, std::move(detail)});
  };
  const double d = p.delta;
  add("delta", d > 0.5 && d < 1.0, d, 0.5, "delta must lie in (1/2, 1)");
  add("epsilon", p.epsilon > 0.0 && p.epsilon < d - 0.5, p.epsilon, d - 0.5,
      "epsilon must lie in (0, delta - 1/2)");
  add("exponents", p.g1 > 0.0 && p.g2 > 0.0 && p.g3 > 0.0, std::min({p.g1, p.g2, p.g3}), 0.0,
      "g1, g2, g3 must be positive");
  add("(C1)", p.g1 > 1.0 / (1.0 - d), p.g1, 1.0 / (1.0 - d), "g1 > (1-delta)^{-1}");
  add("(C2)", d * p.g1 > p.g2, d * p.g1, p.g2, "delta g1 > g2");
  const double c3_lhs = p.g2 * (d - p.epsilon);
  const double c3_rhs = (2.0 * d + 2.0 * p.epsilon - 1.0) * p.g1 + p.g3;
  add("(C3)", c3_lhs > c3_rhs, c3_lhs, c3_rhs, "g2(delta-eps) > (2delta+2eps-1) g1 + g3");

  if (p.g1 > 0.0 && p.g2 >= 0.0) {
    add("block start", p.block_start(1) >= 1.0, p.block_start(1), 1.0, "N_1 - n_1 >= 1");
    bool pass = true;
    Index worst = 0;
    for (Index k = 1; k <= 64 && pass; ++k) {
      const double next_end = std::exp2(p.g1 * static_cast<double>(k + 1));
      if (next_end < kExactLimit) {
        pass = p.block_start(k + 1) > p.block_end(k);
      } else if (p.g2 >= p.g1) {
        pass = false;
      } else {
        // Lower bound of the left side against an upper bound of the right, in log2.
        const double kk = static_cast<double>(k);
        const double lhs = p.g1 * (kk + 1.0) + std::log2(-std::expm1((p.g2 - p.g1) * (kk + 1.0) * M_LN2));
        const double rhs = p.g1 * kk + std::log2(1.0 + std::exp2(-p.g1 * kk));
        pass = lhs > rhs;
      }
      if (!pass) worst = k;
    }
    add("block separation", pass, static_cast<double>(worst), 64.0,
        pass ? "N_{k+1} - n_{k+1} > N_k for k <= 64"
             : "N_{k+1} - n_{k+1} <= N_k at k = " + std::to_string(worst));
  }
  return report;
}

AtomObservable AtomObservable::indicator(Index n) {
  if (n < 1) throw ValidationError("indicator: atom index must be >= 1");
  AtomObservable v;
  v.name_ = "indicator(" + std::to_string(n) + ")";
  v.prefix_.assign(static_cast<std::size_t>(n), 0.0);
  v.prefix_.back() = 1.0;
  v.tail_ = {TailKind::FiniteSupport, n, 0.0, 0.0, 0.0, std::nullopt};
  v.nonnegative_ = true;
  return v;
}

AtomObservable AtomObservable::constant(double c) {
  AtomObservable v;
  v.name_ = "constant";
  v.rule_ = [c](Index) { return c; };
  v.value_at_one_ = c;
  v.tail_ = {TailKind::Constant, 0, c, 0.0, 0.0, std::nullopt};
  v.continuation_ = [c](double) { return c; };
  v.nonnegative_ = c >= 0.0;
  return v;
}

AtomObservable AtomObservable::eta_power(double eta, double delta) {
  if (!(eta > 0.0 && eta < delta)) throw ValidationError("eta_power: eta must lie in (0, delta)");
  AtomObservable v;
  v.name_ = "eta_power";
  v.rule_ = [eta](Index n) { return std::pow(static_cast<double>(n), eta); };
  v.value_at_one_ = 1.0;
  v.tail_ = {TailKind::PowerTail, 0, 0.0, 1.0, eta, std::nullopt};
  v.continuation_ = [eta](double x) { return std::pow(x, eta); };
  v.nonnegative_ = true;
  return v;
}

AtomObservable AtomObservable::counterexample(const CounterexampleParams& p) {
  const auto report = validate_counterexample(p);
  if (!report.ok()) throw ValidationError("counterexample parameters violate " + report.failures());
  AtomObservable v;
  v.name_ = "counterexample";
  v.rule_ = [p](Index j) {
    const auto k = p.block_of(j);
    return k ? p.height(*k) : 0.0;
  };
  v.tail_ = {TailKind::Counterexample, 0, 0.0, 0.0, 0.0, p};
  v.nonnegative_ = true;
  return v;
}

AtomObservable AtomObservable::finite(std::vector<double> coeffs, double value_at_one) {
  AtomObservable v;
  v.name_ = "finite";
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
  v.tail_ = {TailKind::FiniteSupport, static_cast<Index>(coeffs.size()), 0.0, 0.0, 0.0, std::nullopt};
  v.nonnegative_ = std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c >= 0.0; });
  v.prefix_ = std::move(coeffs);
  v.value_at_one_ = value_at_one;
  return v;
}

AtomObservable AtomObservable::from_rule(std::string name, Rule rule, TailDescriptor tail,
                                         double value_at_one,
                                         std::function<double(double)> continuation) {
  AtomObservable v;
  v.name_ = std::move(name);
  v.rule_ = std::move(rule);
  v.tail_ = std::move(tail);
  v.value_at_one_ = value_at_one;
  v.continuation_ = std::move(continuation);
  return v;
}

double AtomObservable::coeff(Index n) const {
  if (n < 1) throw DomainError("observable: atom index must be >= 1");
  if (static_cast<std::size_t>(n) <= prefix_.size()) return prefix_[static_cast<std::size_t>(n - 1)];
  if (tail_.kind == TailKind::FiniteSupport && n > tail_.support) return 0.0;
  return rule_ ? rule_(n) : 0.0;
}

std::vector<double> AtomObservable::prefix(Index m) const {
  std::vector<double> out(static_cast<std::size_t>(std::max<Index>(m, 0)));
  for (Index n = 1; n <= m; ++n) out[static_cast<std::size_t>(n - 1)] = coeff(n);
  return out;
}

double AtomObservable::at(const TailSequence& seq, double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("observable: x must lie in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return value_at_one_;
  return coeff(seq.locate(x));
}

AtomObservable AtomObservable::abs() const {
  AtomObservable v = *this;
  v.name_ = "|" + name_ + "|";
  for (double& c : v.prefix_) c = std::fabs(c);
  if (rule_) {
    v.rule_ = [rule = rule_](Index n) { return std::fabs(rule(n)); };
  }
  if (continuation_) {
    v.continuation_ = [f = continuation_](double x) { return std::fabs(f(x)); };
  }
  v.value_at_one_ = std::fabs(value_at_one_);
  v.tail_.value = std::fabs(tail_.value);
  v.nonnegative_ = true;
  return v;
}

AtomObservable AtomObservable::divide_by_density(const TailSequence& seq) const {
  AtomObservable v = *this;
  v.name_ = name_ + "/h";
  for (std::size_t i = 0; i < v.prefix_.size(); ++i) {
    const auto n = static_cast<Index>(i + 1);
    v.prefix_[i] *= seq.hazard(n);
  }
  if (rule_) {
    v.rule_ = [rule = rule_, seq](Index n) { return rule(n) * seq.hazard(n); };
  }
  // h is not defined at 1; v/h there follows the atom A_1.
  v.value_at_one_ = value_at_one_ * seq.hazard(1);
  if (continuation_ && seq.has_continuation(1.0)) {
    v.continuation_ = [f = continuation_, seq](double x) { return f(x) * seq.atom_at(x) / seq.tail_at(x); };
  } else {
    v.continuation_ = {};
  }
  switch (tail_.kind) {
    case TailKind::Constant:
      // c a_n / t_n <= c, with the power-law decay of the hazard.
      v.tail_ = {TailKind::PowerTail, 0, 0.0, std::fabs(tail_.value), 0.0, std::nullopt};
      break;
    case TailKind::Counterexample:
      // Bounds below use the block structure of v, not of v/h.
      v.tail_ = {TailKind::PowerTail, 0, 0.0, std::fabs(tail_.params->height(1)), 0.0, std::nullopt};
      break;
    default:
      break;
  }
  return v;
}

std::optional<Index> AtomObservable::support_end() const {
  if (tail_.kind == TailKind::FiniteSupport) return tail_.support;
  return std::nullopt;
}

Norms norms(const AtomObservable& v, const TailSequence&) {
  Norms out;
  const auto& t = v.tail();
  switch (t.kind) {
    case TailKind::FiniteSupport: {
      double sup = std::fabs(v.value_at_one());
      double var = std::fabs(v.coeff(1) - v.value_at_one());
      for (Index n = 1; n <= t.support; ++n) {
        sup = std::max(sup, std::fabs(v.coeff(n)));
        var += std::fabs(v.coeff(n + 1) - v.coeff(n));
      }
      out.sup_norm = sup;
      out.variation = var;
      if (t.support <= 1) out.b_alpha_norm = sup;
      break;
    }
    case TailKind::Constant:
      out.sup_norm = std::fabs(t.value);
      out.variation = std::fabs(t.value - v.value_at_one());
      break;
    case TailKind::PowerTail:
      if (t.exponent <= 0.0) {
        throw DomainError("norms: the sup of a decaying power tail is not resolvable from its descriptor");
      }
      out.sup_norm = INFINITY;
      break;
    case TailKind::Counterexample:
      out.sup_norm = t.params->height(1);
      out.variation = counterexample_variation(*t.params);
      break;
  }
  return out;
}

double counterexample_variation(const CounterexampleParams& p) {
  const double r = std::exp2(-p.g3);
  return 2.0 * r / (-std::expm1(-p.g3 * M_LN2));
}

double counterexample_variation_direct(const CounterexampleParams& p, Index k_max) {
  CompensatedSum sum;
  for (Index k = 1; k <= k_max; ++k) sum += 2.0 * p.height(k);
  return sum.value();
}

LevelCount blocks_above(const CounterexampleParams& p, double level) {
  LevelCount out;
  for (Index k = 1; p.height(k) > level; ++k) out.count = k;
  out.bound = std::log2(1.0 / level) / p.g3 + 1.0;
  return out;
}

SummabilityReport summability_check(const AtomObservable& v, const TailSequence& seq, Index K) {
  SummabilityReport report;
  const AtomObservable u = v.abs();
  CompensatedSum lhs;
  for (Index k = 1; k <= K; ++k) {
    const double c = u.coeff(k);
    if (c != 0.0) lhs += c * seq.tail(k);
  }
  report.lhs_partial = lhs.value();
  try {
    const auto rhs = integral_mu(seq, u);
    report.rhs = rhs.value;
    report.rhs_bound = rhs.bound;
    report.gap_bound = mu_tail_bound(seq, u, K);
  } catch (const DivergenceError& e) {
    report.summable = false;
    report.holds = false;
    report.note = e.what();
    return report;
  }
  const double slack = report.gap_bound + report.rhs_bound + 1e-14 * std::fabs(report.rhs);
  const double diff = report.rhs - report.lhs_partial;
  report.holds = diff >= -(report.rhs_bound + 1e-14 * std::fabs(report.rhs)) && diff <= slack;
  std::ostringstream note;
  note << "rhs - lhs = " << diff << ", certified gap " << report.gap_bound;
  report.note = note.str();
  return report;
}

std::vector<H1Check> h1_bound_check(const TailSequence& seq, const BetaConstant& u, Index n_max) {
  // D_alpha vanishes on beta-constant functions and on constants, so both
  // norms reduce to sup norms.
  double sup = 0.0;
  for (double x : u.values) sup = std::max(sup, std::fabs(x));
  std::vector<H1Check> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (Index n = 1; n <= n_max; ++n) {
    const double mu_cyl = seq.atom_length(n);
    H1Check c;
    c.n = n;
    c.lhs = std::fabs(induced_R_n(seq, u, n));
    c.rhs = mu_cyl * sup;
    c.holds = c.lhs <= c.rhs;
    c.equality = c.lhs == c.rhs;
    out.push_back(c);
  }
  return out;
}

}  // namespace farey
