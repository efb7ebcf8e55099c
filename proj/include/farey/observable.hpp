#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "farey/partition.hpp"

namespace farey {

/// Block observable parameters: N_k = ceil(2^{g1 k}), n_k = floor(2^{g2 k}),
/// s_k = 2^{-g3 k}, with blocks [N_k - n_k, N_k].
struct CounterexampleParams {
  double delta = 0.6;
  double epsilon = 0.01;
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;

  /// g1 = (1+eps)/(1-delta), g2 = delta/(1-delta); g3 defaults to 0.3 when that
  /// respects the bound g3 < (1-delta) - rho eps, otherwise to 90% of the bound.
  static CounterexampleParams first_example(double delta, double epsilon = 0.01,
                                          std::optional<double> g3 = std::nullopt);
  /// g1 = (1-delta)^{-2}, g2 = (delta^2+2delta-1)/(2delta(1-delta)^2), g3 = 1/8,
  /// eps = delta(1-delta)^2/(2delta^2+12delta-2).
  static CounterexampleParams second_example(double delta);

  /// rho = (3delta+1+2eps)/(1-delta), the slope of the g3 bound in the first example.
  double rho() const { return (3.0 * delta + 1.0 + 2.0 * epsilon) / (1.0 - delta); }

  /// Exact for k with 2^{g1 k} < 2^53; beyond that the doubles are only approximate
  /// integers.
  double block_end(Index k) const;    // N_k
  double block_width(Index k) const;  // n_k
  double block_start(Index k) const { return block_end(k) - block_width(k); }
  double height(Index k) const;  // s_k

  /// Largest k with N_k representable as an Index (N_k < 2^62).
  Index max_indexable_block() const;
  /// The block containing j, if any.
  std::optional<Index> block_of(Index j) const;
};

struct ConditionResult {
  std::string name;  // "(C1)", ..., "block separation"
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ConditionResult> conditions;
  bool ok() const;
  /// Names of the failing conditions, comma separated.
  std::string failures() const;
};

/// Checks the parameter ranges, (C1)-(C3) and N_{k+1} - n_{k+1} > N_k for k <= 64.
ValidationReport validate_counterexample(const CounterexampleParams& p);

enum class TailKind {
  FiniteSupport,   // v_n = 0 for n > support
  Constant,        // v_n = value for every n
  PowerTail,       // |v_n| <= coef n^exponent
  Counterexample,  // block observable
};

struct TailDescriptor {
  TailKind kind = TailKind::FiniteSupport;
  Index support = 0;
  double value = 0.0;
  double coef = 0.0;
  double exponent = 0.0;
  std::optional<CounterexampleParams> params;
};

/// A function constant on every atom A_n: an eager prefix, a lazy rule for the
/// remaining indices, and a separately tracked value at x = 1.
class AtomObservable {
 public:
  using Rule = std::function<double(Index)>;

  static AtomObservable indicator(Index n);
  static AtomObservable constant(double c);
  /// v_n = n^eta, v(1) = 1; requires 0 < eta < delta.
  static AtomObservable eta_power(double eta, double delta);
  /// Throws ValidationError naming the violated conditions.
  static AtomObservable counterexample(const CounterexampleParams& p);
  static AtomObservable finite(std::vector<double> coeffs, double value_at_one = 0.0);
  /// Arbitrary rule with a caller-supplied descriptor.
  static AtomObservable from_rule(std::string name, Rule rule, TailDescriptor tail,
                                  double value_at_one = 0.0,
                                  std::function<double(double)> continuation = {});

  const std::string& name() const { return name_; }
  double coeff(Index n) const;
  double operator()(Index n) const { return coeff(n); }
  std::vector<double> prefix(Index m) const;
  double value_at_one() const { return value_at_one_; }
  const TailDescriptor& tail() const { return tail_; }
  /// v(x) for real x >= 1 following the lazy rule (eta_power, constants).
  const std::function<double(double)>& continuation() const { return continuation_; }
  /// Value at a point of [0,1]; x = 0 gives 0.
  double at(const TailSequence& seq, double x) const;

  /// |v|, with the same descriptor.
  AtomObservable abs() const;
  /// Coefficient-wise v_n a_n / t_n, i.e. v / h_alpha.
  AtomObservable divide_by_density(const TailSequence& seq) const;
  /// Last index that can be non-zero, or nullopt for infinite support.
  std::optional<Index> support_end() const;
  bool nonnegative_hint() const { return nonnegative_; }

 private:
  std::string name_;
  std::vector<double> prefix_;
  Rule rule_;
  double value_at_one_ = 0.0;
  TailDescriptor tail_;
  std::function<double(double)> continuation_;
  bool nonnegative_ = false;
};

struct Norms {
  double sup_norm = 0.0;  // +inf when the descriptor is unbounded
  std::optional<double> variation;
  /// Only defined for observables supported in the closure of A_1.
  std::optional<double> b_alpha_norm;
};

Norms norms(const AtomObservable& v, const TailSequence& seq);

/// 2 sum_k s_k in closed form, and by direct summation up to k_max.
double counterexample_variation(const CounterexampleParams& p);
double counterexample_variation_direct(const CounterexampleParams& p, Index k_max);

/// Number of blocks with s_k > level, and the bound log2(1/level)/g3 + 1.
struct LevelCount {
  Index count = 0;
  double bound = 0.0;
};
LevelCount blocks_above(const CounterexampleParams& p, double level);

struct SummabilityReport {
  double lhs_partial = 0.0;  // sum_{k<=K} |v_k| t_k
  double rhs = 0.0;          // integral of |v| against mu
  double rhs_bound = 0.0;
  double gap_bound = 0.0;    // certified bound on sum_{k>K} |v_k| t_k
  bool holds = false;        // |rhs - lhs| within the two bounds
  bool summable = true;
  std::string note;
};

/// For atom-constant v, the sup of F^{k-1}(v 1_{A_k}) is |v_k| t_k, so the
/// summability series is a partial sum of the mu-integral of |v|.
SummabilityReport summability_check(const AtomObservable& v, const TailSequence& seq, Index K);

/// A function constant on each return cylinder {phi = n}; D_alpha vanishes on it.
struct BetaConstant {
  std::vector<double> values;  // u_1..u_N; zero beyond
};

struct H1Check {
  Index n = 0;
  double lhs = 0.0;  // ||R_n u||_B
  double rhs = 0.0;  // mu({phi = n}) ||u||_B
  bool holds = false;
  bool equality = false;
};

std::vector<H1Check> h1_bound_check(const TailSequence& seq, const BetaConstant& u, Index n_max);

}  // namespace farey
