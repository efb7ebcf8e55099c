#pragma once

#include <functional>
#include <vector>

#include "farey/measure.hpp"
#include "farey/observable.hpp"
#include "farey/partition.hpp"

namespace farey {

inline constexpr double kDefaultBudget = 2e11;

/// Coefficients u_1..u_M of an atom-constant function under iteration of the
/// transfer operator. Index i of `coeffs` holds the value on A_{i+1}.
struct TransferState {
  std::vector<double> coeffs;
  double value_at_one = 0.0;
  Index steps_done = 0;
  Index trunc = 0;
  Index exact_prefix = 0;

  static TransferState from_observable(const AtomObservable& v, Index M);
  static TransferState from_coeffs(std::vector<double> u, double value_at_one = 0.0);
};

/// Precomputed t_{n+1}/t_n and a_n/t_n for n <= M.
class TransferKernel {
 public:
  TransferKernel(const TailSequence& seq, Index M);

  Index size() const { return static_cast<Index>(ratio_.size()); }
  /// One step on the exact prefix: u'_n = r_n u_{n+1} + q_n u_1. Returns the number
  /// of coefficient updates performed.
  Index step(TransferState& state) const;

 private:
  std::vector<double> ratio_;
  std::vector<double> hazard_;
};

/// One step with on-the-fly coefficients.
void transfer_step(const TailSequence& seq, TransferState& state);

/// Elementary updates for n steps on m exact atoms with truncation M = m + n.
double transfer_cost(Index n, Index m);
/// The a-priori estimate n (n + m) checked against the budget.
double transfer_estimate(Index n, Index m);

struct IterateResult {
  std::vector<double> coeffs;  // u_1..u_m
  double value_at_one = 0.0;
  double updates = 0.0;
  Index trunc = 0;
};

/// (F^n v) on A_1..A_m, exact up to rounding. `extra` widens the truncation
/// beyond m + n. Throws BudgetError when n (n + m) exceeds the budget.
IterateResult transfer_iterate(const TailSequence& seq, const AtomObservable& v, Index n, Index m,
                               double budget = kDefaultBudget, Index extra = 0);

/// Single forward run with reads at increasing step counts. Used by the
/// experiment drivers so a whole checkpoint grid costs one iteration.
class TransferRun {
 public:
  TransferRun(const TailSequence& seq, const AtomObservable& v, Index n_max, Index m,
              double budget = kDefaultBudget);

  void advance_to(Index n);
  Index steps() const { return state_.steps_done; }
  /// u_j, 1 <= j <= m.
  double coeff(Index j) const;
  double value_at_one() const { return state_.value_at_one; }
  double updates() const { return updates_; }
  double estimate() const { return estimate_; }

 private:
  TransferState state_;
  TransferKernel kernel_;
  Index m_;
  double updates_ = 0.0;
  double estimate_ = 0.0;
};

/// Full word expansion sum_{w in {0,1}^n} c_{k,w} v(F_{alpha,w}(x)) with k the atom of x.
/// Exponential cost; refuses n > 22.
double transfer_pointwise_oracle(const TailSequence& seq, const std::function<double(double)>& v,
                                 double x, Index n);

struct PerronResult {
  std::vector<double> coeffs;  // (P f)_1..(P f)_{M-1}
  double value_at_one = 0.0;
};

/// (P f)_n = a_1 f_1 + (a_{n+1}/a_n) f_{n+1}; (P f)(1) = a_1 f_1.
PerronResult perron_apply(const TailSequence& seq, const std::vector<double>& f);

/// u_0 = 1, u_n = sum_{k=1}^n a_k u_{n-k}.
std::vector<double> renewal_sequence(const TailSequence& seq, Index n_max, double budget = kDefaultBudget);

/// R_n u = a_n u_n on the closure of A_1 (a constant).
double induced_R_n(const TailSequence& seq, const BetaConstant& u, Index n);
/// R(1) u = sum_n a_n u_n on the closure of A_1.
double induced_R1(const TailSequence& seq, const BetaConstant& u);

struct InducedDuality {
  double lhs = 0.0;  // int R(1)u . w dmu
  double rhs = 0.0;  // int u . w o G . 1_{A_1-bar} dmu, from the cylinder geometry
};
InducedDuality induced_duality(const TailSequence& seq, const BetaConstant& u, const BetaConstant& w);

}  // namespace farey
