#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "farey/ekstrom.hpp"
#include "farey/errors.hpp"

namespace farey {

enum class FamilyKind {
  PowerLaw,          // t_n = n^{-delta}
  Delta1Harmonic,    // t_n = 1/n
  ExpSqrtLog,        // a_n ~ n^{-2} (ln n)^{-1/2} e^{(ln n)^{1/2}}, normalised
  ExpLogOverLogLog,  // a_n ~ n^{-2} kappa(n) e^{ln n / ln ln n}, normalised
  CustomTable,       // tabulated t_1..t_K, power-law continuation
  Ekstrom,           // wandering rate w_n = l(n) for an Ekstrom function l
};

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& name);

/// Half-open atom [left, right) = [t_{n+1}, t_n).
struct Atom {
  Index index = 0;
  double left = 0.0;
  double right = 0.0;

  double length() const { return right - left; }
  double midpoint() const { return left + 0.5 * (right - left); }
};

/// t_n <= coef * n^{-exponent} and a_n <= coef * exponent * n^{-1-exponent} for n >= from.
struct PowerBound {
  double coef = 1.0;
  double exponent = 1.0;
  Index from = 1;
};

namespace detail {
class TailModel;
}

/// The defining data (t_n) of an alpha-Farey partition: atoms A_n = [t_{n+1}, t_n)
/// of length a_n = t_n - t_{n+1}, ordered right to left with t_1 = 1.
///
/// Cheap to copy; copies share the immutable model and its memo cache. Families
/// without a closed form (the normalised delta = 1 families) cache tails in blocks
/// of 2^16 indices; concurrent readers may compute the same block twice, and the
/// results are bit-identical.
class TailSequence {
 public:
  static TailSequence power_law(double delta);
  static TailSequence harmonic();
  static TailSequence exp_sqrt_log();
  static TailSequence exp_log_over_loglog();
  /// `tails` holds t_1..t_K (t_1 == 1, strictly decreasing, positive); for n > K
  /// the tail continues as t_K (n/K)^{-tail_delta}.
  static TailSequence custom_table(std::vector<double> tails, double tail_delta);
  /// w_n = l(n), so t_1 = 1 and t_n = l(n) - l(n-1). Requires c_1 <= 1.
  static TailSequence ekstrom(EkstromFunction l);

  FamilyKind kind() const { return kind_; }
  double delta() const { return delta_; }
  std::string name() const;
  const std::vector<double>& table() const { return table_; }
  const std::optional<EkstromFunction>& ekstrom_function() const { return ekstrom_; }

  double tail(Index n) const;
  double atom_length(Index n) const;
  Atom atom_interval(Index n) const;
  /// Unique n with t_{n+1} <= x < t_n, for 0 < x < 1.
  Index locate(double x) const;
  /// Value t_n / a_n of the invariant density on A_n.
  double density_coeff(Index n) const;

  /// t_{n+1} / t_n, computed as 1 - hazard(n) so the two sum to one exactly.
  double tail_ratio(Index n) const;
  /// a_n / t_n, evaluated without cancellation.
  double hazard(Index n) const;

  /// sum_{j=a}^{b} t_j (0 if b < a).
  double tail_range_sum(Index a, Index b) const;
  /// sum_{j=a}^{b} a_j = t_a - t_{b+1}.
  double atom_range_sum(Index a, Index b) const;

  /// l(n) := t_n n^delta (identically 1 for the power law).
  double tail_slowly_varying(Index n) const;
  /// l(x) := x^{1+delta} a(x) / delta, with a(x) the analytic atom-length rule.
  double atom_slowly_varying(double x) const;

  /// Power-law majorant for tails and atoms, where one is known in closed form.
  std::optional<PowerBound> power_bound() const;
  /// Real-argument continuations t(x), a(x) (power-law regions only).
  bool has_continuation(double from_x) const;
  double tail_at(double x) const;
  double atom_at(double x) const;

  /// Fill caches up to index n (no-op for closed-form families).
  void prewarm(Index n) const;

 private:
  TailSequence(FamilyKind kind, double delta, std::shared_ptr<const detail::TailModel> model)
      : kind_(kind), delta_(delta), model_(std::move(model)) {}

  FamilyKind kind_;
  double delta_;
  std::shared_ptr<const detail::TailModel> model_;
  std::vector<double> table_;
  std::optional<EkstromFunction> ekstrom_;
};

/// sum_{j=a}^{b} j^{-delta}, direct below j = 1000 and Euler-Maclaurin above.
double power_range_sum(double delta, Index a, Index b);

}  // namespace farey
