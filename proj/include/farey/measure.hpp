#pragma once

#include <utility>
#include <vector>

#include "farey/observable.hpp"
#include "farey/partition.hpp"

namespace farey {

struct GammaConsts {
  double delta = 1.0;
  double gamma_delta = 1.0;     // 1 / (Gamma(1+delta) Gamma(2-delta))
  double gamma_bar = 0.0;       // Gamma(1-delta) / Gamma(2-delta); +inf at delta = 1
  double gamma_bar_dual = 1.0;  // Gamma(delta) / Gamma(1+delta)
};

GammaConsts gamma_consts(double delta);

/// A value together with a certified bound on its truncation error.
struct Certified {
  double value = 0.0;
  double bound = 0.0;
  Index terms = 0;  // explicitly summed indices
};

/// sum_n v_n t_n. Throws DivergenceError for non-summable descriptors and
/// NotApplicable when the family offers no certified tail bound.
Certified integral_mu(const TailSequence& seq, const AtomObservable& v, double tol = 1e-12);

/// sum_n v_n a_n.
Certified integral_lambda(const TailSequence& seq, const AtomObservable& v, double tol = 1e-12);

/// Certified upper bound on sum_{n > K} |v_n| t_n.
double mu_tail_bound(const TailSequence& seq, const AtomObservable& v, Index K);

/// mu_alpha([a, b]) for 0 < a <= b <= 1.
double mu_interval(const TailSequence& seq, double a, double b);

/// Step data of h_alpha on A_1..A_n_max: both endpoints of each atom.
std::vector<std::pair<double, double>> density_steps(const TailSequence& seq, Index n_max);

}  // namespace farey
