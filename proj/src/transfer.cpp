#include "farey/transfer.hpp"

#include <cmath>
#include <sstream>

#include "farey/compensated.hpp"
#include "farey/map.hpp"

namespace farey {

TransferState TransferState::from_observable(const AtomObservable& v, Index M) {
  if (M < 1) throw DomainError("transfer state needs at least one atom");
  TransferState s;
  s.coeffs = v.prefix(M);
  s.value_at_one = v.value_at_one();
  s.trunc = M;
  s.exact_prefix = M;
  return s;
}

TransferState TransferState::from_coeffs(std::vector<double> u, double value_at_one) {
  if (u.empty()) throw DomainError("transfer state needs at least one atom");
  TransferState s;
  s.trunc = static_cast<Index>(u.size());
  s.exact_prefix = s.trunc;
  s.coeffs = std::move(u);
  s.value_at_one = value_at_one;
  return s;
}

TransferKernel::TransferKernel(const TailSequence& seq, Index M) {
  seq.prewarm(M + 1);
  ratio_.resize(static_cast<std::size_t>(M));
  hazard_.resize(static_cast<std::size_t>(M));
  for (Index n = 1; n <= M; ++n) {
    hazard_[static_cast<std::size_t>(n - 1)] = seq.hazard(n);
    ratio_[static_cast<std::size_t>(n - 1)] = seq.tail_ratio(n);
  }
}

Index TransferKernel::step(TransferState& state) const {
  if (state.exact_prefix < 2) {
    throw StateError("transfer step: light cone exhausted; rebuild with a larger truncation");
  }
  if (state.exact_prefix > size()) throw StateError("transfer step: kernel shorter than the state");
  const Index len = state.exact_prefix - 1;
  double* u = state.coeffs.data();
  const double* r = ratio_.data();
  const double* q = hazard_.data();
  const double u1 = u[0];
  // Forward sweep: u[i+1] is read before it is overwritten.
  for (Index i = 0; i < len; ++i) u[i] = r[i] * u[i + 1] + q[i] * u1;
  state.exact_prefix = len;
  state.value_at_one = 0.0;
  ++state.steps_done;
  return len;
}

void transfer_step(const TailSequence& seq, TransferState& state) {
  if (state.exact_prefix < 2) {
    throw StateError("transfer step: light cone exhausted; rebuild with a larger truncation");
  }
  const Index len = state.exact_prefix - 1;
  const double u1 = state.coeffs[0];
  for (Index i = 0; i < len; ++i) {
    const Index n = i + 1;
    state.coeffs[static_cast<std::size_t>(i)] =
        seq.tail_ratio(n) * state.coeffs[static_cast<std::size_t>(i + 1)] + seq.hazard(n) * u1;
  }
  state.exact_prefix = len;
  state.value_at_one = 0.0;
  ++state.steps_done;
}

double transfer_cost(Index n, Index m) {
  const auto N = static_cast<double>(n);
  const auto M = static_cast<double>(m + n);
  return N * M - N * (N + 1.0) / 2.0;
}

double transfer_estimate(Index n, Index m) {
  return static_cast<double>(n) * static_cast<double>(n + m);
}

namespace {

void check_budget(Index n, Index m, double budget) {
  const double estimate = transfer_estimate(n, m);
  if (estimate > budget) {
    std::ostringstream msg;
    msg << "transfer iteration needs about " << estimate << " coefficient updates (budget " << budget << ")";
    throw BudgetError(msg.str(), estimate, budget);
  }
}

}  // namespace

IterateResult transfer_iterate(const TailSequence& seq, const AtomObservable& v, Index n, Index m,
                               double budget, Index extra) {
  if (n < 0 || m < 1 || extra < 0) throw DomainError("transfer_iterate: need n >= 0, m >= 1");
  check_budget(n, m + extra, budget);
  const Index M = m + n + extra;
  auto state = TransferState::from_observable(v, M);
  IterateResult out;
  if (n > 0) {
    const TransferKernel kernel(seq, M);
    for (Index s = 0; s < n; ++s) out.updates += static_cast<double>(kernel.step(state));
  }
  out.coeffs.assign(state.coeffs.begin(), state.coeffs.begin() + m);
  out.value_at_one = state.value_at_one;
  out.trunc = M;
  return out;
}

TransferRun::TransferRun(const TailSequence& seq, const AtomObservable& v, Index n_max, Index m, double budget)
    : state_((check_budget(n_max, m, budget), TransferState::from_observable(v, m + n_max))),
      kernel_(seq, m + n_max),
      m_(m),
      estimate_(transfer_estimate(n_max, m)) {}

void TransferRun::advance_to(Index n) {
  if (n < state_.steps_done) throw StateError("transfer run cannot step backwards");
  while (state_.steps_done < n) updates_ += static_cast<double>(kernel_.step(state_));
  if (state_.exact_prefix < m_) throw StateError("transfer run advanced beyond its light cone");
}

double TransferRun::coeff(Index j) const {
  if (j < 1 || j > m_) throw DomainError("transfer run: atom outside the evaluated prefix");
  return state_.coeffs[static_cast<std::size_t>(j - 1)];
}

double transfer_pointwise_oracle(const TailSequence& seq, const std::function<double(double)>& v, double x,
                                 Index n) {
  if (n < 0 || n > 22) throw BudgetError("pointwise oracle enumerates 2^n words; n must be <= 22",
                                         std::ldexp(1.0, static_cast<int>(std::min<Index>(n, 60))),
                                         std::ldexp(1.0, 22));
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("pointwise oracle: x must lie in (0,1]");
  if (n == 0) return v(x);
  if (x == 1.0) return 0.0;  // every indicator 1_{A_n} vanishes at 1
  const Index k = seq.locate(x);
  const Index top = k + n + 2;
  std::vector<double> t(static_cast<std::size_t>(top + 1)), a(static_cast<std::size_t>(top + 1));
  std::vector<double> r(static_cast<std::size_t>(top + 1)), q(static_cast<std::size_t>(top + 1));
  for (Index j = 1; j <= top; ++j) {
    const auto i = static_cast<std::size_t>(j);
    t[i] = seq.tail(j);
    a[i] = seq.atom_length(j);
    r[i] = seq.tail_ratio(j);
    q[i] = seq.hazard(j);
  }
  const double a1 = a[1];
  // Depth-first over words: the letter applied first decides the weight from
  // the current atom, then the point moves by the inverse branch.
  std::function<double(Index, Index, double)> rec = [&](Index depth, Index m, double y) -> double {
    if (depth == 0) return v(y);
    const auto i = static_cast<std::size_t>(m);
    const double y0 = t[i + 2] + (y - t[i + 1]) * a[i + 1] / a[i];
    const double y1 = 1.0 - a1 * y;
    return r[i] * rec(depth - 1, m + 1, y0) + q[i] * rec(depth - 1, 1, y1);
  };
  return rec(n, k, x);
}

PerronResult perron_apply(const TailSequence& seq, const std::vector<double>& f) {
  if (f.size() < 2) throw DomainError("perron_apply: need at least two coefficients");
  PerronResult out;
  const double a1 = seq.atom_length(1);
  const double base = a1 * f[0];
  out.coeffs.resize(f.size() - 1);
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const auto n = static_cast<Index>(i + 1);
    out.coeffs[i] = base + seq.atom_length(n + 1) / seq.atom_length(n) * f[i + 1];
  }
  out.value_at_one = base;
  return out;
}

std::vector<double> renewal_sequence(const TailSequence& seq, Index n_max, double budget) {
  if (n_max < 0) throw DomainError("renewal_sequence: n_max must be >= 0");
  const double estimate = 0.5 * static_cast<double>(n_max) * static_cast<double>(n_max + 1);
  if (estimate > budget) {
    throw BudgetError("renewal sequence needs about " + std::to_string(estimate) + " multiply-adds", estimate,
                      budget);
  }
  std::vector<double> a(static_cast<std::size_t>(n_max + 1));
  for (Index k = 1; k <= n_max; ++k) a[static_cast<std::size_t>(k)] = seq.atom_length(k);
  std::vector<double> u(static_cast<std::size_t>(n_max + 1));
  u[0] = 1.0;
  for (Index n = 1; n <= n_max; ++n) {
    // Four interleaved partial sums; the order is fixed, so results are reproducible.
    double s[4] = {0.0, 0.0, 0.0, 0.0};
    const double* ak = a.data();
    const double* un = u.data() + n;
    Index k = 1;
    for (; k + 3 <= n; k += 4) {
      s[0] += ak[k] * un[-k];
      s[1] += ak[k + 1] * un[-k - 1];
      s[2] += ak[k + 2] * un[-k - 2];
      s[3] += ak[k + 3] * un[-k - 3];
    }
    for (; k <= n; ++k) s[0] += ak[k] * un[-k];
    u[static_cast<std::size_t>(n)] = (s[0] + s[1]) + (s[2] + s[3]);
  }
  return u;
}

double induced_R_n(const TailSequence& seq, const BetaConstant& u, Index n) {
  if (n < 1) throw DomainError("R_n: n must be >= 1");
  const double un = static_cast<std::size_t>(n) <= u.values.size() ? u.values[static_cast<std::size_t>(n - 1)] : 0.0;
  return seq.atom_length(n) * un;
}

double induced_R1(const TailSequence& seq, const BetaConstant& u) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < u.values.size(); ++i) sum += seq.atom_length(static_cast<Index>(i + 1)) * u.values[i];
  return sum.value();
}

InducedDuality induced_duality(const TailSequence& seq, const BetaConstant& u, const BetaConstant& w) {
  InducedDuality out;
  const double h1 = seq.density_coeff(1);
  // int_{A_1-bar} w dmu, cylinder by cylinder.
  CompensatedSum w_mass;
  for (std::size_t m = 0; m < w.values.size(); ++m) {
    w_mass += w.values[m] * h1 * return_cylinder(seq, static_cast<Index>(m + 1)).length();
  }
  out.lhs = induced_R1(seq, u) * w_mass.value();

  // G is affine from each cylinder onto A_1-bar; the preimage of {phi = m} inside
  // {phi = n} has length len_m / |G'|.
  CompensatedSum rhs;
  for (std::size_t n = 0; n < u.values.size(); ++n) {
    if (u.values[n] == 0.0) continue;
    const auto cyl = return_cylinder(seq, static_cast<Index>(n + 1));
    const double mid = 0.5 * (cyl.left + cyl.right);
    const double h = 0.25 * cyl.length();
    const double slope = std::fabs(induced_apply(seq, mid + h) - induced_apply(seq, mid - h)) / (2.0 * h);
    for (std::size_t m = 0; m < w.values.size(); ++m) {
      const double len = return_cylinder(seq, static_cast<Index>(m + 1)).length();
      rhs += u.values[n] * w.values[m] * h1 * len / slope;
    }
  }
  out.rhs = rhs.value();
  return out;
}

}  // namespace farey
