#include "farey/measure.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <limits>

#include "farey/compensated.hpp"

namespace farey {

GammaConsts gamma_consts(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in (0,1]");
  GammaConsts g;
  g.delta = delta;
  g.gamma_delta = 1.0 / (std::tgamma(1.0 + delta) * std::tgamma(2.0 - delta));
  g.gamma_bar = delta < 1.0 ? std::tgamma(1.0 - delta) / std::tgamma(2.0 - delta)
                            : std::numeric_limits<double>::infinity();
  g.gamma_bar_dual = std::tgamma(delta) / std::tgamma(1.0 + delta);
  return g;
}

namespace {

constexpr double kIndexLimit = 4.0e18;
constexpr Index kMaxDirect = Index{1} << 24;

enum class Weight { Tail, Atom };

PowerBound require_bound(const TailSequence& seq) {
  auto b = seq.power_bound();
  if (!b) throw NotApplicable("no certified tail bound is available for the " + seq.name() + " family");
  return *b;
}

double weight(const TailSequence& seq, Weight w, Index n) {
  return w == Weight::Tail ? seq.tail(n) : seq.atom_length(n);
}

// sum_{j=A}^{B} t_j (or a_j) for a block that may lie beyond the Index range.
// Returns {value, error bound}.
std::pair<double, double> block_sum(const TailSequence& seq, Weight w, double A, double B) {
  if (B < kIndexLimit) {
    const auto a = static_cast<Index>(A);
    const auto b = static_cast<Index>(B);
    const double v = w == Weight::Tail ? seq.tail_range_sum(a, b) : seq.atom_range_sum(a, b);
    return {v, 4e-16 * std::fabs(v)};
  }
  const auto pb = require_bound(seq);
  if (!seq.has_continuation(A)) throw NotApplicable("block beyond the family's continuation");
  const double d = pb.exponent;
  if (w == Weight::Atom) {
    const double v = seq.tail_at(A) * -std::expm1(-d * std::log1p((B + 1.0 - A) / A));
    return {v, 1e-14 * v};
  }
  // Midpoint integral of coef x^{-d}; the Euler-Maclaurin remainder is O(A^{-2}) relative.
  const double lo = A - 0.5;
  const double span = B + 1.0 - A;
  const double v = d == 1.0 ? pb.coef * std::log1p(span / lo)
                            : pb.coef * std::pow(lo, 1.0 - d) * std::expm1((1.0 - d) * std::log1p(span / lo)) / (1.0 - d);
  return {v, v * (1e-14 + 1.0 / (A * A))};
}

// Sum over n > N of g(n) for convex decreasing g with a real continuation:
// int_N^inf g + g(N)/2 <= sum_{n>=N} g(n) <= int_{N-1/2}^inf g.
std::pair<double, double> convex_tail(const std::function<double(double)>& g, double N) {
  boost::math::quadrature::exp_sinh<double> integrator;
  double err_hi = 0.0;
  double err_lo = 0.0;
  const double upper = integrator.integrate([&](double u) { return g(N - 0.5 + u); }, 1e-14, &err_hi);
  const double lower = integrator.integrate([&](double u) { return g(N + u); }, 1e-14, &err_lo) + 0.5 * g(N);
  const double mid = 0.5 * (upper + lower);
  return {mid, 0.5 * std::fabs(upper - lower) + err_hi + err_lo + 1e-15 * std::fabs(mid)};
}

Certified power_tail_integral(const TailSequence& seq, const AtomObservable& v, Weight w, double tol) {
  const auto& t = v.tail();
  const auto pb = require_bound(seq);
  // |v_n| t_n <= coef C n^{e - d};  |v_n| a_n <= coef C d n^{e - d - 1}.
  const double decay = w == Weight::Tail ? t.exponent - pb.exponent : t.exponent - pb.exponent - 1.0;
  if (!(decay < -1.0)) {
    throw DivergenceError("observable with growth n^" + std::to_string(t.exponent) +
                          " is not integrable for this family");
  }
  const bool smooth = static_cast<bool>(v.continuation()) && seq.has_continuation(1.0);
  Certified out;
  CompensatedSum sum;
  Index n = 1;
  Index N = Index{1} << 12;
  while (true) {
    N = std::max(N, pb.from + 1);
    for (; n < N; ++n) sum += v.coeff(n) * weight(seq, w, n);
    double tail_value = 0.0;
    double tail_bound = 0.0;
    if (smooth) {
      auto g = [&](double x) {
        return v.continuation()(x) * (w == Weight::Tail ? seq.tail_at(x) : seq.atom_at(x));
      };
      std::tie(tail_value, tail_bound) = convex_tail(g, static_cast<double>(N));
    } else {
      const double c = t.coef * pb.coef * (w == Weight::Atom ? pb.exponent : 1.0);
      const double x = static_cast<double>(N) - 1.0;
      tail_bound = c * std::pow(x, decay + 1.0) / (-(decay + 1.0));
    }
    out.value = sum.value() + tail_value;
    out.bound = tail_bound + 1e-15 * std::fabs(out.value);
    out.terms = N - 1;
    if (out.bound < tol || N >= kMaxDirect) break;
    N *= 4;
  }
  return out;
}

Certified counterexample_integral(const TailSequence& seq, const CounterexampleParams& p, Weight w,
                                  double tol) {
  const auto pb = require_bound(seq);
  const double d = pb.exponent;
  // Per-block majorant ratio: s_k (n_k+1) t_{N_k-n_k} ~ 2^{k(g2 - g3 - d g1)}, or
  // s_k t_{N_k-n_k} ~ 2^{-k(g3 + d g1)} for the atom weights.
  const double log_ratio = w == Weight::Tail ? p.g2 - p.g3 - d * p.g1 : -p.g3 - d * p.g1;
  if (!(log_ratio < 0.0)) {
    throw DivergenceError("counterexample blocks are not summable for this family (delta g1 <= g2 - g3)");
  }
  const double r = std::exp2(log_ratio);
  auto remainder = [&](Index K) {
    // Bound on the blocks k > K, using N_k - n_k >= 2^{g1 k} (1 - 2^{(g2-g1)(K+1)}).
    const double shrink = -std::expm1((p.g2 - p.g1) * static_cast<double>(K + 1) * M_LN2);
    const double lead = (w == Weight::Tail ? 2.0 : 1.0) * pb.coef * std::pow(shrink, -d);
    return lead * std::pow(r, static_cast<double>(K + 1)) / (1.0 - r);
  };
  Certified out;
  CompensatedSum sum;
  double err = 0.0;
  Index k = 1;
  for (;; ++k) {
    const double A = p.block_start(k);
    const double B = p.block_end(k);
    if (!(p.g1 * static_cast<double>(k) < 900.0)) break;
    const auto [value, e] = block_sum(seq, w, A, B);
    sum += p.height(k) * value;
    err += p.height(k) * e;
    out.terms += static_cast<Index>(std::min(B - A + 1.0, 1e18));
    if (A >= static_cast<double>(pb.from) && remainder(k) < 0.5 * tol) break;
  }
  out.value = sum.value();
  out.bound = remainder(k) + err;
  return out;
}

Certified integral(const TailSequence& seq, const AtomObservable& v, Weight w, double tol) {
  const auto& t = v.tail();
  switch (t.kind) {
    case TailKind::FiniteSupport: {
      CompensatedSum sum;
      for (Index n = 1; n <= t.support; ++n) {
        const double c = v.coeff(n);
        if (c != 0.0) sum += c * weight(seq, w, n);
      }
      return {sum.value(), 0.0, t.support};
    }
    case TailKind::Constant:
      if (t.value == 0.0) return {0.0, 0.0, 0};
      if (w == Weight::Tail) throw DivergenceError("a non-zero constant is not integrable against mu_alpha");
      return {t.value, 0.0, 0};
    case TailKind::PowerTail:
      return power_tail_integral(seq, v, w, tol);
    case TailKind::Counterexample:
      return counterexample_integral(seq, *t.params, w, tol);
  }
  return {};
}

}  // namespace

Certified integral_mu(const TailSequence& seq, const AtomObservable& v, double tol) {
  return integral(seq, v, Weight::Tail, tol);
}

Certified integral_lambda(const TailSequence& seq, const AtomObservable& v, double tol) {
  return integral(seq, v, Weight::Atom, tol);
}

double mu_tail_bound(const TailSequence& seq, const AtomObservable& v, Index K) {
  const auto& t = v.tail();
  switch (t.kind) {
    case TailKind::FiniteSupport: {
      CompensatedSum sum;
      for (Index n = K + 1; n <= t.support; ++n) sum += std::fabs(v.coeff(n)) * seq.tail(n);
      return sum.value() * (1.0 + 1e-15);
    }
    case TailKind::Constant:
      if (t.value == 0.0) return 0.0;
      throw DivergenceError("a non-zero constant is not integrable against mu_alpha");
    case TailKind::PowerTail: {
      const auto pb = require_bound(seq);
      const double e = t.exponent - pb.exponent;
      if (!(e < -1.0)) throw DivergenceError("power tail is not integrable against mu_alpha");
      const double x = static_cast<double>(std::max(K, pb.from));
      double head = 0.0;
      for (Index n = K + 1; n <= pb.from; ++n) head += std::fabs(v.coeff(n)) * seq.tail(n);
      return head + t.coef * pb.coef * std::pow(x, e + 1.0) / (-(e + 1.0));
    }
    case TailKind::Counterexample: {
      const auto& p = *t.params;
      const auto pb = require_bound(seq);
      const double d = pb.exponent;
      const double log_ratio = p.g2 - p.g3 - d * p.g1;
      if (!(log_ratio < 0.0)) throw DivergenceError("counterexample blocks are not summable for this family");
      const double r = std::exp2(log_ratio);
      const double kx = static_cast<double>(K);
      double bound = 0.0;
      Index k = 1;
      for (; p.g1 * static_cast<double>(k) < 900.0; ++k) {
        const double A = p.block_start(k);
        const double B = p.block_end(k);
        if (B <= kx) continue;
        const double lo = std::max(A, kx + 1.0);
        const double t_lo = lo < kIndexLimit && lo < static_cast<double>(pb.from)
                                ? seq.tail(static_cast<Index>(lo))
                                : pb.coef * std::pow(lo, -d);
        bound += p.height(k) * (B - lo + 1.0) * t_lo;
        if (A >= static_cast<double>(pb.from) && std::pow(r, static_cast<double>(k)) < 1e-18 * bound) break;
      }
      const double shrink = -std::expm1((p.g2 - p.g1) * static_cast<double>(k + 1) * M_LN2);
      bound += 2.0 * pb.coef * std::pow(shrink, -d) * std::pow(r, static_cast<double>(k + 1)) / (1.0 - r);
      return bound * (1.0 + 1e-14);
    }
  }
  return 0.0;
}

double mu_interval(const TailSequence& seq, double a, double b) {
  if (a == 0.0) throw DivergenceError("mu_alpha of an interval reaching 0 is infinite");
  if (!(a > 0.0 && a <= b && b <= 1.0)) throw DomainError("mu_interval: need 0 < a <= b <= 1");
  const Index na = seq.locate(std::min(a, std::nextafter(1.0, 0.0)));
  const Index nb = b >= 1.0 ? 1 : seq.locate(b);
  auto h = [&](Index n) { return seq.density_coeff(n); };
  if (na == nb) return h(na) * (b - a);
  CompensatedSum sum;
  sum += h(nb) * (b - seq.tail(nb + 1));
  sum += h(na) * (seq.tail(na) - a);
  if (na - nb > 1) sum += seq.tail_range_sum(nb + 1, na - 1);
  return sum.value();
}

std::vector<std::pair<double, double>> density_steps(const TailSequence& seq, Index n_max) {
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(2 * n_max));
  for (Index n = n_max; n >= 1; --n) {
    const double h = seq.density_coeff(n);
    out.emplace_back(seq.tail(n + 1), h);
    out.emplace_back(seq.tail(n), h);
  }
  return out;
}

}  // namespace farey
