#include "farey/varying.hpp"

#include <cmath>
#include <mutex>

#include "farey/compensated.hpp"
#include "farey/measure.hpp"

namespace farey {

struct WanderingRate::Prefix {
  static constexpr Index kBlock = Index{1} << 16;

  std::mutex mutex;
  std::vector<double> w{0.0};  // w[0] = 0
  CompensatedSum acc;
};

WanderingRate::WanderingRate(TailSequence seq)
    : seq_(std::move(seq)), prefix_(std::make_shared<Prefix>()) {}

void WanderingRate::prewarm(Index n) const {
  std::lock_guard lock(prefix_->mutex);
  auto& w = prefix_->w;
  const auto have = static_cast<Index>(w.size()) - 1;
  if (have >= n) return;
  const Index target = ((n + Prefix::kBlock - 1) / Prefix::kBlock) * Prefix::kBlock;
  seq_.prewarm(target);
  w.reserve(static_cast<std::size_t>(target + 1));
  for (Index k = have + 1; k <= target; ++k) {
    prefix_->acc += seq_.tail(k);
    w.push_back(prefix_->acc.value());
  }
}

double WanderingRate::wandering(Index n) const {
  if (n < 1) throw DomainError("wandering: index must be >= 1");
  {
    std::lock_guard lock(prefix_->mutex);
    if (static_cast<std::size_t>(n) < prefix_->w.size()) return prefix_->w[static_cast<std::size_t>(n)];
  }
  prewarm(n);
  std::lock_guard lock(prefix_->mutex);
  return prefix_->w[static_cast<std::size_t>(n)];
}

double karamata_diag(const WanderingRate& w, Index n) {
  const auto& seq = w.sequence();
  if (seq.delta() >= 1.0) throw NotApplicable("karamata_diag: Gbar_delta is undefined at delta = 1");
  const auto g = gamma_consts(seq.delta());
  const double x = static_cast<double>(n);
  // n^{1-delta} l(n) = n t_n
  return w(n) / (g.gamma_bar * x * seq.tail(n));
}

double moderate_ratio(const WanderingRate& w, Index n) {
  const double wn = w(n);
  const double arg = std::ceil(static_cast<double>(n) / (wn * wn));
  const Index m = std::max<Index>(1, static_cast<Index>(arg));
  return wn / w(m);
}

ModerateScan moderate_scan(const WanderingRate& w, Index n_max, double threshold) {
  w.prewarm(n_max);
  ModerateScan scan;
  for (Index n = 1; n <= n_max; ++n) {
    const double r = moderate_ratio(w, n);
    if (r > scan.sup) {
      scan.sup = r;
      scan.argmax = n;
    }
    if (scan.first_exceeding == 0 && r > threshold) scan.first_exceeding = n;
  }
  return scan;
}

EkstromFunction ekstrom_build(EkstromFunction::SlopeRule c) { return EkstromFunction::build(std::move(c)); }

double sv_probe(const RealFunction& l, double eta, double x) {
  if (!(eta > 0.0)) throw DomainError("sv_probe: eta must be positive");
  return l(eta * x) / l(x);
}

PowerSandwich power_sandwich(const RealFunction& l, double b, double x) {
  const double v = l(x);
  return {v * std::pow(x, -b), v * std::pow(x, b)};
}

double increasing_inverse(const RealFunction& l, double y, double lo) {
  if (!(l(lo) <= y)) throw DomainError("increasing_inverse: target below l(lo)");
  double hi = 2.0 * lo;
  while (l(hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw DomainError("increasing_inverse: target not reached");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    const double m = (mid > lo && mid < hi) ? mid : 0.5 * (lo + hi);
    (l(m) < y ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

double inverse_ratio_probe(const RealFunction& l, double c, double y, double lo) {
  if (!(c > 0.0 && c < 1.0)) throw DomainError("inverse_ratio_probe: c must lie in (0,1)");
  return increasing_inverse(l, c * y, lo) / increasing_inverse(l, y, lo);
}

double log_mean_ratio(const RealFunction& l, Index n) {
  if (n < 1) throw DomainError("log_mean_ratio: index must be >= 1");
  CompensatedSum m;
  for (Index k = 1; k <= n; ++k) m += l(static_cast<double>(k)) / static_cast<double>(k);
  return l(static_cast<double>(n)) / m.value();
}

}  // namespace farey
