#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "farey/ekstrom.hpp"
#include "farey/partition.hpp"

namespace farey {

/// Partial sums w_n = t_1 + ... + t_n, kept as a dense compensated prefix that
/// grows in blocks of 2^16. Copies share the prefix. Growth is serialised
/// internally, so concurrent readers are safe.
class WanderingRate {
 public:
  explicit WanderingRate(TailSequence seq);

  double operator()(Index n) const { return wandering(n); }
  double wandering(Index n) const;
  const TailSequence& sequence() const { return seq_; }
  void prewarm(Index n) const;

 private:
  struct Prefix;
  TailSequence seq_;
  std::shared_ptr<Prefix> prefix_;
};

/// w_n / (Gbar_delta n^{1-delta} l(n)) with l(n) = t_n n^delta. Throws
/// NotApplicable for delta = 1, where Gbar has a pole.
double karamata_diag(const WanderingRate& w, Index n);

/// w_n / w_{max(1, ceil(n / w_n^2))}.
double moderate_ratio(const WanderingRate& w, Index n);

struct ModerateScan {
  double sup = 1.0;
  Index argmax = 1;
  /// First n with ratio > threshold, 0 if none.
  Index first_exceeding = 0;
};
ModerateScan moderate_scan(const WanderingRate& w, Index n_max, double threshold = 10.0);

EkstromFunction ekstrom_build(EkstromFunction::SlopeRule c);

using RealFunction = std::function<double(double)>;

/// l(eta x) / l(x).
double sv_probe(const RealFunction& l, double eta, double x);

/// l(x) x^{-b} and l(x) x^{b}.
struct PowerSandwich {
  double damped = 0.0;
  double boosted = 0.0;
};
PowerSandwich power_sandwich(const RealFunction& l, double b, double x);

/// Inverse of a continuous strictly increasing l, by bracketing on [lo, inf).
double increasing_inverse(const RealFunction& l, double y, double lo = 1.0);

/// L^{-1}(c y) / L^{-1}(y) for c in (0,1).
double inverse_ratio_probe(const RealFunction& l, double c, double y, double lo = 1.0);

/// L(n) / M(n) with M(n) = sum_{k=1}^{n} L(k)/k.
double log_mean_ratio(const RealFunction& l, Index n);

}  // namespace farey
