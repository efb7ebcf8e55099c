#include "farey/ekstrom.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace farey {

EkstromFunction EkstromFunction::build(SlopeRule slopes) {
  if (!slopes) throw ValidationError("ekstrom: slope rule is empty");
  auto knots = std::make_shared<Knots>();
  knots->slopes = std::move(slopes);
  double previous = knots->slopes(1);
  if (!(previous > 0.0) || !std::isfinite(previous)) {
    throw ValidationError("ekstrom: c_1 must be positive and finite");
  }
  for (Index k = 2; k <= 64; ++k) {
    const double ck = knots->slopes(k);
    if (!(ck > 0.0)) throw ValidationError("ekstrom: c_" + std::to_string(k) + " is not positive");
    if (!(ck < previous)) {
      throw ValidationError("ekstrom: slopes must be strictly decreasing (c_" + std::to_string(k) +
                            " >= c_" + std::to_string(k - 1) + ")");
    }
    previous = ck;
  }
  knots->c.push_back(knots->slopes(1));
  knots->x.push_back(0.0);
  knots->b.push_back(0.0);
  return EkstromFunction(std::move(knots));
}

EkstromFunction EkstromFunction::power_slopes(double scale, double power) {
  if (!(scale > 0.0) || !(power > 0.0)) {
    throw ValidationError("ekstrom: scale and power must be positive");
  }
  EkstromFunction f = build([scale, power](Index k) {
    return scale * std::pow(static_cast<double>(k), -power);
  });
  f.scale_ = scale;
  f.power_ = power;
  return f;
}

// Caller holds the mutex.
static void extend_one(std::vector<double>& c, std::vector<double>& x, std::vector<double>& b,
                       const EkstromFunction::SlopeRule& slopes) {
  const Index k = static_cast<Index>(c.size());
  const double ck = c.back();
  const double next_c = slopes(k + 1);
  if (!(next_c > 0.0) || !(next_c < ck)) {
    throw ValidationError("ekstrom: slopes must be positive and strictly decreasing (at k = " +
                          std::to_string(k + 1) + ")");
  }
  const double next_x = static_cast<double>(k) / (2.0 * ck * ck);
  x.push_back(next_x);
  b.push_back((ck - next_c) * next_x + b.back());
  c.push_back(next_c);
}

void EkstromFunction::ensure_pieces(Index k) const {
  std::lock_guard lock(knots_->mutex);
  while (static_cast<Index>(knots_->c.size()) < k + 1) {
    extend_one(knots_->c, knots_->x, knots_->b, knots_->slopes);
  }
}

void EkstromFunction::ensure_covering(double u) const {
  std::lock_guard lock(knots_->mutex);
  while (knots_->x.back() <= u) {
    extend_one(knots_->c, knots_->x, knots_->b, knots_->slopes);
  }
}

double EkstromFunction::slope(Index k) const {
  if (k < 1) throw DomainError("ekstrom: piece index must be >= 1");
  ensure_pieces(k);
  std::lock_guard lock(knots_->mutex);
  return knots_->c[static_cast<std::size_t>(k - 1)];
}

double EkstromFunction::knot(Index k) const {
  if (k < 1) throw DomainError("ekstrom: knot index must be >= 1");
  ensure_pieces(k);
  std::lock_guard lock(knots_->mutex);
  return knots_->x[static_cast<std::size_t>(k - 1)];
}

double EkstromFunction::intercept(Index k) const {
  if (k < 1) throw DomainError("ekstrom: knot index must be >= 1");
  ensure_pieces(k);
  std::lock_guard lock(knots_->mutex);
  return knots_->b[static_cast<std::size_t>(k - 1)];
}

Index EkstromFunction::piece(double u) const {
  if (!(u >= 0.0)) throw DomainError("ekstrom: m is defined on [0, inf)");
  ensure_covering(u);
  std::lock_guard lock(knots_->mutex);
  const auto& x = knots_->x;
  // x is strictly increasing with x[0] = 0 <= u < x.back().
  const auto it = std::upper_bound(x.begin(), x.end(), u);
  return static_cast<Index>(it - x.begin());
}

double EkstromFunction::log_profile(double u) const {
  const Index k = piece(u);
  std::lock_guard lock(knots_->mutex);
  const auto i = static_cast<std::size_t>(k - 1);
  return knots_->c[i] * u + knots_->b[i];
}

double EkstromFunction::operator()(double x) const {
  if (!(x >= 1.0)) throw DomainError("ekstrom: l is defined on [1, inf)");
  return std::exp(log_profile(std::log(x)));
}

double EkstromFunction::log_increment(double u, double width) const {
  if (!(width >= 0.0)) throw DomainError("ekstrom: increment width must be non-negative");
  const Index first = piece(u);
  const Index last = piece(u + width);
  std::lock_guard lock(knots_->mutex);
  const auto& c = knots_->c;
  const auto& x = knots_->x;
  if (first == last) return c[static_cast<std::size_t>(first - 1)] * width;
  auto i = static_cast<std::size_t>(first - 1);
  double total = c[i] * (x[i + 1] - u);
  for (++i; i + 1 < static_cast<std::size_t>(last); ++i) total += c[i] * (x[i + 1] - x[i]);
  total += c[i] * ((u + width) - x[i]);
  return total;
}

}  // namespace farey
