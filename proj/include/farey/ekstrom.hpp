#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <vector>

#include "farey/errors.hpp"

namespace farey {

/// Slowly varying function l(x) = exp(m(ln x)) whose log-log profile m is
/// piecewise linear with decreasing slopes c_k on [x_k, x_{k+1}], where
///
///   x_1 = b_1 = 0,  x_{k+1} = k / (2 c_k^2),  b_{k+1} = (c_k - c_{k+1}) x_{k+1} + b_k,
///   m(u) = c_k u + b_k  for u in [x_k, x_{k+1}].
///
/// Used as a wandering rate that is slowly varying but not moderately increasing.
/// Knots are generated on demand; the knot table is append-only and guarded.
class EkstromFunction {
 public:
  using SlopeRule = std::function<double(Index)>;

  /// Validates that c is positive and strictly decreasing over the first 64 terms;
  /// later terms are checked as knots are generated.
  static EkstromFunction build(SlopeRule slopes);

  /// c_k = scale * k^{-power}.
  static EkstromFunction power_slopes(double scale = 1.0, double power = 1.0);

  double slope(Index k) const;
  /// x_k (log-scale knot position), k >= 1.
  double knot(Index k) const;
  /// b_k, k >= 1.
  double intercept(Index k) const;

  /// Piece index k with x_k <= u < x_{k+1}.
  Index piece(double u) const;
  double log_profile(double u) const;  // m(u), u >= 0
  double operator()(double x) const;   // l(x), x >= 1
  /// m(u + width) - m(u), accumulated piece by piece. Passing the width
  /// separately keeps c_k * log1p(1/n) accurate for neighbouring integers.
  double log_increment(double u, double width) const;

  double scale() const { return scale_; }
  double power() const { return power_; }

 private:
  struct Knots {
    SlopeRule slopes;
    std::vector<double> c;  // c[k-1] = c_k
    std::vector<double> x;  // x[k-1] = x_k
    std::vector<double> b;  // b[k-1] = b_k
    std::mutex mutex;
  };

  explicit EkstromFunction(std::shared_ptr<Knots> knots) : knots_(std::move(knots)) {}
  void ensure_pieces(Index k) const;
  void ensure_covering(double u) const;

  std::shared_ptr<Knots> knots_;
  double scale_ = 0.0;
  double power_ = 0.0;
};

}  // namespace farey
