#include "farey/partition.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <shared_mutex>
#include <sstream>

#include "farey/compensated.hpp"

namespace farey {

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::PowerLaw: return "power";
    case FamilyKind::Delta1Harmonic: return "delta1_harmonic";
    case FamilyKind::ExpSqrtLog: return "exp_sqrt_log";
    case FamilyKind::ExpLogOverLogLog: return "exp_log_over_loglog";
    case FamilyKind::CustomTable: return "custom_table";
    case FamilyKind::Ekstrom: return "ekstrom";
  }
  return "unknown";
}

FamilyKind family_kind_from_string(const std::string& name) {
  for (auto kind : {FamilyKind::PowerLaw, FamilyKind::Delta1Harmonic, FamilyKind::ExpSqrtLog,
                    FamilyKind::ExpLogOverLogLog, FamilyKind::CustomTable, FamilyKind::Ekstrom}) {
    if (to_string(kind) == name) return kind;
  }
  throw ValidationError("unknown family kind '" + name + "'");
}

double power_range_sum(double delta, Index a, Index b) {
  if (a < 1) throw DomainError("power_range_sum: indices start at 1");
  if (b < a) return 0.0;
  constexpr Index kDirect = 1000;
  CompensatedSum sum;
  for (Index j = a; j <= std::min(b, kDirect - 1); ++j) {
    sum += delta == 1.0 ? 1.0 / static_cast<double>(j) : std::pow(static_cast<double>(j), -delta);
  }
  const Index lo_index = std::max(a, kDirect);
  if (lo_index > b) return sum.value();

  // Midpoint Euler-Maclaurin on [lo - 1/2, hi + 1/2] with the g' and g''' corrections;
  // the first omitted term is O(x^{-5-delta}) relative to x^{-delta}, below 1e-17 here.
  const double lo = static_cast<double>(lo_index) - 0.5;
  const double hi = static_cast<double>(b) + 0.5;
  const double width = hi - lo;
  double integral = 0.0;
  if (delta == 1.0) {
    integral = std::log1p(width / lo);
  } else {
    integral = std::pow(lo, 1.0 - delta) * std::expm1((1.0 - delta) * std::log1p(width / lo)) /
               (1.0 - delta);
  }
  const double d1 = (delta / 24.0) * (std::pow(hi, -delta - 1.0) - std::pow(lo, -delta - 1.0));
  const double k3 = delta * (delta + 1.0) * (delta + 2.0);
  const double d3 = -(7.0 / 5760.0) * k3 * (std::pow(hi, -delta - 3.0) - std::pow(lo, -delta - 3.0));
  sum += integral;
  sum += d1;
  sum += d3;
  return sum.value();
}

namespace detail {

class TailModel {
 public:
  virtual ~TailModel() = default;
  virtual double tail(Index n) const = 0;
  virtual double atom(Index n) const = 0;
  virtual double hazard(Index n) const { return atom(n) / tail(n); }
  virtual std::optional<Index> locate_guess(double) const { return std::nullopt; }
  virtual Index max_index() const { return std::numeric_limits<Index>::max() / 4; }

  virtual double tail_range_sum(Index a, Index b) const {
    if (b - a > (Index{1} << 28)) {
      throw NotApplicable("tail_range_sum: range too long for direct summation on this family");
    }
    CompensatedSum sum;
    for (Index j = a; j <= b; ++j) sum += tail(j);
    return sum.value();
  }

  virtual double atom_range_sum(Index a, Index b) const {
    if (b - a < 64) {
      CompensatedSum sum;
      for (Index j = a; j <= b; ++j) sum += atom(j);
      return sum.value();
    }
    return tail(a) - tail(b + 1);
  }

  virtual double atom_slowly_varying(double) const {
    throw NotApplicable("atom_slowly_varying: no analytic atom-length rule for this family");
  }
  virtual std::optional<PowerBound> power_bound() const { return std::nullopt; }
  virtual double continuation_from() const { return std::numeric_limits<double>::infinity(); }
  virtual double tail_at(double) const { throw NotApplicable("no real-argument continuation"); }
  virtual double atom_at(double) const { throw NotApplicable("no real-argument continuation"); }
  virtual void prewarm(Index) const {}
};

namespace {

// -expm1(-delta * log1p(1/x)) = 1 - (x/(x+1))^delta, i.e. a/t for a power tail.
double power_hazard(double delta, double x) {
  return -std::expm1(-delta * std::log1p(1.0 / x));
}

class PowerModel final : public TailModel {
 public:
  explicit PowerModel(double delta) : delta_(delta) {}

  double tail(Index n) const override {
    const auto x = static_cast<double>(n);
    return delta_ == 1.0 ? 1.0 / x : std::pow(x, -delta_);
  }
  double atom(Index n) const override {
    const auto x = static_cast<double>(n);
    if (delta_ == 1.0) return 1.0 / (x * (x + 1.0));
    return tail(n) * power_hazard(delta_, x);
  }
  double hazard(Index n) const override {
    const auto x = static_cast<double>(n);
    return delta_ == 1.0 ? 1.0 / (x + 1.0) : power_hazard(delta_, x);
  }
  std::optional<Index> locate_guess(double x) const override {
    const double guess = std::floor(std::pow(x, -1.0 / delta_));
    if (!(guess < 4e18)) return std::nullopt;
    return std::max<Index>(1, static_cast<Index>(guess));
  }
  double tail_range_sum(Index a, Index b) const override { return power_range_sum(delta_, a, b); }
  double atom_range_sum(Index a, Index b) const override {
    if (b < a) return 0.0;
    const auto x = static_cast<double>(a);
    const auto span = static_cast<double>(b + 1 - a);
    return tail(a) * -std::expm1(-delta_ * std::log1p(span / x));
  }
  double atom_slowly_varying(double x) const override {
    if (delta_ == 1.0) return x / (x + 1.0);
    return x * power_hazard(delta_, x) / delta_;
  }
  std::optional<PowerBound> power_bound() const override { return PowerBound{1.0, delta_, 1}; }
  double continuation_from() const override { return 1.0; }
  double tail_at(double x) const override { return std::pow(x, -delta_); }
  double atom_at(double x) const override { return std::pow(x, -delta_) * power_hazard(delta_, x); }

 private:
  double delta_;
};

class TableModel final : public TailModel {
 public:
  TableModel(std::vector<double> tails, double delta)
      : tails_(std::move(tails)),
        delta_(delta),
        last_(static_cast<Index>(tails_.size())),
        coef_(tails_.back() * std::pow(static_cast<double>(tails_.size()), delta)) {}

  double tail(Index n) const override {
    if (n <= last_) return tails_[static_cast<std::size_t>(n - 1)];
    return coef_ * std::pow(static_cast<double>(n), -delta_);
  }
  double atom(Index n) const override {
    if (n < last_) return tails_[static_cast<std::size_t>(n - 1)] - tails_[static_cast<std::size_t>(n)];
    return tail(n) * power_hazard(delta_, static_cast<double>(n));
  }
  double hazard(Index n) const override {
    if (n < last_) return atom(n) / tail(n);
    return power_hazard(delta_, static_cast<double>(n));
  }
  double tail_range_sum(Index a, Index b) const override {
    if (b < a) return 0.0;
    CompensatedSum sum;
    for (Index j = a; j <= std::min(b, last_); ++j) sum += tail(j);
    const Index from = std::max(a, last_ + 1);
    if (from <= b) sum += coef_ * power_range_sum(delta_, from, b);
    return sum.value();
  }
  std::optional<PowerBound> power_bound() const override { return PowerBound{coef_, delta_, last_}; }
  double continuation_from() const override { return static_cast<double>(last_); }
  double tail_at(double x) const override { return coef_ * std::pow(x, -delta_); }
  double atom_at(double x) const override { return tail_at(x) * power_hazard(delta_, x); }

 private:
  std::vector<double> tails_;
  double delta_;
  Index last_;
  double coef_;
};

/// Normalised family given by an analytic, unnormalised atom weight g(n).
/// Raw tails T(n) = sum_{k>=n} g(k) are built block by block: the block's top
/// anchor comes from a midpoint Euler-Maclaurin estimate, the rest by backward
/// double-double accumulation.
class SummedModel final : public TailModel {
 public:
  static constexpr Index kBlock = Index{1} << 16;
  static constexpr Index kMaxIndex = Index{1} << 30;

  explicit SummedModel(std::function<double(double)> weight) : weight_(std::move(weight)) {
    auto first = raw_block(0);
    normaliser_ = (*first)[0];
    for (double& t : *first) t /= normaliser_;
    blocks_.push_back(std::move(first));
  }

  double tail(Index n) const override {
    const auto& block = block_for(n);
    return block[static_cast<std::size_t>((n - 1) % kBlock)];
  }
  double atom(Index n) const override { return weight_(static_cast<double>(n)) / normaliser_; }
  Index max_index() const override { return kMaxIndex; }
  double atom_slowly_varying(double x) const override {
    return x * x * weight_(x) / normaliser_;
  }
  void prewarm(Index n) const override { (void)block_for(std::min(n, kMaxIndex)); }

  double normaliser() const { return normaliser_; }

 private:
  using Block = std::vector<double>;

  // sum_{k >= first} g(k)
  double tail_anchor(Index first) const {
    const double c = static_cast<double>(first) - 0.5;
    boost::math::quadrature::exp_sinh<double> integrator;
    const double integral = integrator.integrate(
        [this, c](double u) { return weight_(c + u); }, 1e-15);
    const double h = 1e-3 * c;
    const double slope = (weight_(c + h) - weight_(c - h)) / (2.0 * h);
    return integral + slope / 24.0;
  }

  std::shared_ptr<Block> raw_block(Index b) const {
    const Index first = b * kBlock + 1;
    auto block = std::make_shared<Block>(static_cast<std::size_t>(kBlock));
    DoubleDouble acc{tail_anchor(first + kBlock), 0.0};
    for (Index i = kBlock - 1; i >= 0; --i) {
      acc += weight_(static_cast<double>(first + i));
      (*block)[static_cast<std::size_t>(i)] = acc.value();
    }
    return block;
  }

  const Block& block_for(Index n) const {
    if (n > kMaxIndex) throw DomainError("tail index beyond the cached range of this family");
    const auto b = static_cast<std::size_t>((n - 1) / kBlock);
    {
      std::shared_lock lock(mutex_);
      if (b < blocks_.size() && blocks_[b]) return *blocks_[b];
    }
    std::vector<std::pair<std::size_t, std::shared_ptr<Block>>> fresh;
    {
      std::shared_lock lock(mutex_);
      for (std::size_t i = 0; i <= b; ++i) {
        if (i >= blocks_.size() || !blocks_[i]) fresh.emplace_back(i, nullptr);
      }
    }
    for (auto& [i, block] : fresh) {
      block = raw_block(static_cast<Index>(i));
      for (double& t : *block) t /= normaliser_;
    }
    std::unique_lock lock(mutex_);
    if (blocks_.size() <= b) blocks_.resize(b + 1);
    for (auto& [i, block] : fresh) {
      if (!blocks_[i]) blocks_[i] = std::move(block);
    }
    return *blocks_[b];
  }

  std::function<double(double)> weight_;
  double normaliser_ = 1.0;
  mutable std::shared_mutex mutex_;
  mutable std::vector<std::shared_ptr<Block>> blocks_;
};

class EkstromModel final : public TailModel {
 public:
  explicit EkstromModel(EkstromFunction l) : l_(std::move(l)) {}

  double tail(Index n) const override {
    if (n == 1) return 1.0;
    const auto prev = static_cast<double>(n - 1);
    const double u = std::log(prev);
    return std::exp(l_.log_profile(u)) * std::expm1(l_.log_increment(u, std::log1p(1.0 / prev)));
  }
  // Second difference of l; no cancellation-free form is available.
  double atom(Index n) const override { return tail(n) - tail(n + 1); }

 private:
  EkstromFunction l_;
};

// Unnormalised weights of the two slowly varying delta = 1 families, evaluated
// at the shifted argument (both are undefined or non-positive near n = 1).
double exp_sqrt_log_weight(double n) {
  const double x = n + 1.0;
  const double lx = std::log(x);
  return std::exp(std::sqrt(lx) - 2.0 * lx) / std::sqrt(lx);
}

double exp_log_over_loglog_weight(double n) {
  const double x = n + 16.0;
  const double lx = std::log(x);
  const double llx = std::log(lx);
  const double kappa = (llx - 1.0) / (llx * llx);
  return kappa * std::exp(lx / llx - 2.0 * lx);
}

}  // namespace
}  // namespace detail

TailSequence TailSequence::power_law(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in (0,1]");
  return TailSequence(FamilyKind::PowerLaw, delta, std::make_shared<detail::PowerModel>(delta));
}

TailSequence TailSequence::harmonic() {
  return TailSequence(FamilyKind::Delta1Harmonic, 1.0, std::make_shared<detail::PowerModel>(1.0));
}

TailSequence TailSequence::exp_sqrt_log() {
  return TailSequence(FamilyKind::ExpSqrtLog, 1.0,
                      std::make_shared<detail::SummedModel>(detail::exp_sqrt_log_weight));
}

TailSequence TailSequence::exp_log_over_loglog() {
  return TailSequence(FamilyKind::ExpLogOverLogLog, 1.0,
                      std::make_shared<detail::SummedModel>(detail::exp_log_over_loglog_weight));
}

TailSequence TailSequence::custom_table(std::vector<double> tails, double tail_delta) {
  if (tails.empty()) throw ValidationError("custom_table: table must not be empty");
  if (tails.front() != 1.0) throw ValidationError("custom_table: t_1 must equal 1");
  for (std::size_t i = 1; i < tails.size(); ++i) {
    if (!(tails[i] > 0.0)) throw ValidationError("custom_table: tails must be positive");
    if (!(tails[i] < tails[i - 1])) {
      throw ValidationError("custom_table: tails must be strictly decreasing (entry " +
                            std::to_string(i + 1) + ")");
    }
  }
  if (!(tail_delta > 0.0 && tail_delta <= 1.0)) {
    throw ValidationError("custom_table: tail delta must lie in (0,1]");
  }
  TailSequence seq(FamilyKind::CustomTable, tail_delta,
                   std::make_shared<detail::TableModel>(tails, tail_delta));
  seq.table_ = std::move(tails);
  return seq;
}

TailSequence TailSequence::ekstrom(EkstromFunction l) {
  if (!(l.slope(1) <= 1.0)) {
    throw ValidationError("ekstrom family: c_1 must be <= 1 for the tails to decrease");
  }
  TailSequence seq(FamilyKind::Ekstrom, 1.0, std::make_shared<detail::EkstromModel>(l));
  seq.ekstrom_ = std::move(l);
  return seq;
}

std::string TailSequence::name() const {
  std::ostringstream out;
  out << to_string(kind_);
  if (kind_ == FamilyKind::PowerLaw || kind_ == FamilyKind::CustomTable) {
    out << "(delta=" << delta_ << ")";
  }
  return out.str();
}

static void require_index(Index n, const char* what) {
  if (n < 1) throw DomainError(std::string(what) + ": index must be >= 1");
}

double TailSequence::tail(Index n) const {
  require_index(n, "tail");
  return model_->tail(n);
}

double TailSequence::atom_length(Index n) const {
  require_index(n, "atom_length");
  return model_->atom(n);
}

Atom TailSequence::atom_interval(Index n) const {
  require_index(n, "atom_interval");
  return Atom{n, model_->tail(n + 1), model_->tail(n)};
}

Index TailSequence::locate(double x) const {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("locate: x must lie in (0,1)");
  // n = last index with t_n > x; t_1 = 1 > x always.
  const Index cap = model_->max_index();
  auto above = [&](Index k) { return model_->tail(k) > x; };
  Index lo = 1;
  Index hi = 2;
  if (auto guess = model_->locate_guess(x)) {
    const Index g = std::min(*guess, cap);
    if (above(g)) {
      lo = g;
      hi = g + 1;
      for (Index step = 1; above(hi); step *= 2) {
        lo = hi;
        if (hi >= cap) throw DomainError("locate: x too close to 0 for this family");
        hi = std::min(cap, hi + step);
      }
    } else {
      hi = g;
      lo = std::max<Index>(1, g - 1);
      for (Index step = 1; !above(lo); step *= 2) {
        hi = lo;
        lo = std::max<Index>(1, lo - step);
      }
    }
  } else {
    while (above(hi)) {
      lo = hi;
      if (hi >= cap) throw DomainError("locate: x too close to 0 for this family");
      hi = std::min(cap, hi * 2);
    }
  }
  while (hi - lo > 1) {
    const Index mid = lo + (hi - lo) / 2;
    (above(mid) ? lo : hi) = mid;
  }
  return lo;
}

double TailSequence::density_coeff(Index n) const {
  require_index(n, "density_coeff");
  return model_->tail(n) / model_->atom(n);
}

double TailSequence::tail_ratio(Index n) const {
  require_index(n, "tail_ratio");
  return 1.0 - model_->hazard(n);
}

double TailSequence::hazard(Index n) const {
  require_index(n, "hazard");
  return model_->hazard(n);
}

double TailSequence::tail_range_sum(Index a, Index b) const {
  require_index(a, "tail_range_sum");
  if (b < a) return 0.0;
  return model_->tail_range_sum(a, b);
}

double TailSequence::atom_range_sum(Index a, Index b) const {
  require_index(a, "atom_range_sum");
  if (b < a) return 0.0;
  return model_->atom_range_sum(a, b);
}

double TailSequence::tail_slowly_varying(Index n) const {
  require_index(n, "tail_slowly_varying");
  if (kind_ == FamilyKind::PowerLaw || kind_ == FamilyKind::Delta1Harmonic) return 1.0;
  return model_->tail(n) * std::pow(static_cast<double>(n), delta_);
}

double TailSequence::atom_slowly_varying(double x) const {
  if (!(x >= 1.0)) throw DomainError("atom_slowly_varying: x must be >= 1");
  return model_->atom_slowly_varying(x);
}

std::optional<PowerBound> TailSequence::power_bound() const { return model_->power_bound(); }

bool TailSequence::has_continuation(double from_x) const {
  return from_x >= model_->continuation_from();
}

double TailSequence::tail_at(double x) const {
  if (!has_continuation(x)) throw NotApplicable("tail_at: no continuation at this argument");
  return model_->tail_at(x);
}

double TailSequence::atom_at(double x) const {
  if (!has_continuation(x)) throw NotApplicable("atom_at: no continuation at this argument");
  return model_->atom_at(x);
}

void TailSequence::prewarm(Index n) const { model_->prewarm(n); }

}  // namespace farey
