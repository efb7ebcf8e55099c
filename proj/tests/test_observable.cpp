#include "doctest.h"

#include <cmath>
#include <random>
#include <string>

#include "farey/measure.hpp"
#include "farey/observable.hpp"
#include "farey/transfer.hpp"

using farey::AtomObservable;
using farey::CounterexampleParams;
using farey::Index;
using farey::TailSequence;

TEST_CASE("basic observables") {
  const auto ind = AtomObservable::indicator(5);
  CHECK(ind(5) == 1.0);
  CHECK(ind(4) == 0.0);
  CHECK(ind(6) == 0.0);
  CHECK(ind.value_at_one() == 0.0);
  CHECK(ind.support_end() == 5);

  const auto eta = AtomObservable::eta_power(0.3, 0.75);
  CHECK(eta(8) == doctest::Approx(std::pow(8.0, 0.3)).epsilon(1e-15));
  CHECK(eta.value_at_one() == 1.0);
  CHECK_THROWS_AS(AtomObservable::eta_power(0.8, 0.75), farey::ValidationError);

  const auto c = AtomObservable::constant(2.5);
  CHECK(c(1000000) == 2.5);
  CHECK(c.value_at_one() == 2.5);

  const auto seq = TailSequence::power_law(0.6);
  CHECK(ind.at(seq, seq.atom_interval(5).midpoint()) == 1.0);
  CHECK(ind.at(seq, 0.0) == 0.0);
  CHECK(eta.at(seq, 1.0) == 1.0);
  const auto over = ind.divide_by_density(seq);
  CHECK(over(5) == doctest::Approx(seq.atom_length(5) / seq.tail(5)).epsilon(1e-15));
}

TEST_CASE("descriptor bounds hold on probes") {
  const auto eta = AtomObservable::eta_power(0.3, 0.75);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Index n = 1 + static_cast<Index>(rng() % 100000000);
    CHECK(std::fabs(eta(n)) <= eta.tail().coef * std::pow(static_cast<double>(n), eta.tail().exponent) * (1 + 1e-15));
  }
}

TEST_CASE("example parameters validate") {
  for (double d : {0.55, 0.6, 0.75, 0.9}) {
    // Keep rho * eps well inside (1 - delta) so the default g3 rule has room.
    const double eps = std::min(0.01, 0.25 * (1.0 - d) * (1.0 - d) / (3.0 * d + 1.0));
    const auto first = CounterexampleParams::first_example(d, eps);
    const auto rep_first = farey::validate_counterexample(first);
    CAPTURE(d);
    CAPTURE(rep_first.failures());
    CHECK(rep_first.ok());
    CHECK(first.g3 < (1.0 - d) - first.rho() * first.epsilon);
    const auto rep_second = farey::validate_counterexample(CounterexampleParams::second_example(d));
    CAPTURE(rep_second.failures());
    CHECK(rep_second.ok());
  }
  const auto p = CounterexampleParams::first_example(0.6);
  CHECK(p.g1 == doctest::Approx(2.525));
  CHECK(p.g2 == doctest::Approx(1.5));
  CHECK(p.g3 == 0.3);
}

TEST_CASE("C1 failure is reported by name") {
  auto p = CounterexampleParams::first_example(0.75);
  p.g1 = 2.0;
  const auto r = farey::validate_counterexample(p);
  CHECK_FALSE(r.ok());
  CHECK(r.failures().find("(C1)") != std::string::npos);
  try {
    (void)AtomObservable::counterexample(p);
    FAIL("expected a validation error");
  } catch (const farey::ValidationError& e) {
    CHECK(std::string(e.what()).find("(C1)") != std::string::npos);
  }
}

TEST_CASE("counterexample blocks") {
  const auto p = CounterexampleParams::first_example(0.6);
  const auto v = AtomObservable::counterexample(p);
  CHECK(p.block_end(1) == 6.0);
  CHECK(p.block_width(1) == 2.0);
  CHECK(p.block_start(1) == 4.0);
  CHECK(v(3) == 0.0);
  CHECK(v(4) == doctest::Approx(std::exp2(-0.3)).epsilon(1e-15));
  CHECK(v(6) == v(4));
  CHECK(v(7) == 0.0);
  // Independent block table.
  for (Index k = 1; k <= 8; ++k) {
    const double Nk = std::ceil(std::exp2(p.g1 * static_cast<double>(k)));
    const double nk = std::floor(std::exp2(p.g2 * static_cast<double>(k)));
    CHECK(p.block_end(k) == Nk);
    CHECK(p.block_width(k) == nk);
    if (k > 1) CHECK(p.block_start(k) > p.block_end(k - 1));
    const auto lo = static_cast<Index>(Nk - nk);
    const auto hi = static_cast<Index>(Nk);
    CHECK(v(lo) == doctest::Approx(p.height(k)).epsilon(1e-15));
    CHECK(v(hi) == doctest::Approx(p.height(k)).epsilon(1e-15));
    CHECK(v(hi + 1) == 0.0);
    CHECK(v(lo - 1) == 0.0);
    CHECK(p.block_of(lo) == k);
  }
  CHECK_FALSE(p.block_of(20).has_value());
}

TEST_CASE("counterexample norms") {
  const auto p = CounterexampleParams::first_example(0.6);
  const auto v = AtomObservable::counterexample(p);
  const auto n = farey::norms(v, TailSequence::power_law(0.6));
  CHECK(n.sup_norm == doctest::Approx(std::exp2(-0.3)).epsilon(1e-15));
  REQUIRE(n.variation.has_value());
  CHECK(std::fabs(*n.variation - farey::counterexample_variation_direct(p, 200)) <= 1e-12);
  const auto lc = farey::blocks_above(p, 1e-3);
  CHECK(lc.count <= lc.bound);
  CHECK(lc.count == 33);  // 2^{-0.3 k} > 1e-3 for k <= 33

  const auto seq = TailSequence::power_law(0.6);
  CHECK(*farey::norms(AtomObservable::indicator(1), seq).b_alpha_norm == 1.0);
  const auto eta = farey::norms(AtomObservable::eta_power(0.3, 0.6), seq);
  CHECK(std::isinf(eta.sup_norm));
  CHECK_FALSE(eta.b_alpha_norm.has_value());
}

TEST_CASE("summability") {
  const auto seq = TailSequence::power_law(0.6);
  const auto r5 = farey::summability_check(AtomObservable::indicator(5), seq, 10);
  CHECK(r5.lhs_partial == seq.tail(5));
  CHECK(r5.rhs == seq.tail(5));
  CHECK(r5.holds);

  const auto p = CounterexampleParams::first_example(0.6);
  const auto rv = farey::summability_check(AtomObservable::counterexample(p), seq, 100000);
  CHECK(rv.summable);
  CHECK(rv.holds);
  CHECK(rv.lhs_partial <= rv.rhs);
  CHECK(rv.rhs - rv.lhs_partial <= rv.gap_bound + rv.rhs_bound);

  const auto rc = farey::summability_check(AtomObservable::constant(1.0), seq, 100);
  CHECK_FALSE(rc.summable);
  CHECK_FALSE(rc.holds);
}

TEST_CASE("H1 bound on beta-constant functions") {
  const auto seq = TailSequence::power_law(0.75);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    farey::BetaConstant u;
    u.values.resize(50);
    for (double& x : u.values) x = unif(rng);
    const auto checks = farey::h1_bound_check(seq, u, 200);
    for (const auto& c : checks) CHECK(c.holds);
  }
  farey::BetaConstant one{{1.0}};
  const auto eq = farey::h1_bound_check(seq, one, 3);
  CHECK(eq[0].equality);
  CHECK(eq[1].lhs == 0.0);
}
