#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "farey/map.hpp"
#include "farey/transfer.hpp"
#include "oracle.hpp"

using farey::AtomObservable;
using farey::Index;
using farey::TailSequence;
using farey::TransferState;

namespace {

std::vector<double> one_step(const TailSequence& seq, std::vector<double> u) {
  auto s = TransferState::from_coeffs(std::move(u));
  farey::transfer_step(seq, s);
  s.coeffs.resize(static_cast<std::size_t>(s.exact_prefix));
  return s.coeffs;
}

}  // namespace

TEST_CASE("single step examples") {
  const auto seq = TailSequence::power_law(1.0);
  std::vector<double> e1(20, 0.0);
  e1[0] = 1.0;
  const auto u = one_step(seq, e1);
  CHECK(u[0] == 0.5);
  for (Index n = 2; n <= 19; ++n) {
    CHECK(u[static_cast<std::size_t>(n - 1)] == doctest::Approx(1.0 / static_cast<double>(n + 1)).epsilon(1e-15));
  }
  std::vector<double> e5(20, 0.0);
  e5[4] = 1.0;
  const auto w = one_step(seq, e5);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i == 3) CHECK(w[i] == doctest::Approx(0.8).epsilon(1e-15));
    else CHECK(w[i] == 0.0);
  }
  const auto c = one_step(TailSequence::power_law(0.6), std::vector<double>(50, 1.0));
  for (double x : c) CHECK(x == 1.0);
}

TEST_CASE("kernel and on-the-fly step agree") {
  const auto seq = TailSequence::power_law(0.75);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> u(300);
  for (double& x : u) x = unif(rng);
  auto a = TransferState::from_coeffs(u);
  auto b = TransferState::from_coeffs(u);
  const farey::TransferKernel kernel(seq, 300);
  for (int s = 0; s < 100; ++s) {
    kernel.step(a);
    farey::transfer_step(seq, b);
  }
  CHECK(a.exact_prefix == 200);
  for (Index i = 0; i < 200; ++i) CHECK(a.coeffs[static_cast<std::size_t>(i)] == b.coeffs[static_cast<std::size_t>(i)]);
}

TEST_CASE("indicator iterates collapse onto the first atom") {
  for (double d : {0.6, 0.75, 1.0}) {
    const auto seq = TailSequence::power_law(d);
    for (Index n = 1; n <= 200; n += 7) {
      const auto r = farey::transfer_iterate(seq, AtomObservable::indicator(n), n - 1, 8);
      CHECK(oracle::relative_error(r.coeffs[0], seq.tail(n)) <= 1e-12);
      for (std::size_t j = 1; j < 8; ++j) CHECK(r.coeffs[j] == 0.0);
      if (n > 1) CHECK(r.value_at_one == 0.0);
    }
  }
  const auto h = TailSequence::power_law(1.0);
  CHECK(farey::transfer_iterate(h, AtomObservable::indicator(5), 4, 1).coeffs[0] == doctest::Approx(0.2).epsilon(1e-15));
  const auto r = farey::transfer_iterate(h, AtomObservable::indicator(1), 2, 1);
  CHECK(r.coeffs[0] == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
  const auto id = farey::transfer_iterate(h, AtomObservable::eta_power(0.5, 1.0), 0, 4);
  CHECK(id.coeffs[3] == 2.0);
  CHECK(id.value_at_one == 1.0);
}

TEST_CASE("constants stay fixed") {
  const auto seq = TailSequence::power_law(0.6);
  const auto r = farey::transfer_iterate(seq, AtomObservable::constant(3.0), 500, 10);
  for (double x : r.coeffs) CHECK(x == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("oracle triangle") {
  for (double d : {0.6, 1.0}) {
    const auto seq = TailSequence::power_law(d);
    const auto u = farey::renewal_sequence(seq, 2000);
    CHECK(u[0] == 1.0);
    farey::TransferRun run(seq, AtomObservable::indicator(1), 2000, 1);
    double worst = 0.0;
    for (Index n = 1; n <= 2000; ++n) {
      run.advance_to(n);
      worst = std::max(worst, std::fabs(run.coeff(1) - u[static_cast<std::size_t>(n)]));
    }
    CHECK(worst <= 1e-10);
    const double x = seq.atom_interval(1).midpoint();
    auto e1 = [&](double y) { return y >= seq.tail(2) && y < 1.0 ? 1.0 : 0.0; };
    for (Index n : {Index{1}, Index{5}, Index{12}, Index{18}}) {
      CHECK(std::fabs(farey::transfer_pointwise_oracle(seq, e1, x, n) - u[static_cast<std::size_t>(n)]) <= 1e-10);
    }
  }
  const auto h = TailSequence::power_law(1.0);
  const auto u = farey::renewal_sequence(h, 2);
  CHECK(u[1] == 0.5);
  CHECK(u[2] == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("pointwise oracle examples") {
  const auto seq = TailSequence::power_law(0.75);
  CHECK(farey::transfer_pointwise_oracle(seq, [](double) { return 1.0; }, 0.3, 10) ==
        doctest::Approx(1.0).epsilon(1e-13));
  const auto a5 = seq.atom_interval(5);
  auto ind5 = [&](double y) { return y >= a5.left && y < a5.right ? 1.0 : 0.0; };
  CHECK(farey::transfer_pointwise_oracle(seq, ind5, 0.8, 4) == doctest::Approx(seq.tail(5)).epsilon(1e-13));
  CHECK_THROWS_AS(farey::transfer_pointwise_oracle(seq, ind5, 0.8, 23), farey::BudgetError);

  // Counterexample prefix against the coefficient iteration.
  const auto p = farey::CounterexampleParams::first_example(0.6);
  const auto v = AtomObservable::counterexample(p);
  const auto s6 = TailSequence::power_law(0.6);
  auto vf = [&](double y) { return y <= 0.0 || y >= 1.0 ? 0.0 : v(s6.locate(y)); };
  const auto r = farey::transfer_iterate(s6, v, 12, 3);
  for (Index j = 1; j <= 3; ++j) {
    const double x = s6.atom_interval(j).midpoint();
    CHECK(std::fabs(farey::transfer_pointwise_oracle(s6, vf, x, 12) - r.coeffs[static_cast<std::size_t>(j - 1)]) <=
          1e-12);
  }
}

TEST_CASE("duality with the composition operator") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const auto seq = TailSequence::power_law(0.75);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t K = 2 + rng() % 40;
    std::vector<double> v(K + 1, 0.0), w(K + 1, 0.0);
    for (std::size_t i = 0; i < K; ++i) {
      v[i] = unif(rng);
      w[i] = unif(rng);
    }
    const auto fv = one_step(seq, v);
    long double lhs = 0.0L;
    for (std::size_t i = 0; i < fv.size(); ++i) lhs += static_cast<long double>(fv[i]) * w[i] * seq.tail(static_cast<Index>(i + 1));
    long double rhs = 0.0L;
    for (std::size_t i = 1; i < K; ++i) rhs += static_cast<long double>(v[i]) * w[i - 1] * seq.tail(static_cast<Index>(i + 1));
    long double wl = 0.0L;
    for (std::size_t i = 0; i < K; ++i) wl += static_cast<long double>(seq.atom_length(static_cast<Index>(i + 1))) * w[i];
    rhs += v[0] * wl;
    worst = std::max(worst, static_cast<double>(std::fabs(lhs - rhs) / std::max(std::fabs(rhs), 1e-300L)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("linearity and positivity") {
  const auto seq = TailSequence::power_law(0.6);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> v(64), w(64), mix(64);
  for (int i = 0; i < 64; ++i) {
    v[i] = unif(rng);
    w[i] = unif(rng);
    mix[i] = 2.0 * v[i] + 0.5 * w[i];
  }
  const auto fv = one_step(seq, v);
  const auto fw = one_step(seq, w);
  const auto fm = one_step(seq, mix);
  for (std::size_t i = 0; i < fv.size(); ++i) {
    CHECK(fv[i] >= 0.0);
    CHECK(fm[i] == doctest::Approx(2.0 * fv[i] + 0.5 * fw[i]).epsilon(1e-14));
  }
  // Mass under mu: sum_n (F v)_n t_n = sum_n v_n t_n for v supported in 1..63.
  v.back() = 0.0;
  double before = 0.0, after = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) before += v[i] * seq.tail(static_cast<Index>(i + 1));
  const auto fv2 = one_step(seq, v);
  for (std::size_t i = 0; i < fv2.size(); ++i) after += fv2[i] * seq.tail(static_cast<Index>(i + 1));
  // Beyond the prefix, (F v)_n = (a_n / t_n) v_1, carrying mass v_1 t_64.
  after += v[0] * seq.tail(64);
  CHECK(after == doctest::Approx(before).epsilon(1e-13));
}

TEST_CASE("perron operator") {
  const auto seq = TailSequence::power_law(0.6);
  std::vector<double> h(10001);
  for (Index n = 1; n <= 10001; ++n) h[static_cast<std::size_t>(n - 1)] = seq.density_coeff(n);
  const auto ph = farey::perron_apply(seq, h);
  double worst = 0.0;
  for (std::size_t i = 0; i < ph.coeffs.size(); ++i) worst = std::max(worst, oracle::relative_error(ph.coeffs[i], h[i]));
  CHECK(worst <= 1e-12);

  const auto harmonic = TailSequence::power_law(1.0);
  const auto p1 = farey::perron_apply(harmonic, std::vector<double>(5, 1.0));
  CHECK(p1.coeffs[0] == doctest::Approx(0.5 + 1.0 / 3.0));

  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double conj = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(40), hv(40);
    for (std::size_t i = 0; i < 40; ++i) {
      v[i] = unif(rng);
      hv[i] = seq.density_coeff(static_cast<Index>(i + 1)) * v[i];
    }
    const auto p = farey::perron_apply(seq, hv);
    const auto f = one_step(seq, v);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double got = p.coeffs[i] / seq.density_coeff(static_cast<Index>(i + 1));
      conj = std::max(conj, std::fabs(got - f[i]) / std::max(std::fabs(f[i]), 1e-3));
    }
  }
  CHECK(conj <= 1e-12);
}

TEST_CASE("light cone") {
  const auto seq = TailSequence::power_law(0.6);
  const auto v = AtomObservable::eta_power(0.3, 0.6);
  const auto a = farey::transfer_iterate(seq, v, 2000, 16);
  const auto b = farey::transfer_iterate(seq, v, 2000, 16, farey::kDefaultBudget, 500);
  for (std::size_t j = 0; j < 16; ++j) CHECK(oracle::ulps(a.coeffs[j], b.coeffs[j]) <= 1.0);
  const auto h = TailSequence::power_law(1.0);
  const auto c = farey::transfer_iterate(h, AtomObservable::indicator(3), 300, 16);
  const auto d = farey::transfer_iterate(h, AtomObservable::indicator(3), 300, 16, farey::kDefaultBudget, 500);
  for (std::size_t j = 0; j < 16; ++j) CHECK(c.coeffs[j] == d.coeffs[j]);
}

TEST_CASE("budget and state errors") {
  const auto seq = TailSequence::power_law(0.6);
  try {
    (void)farey::transfer_iterate(seq, AtomObservable::indicator(1), 100000, 10, 1e6);
    FAIL("expected a budget refusal");
  } catch (const farey::BudgetError& e) {
    CHECK(e.estimate() == doctest::Approx(100000.0 * 100010.0));
  }
  const auto r = farey::transfer_iterate(seq, AtomObservable::indicator(1), 3000, 16);
  const double est = farey::transfer_estimate(3000, 16);
  CHECK(r.updates == farey::transfer_cost(3000, 16));
  CHECK(est >= r.updates);
  CHECK(est <= 2.0 * r.updates);

  auto s = TransferState::from_coeffs({1.0});
  CHECK_THROWS_AS(farey::transfer_step(seq, s), farey::StateError);
  CHECK_THROWS_AS(farey::renewal_sequence(seq, 100000, 1e6), farey::BudgetError);
}

TEST_CASE("induced operators") {
  const auto h = TailSequence::power_law(1.0);
  farey::BetaConstant ones{std::vector<double>(2000, 1.0)};
  CHECK(farey::induced_R1(h, ones) == doctest::Approx(1.0 - h.tail(2001)).epsilon(1e-14));
  farey::BetaConstant third{{0.0, 0.0, 1.0}};
  CHECK(farey::induced_R1(h, third) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(farey::induced_R_n(h, third, 3) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(farey::induced_R_n(h, third, 2) == 0.0);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const auto seq = TailSequence::power_law(0.75);
  for (int trial = 0; trial < 20; ++trial) {
    farey::BetaConstant u, w;
    u.values.resize(1 + rng() % 30);
    w.values.resize(1 + rng() % 30);
    for (double& x : u.values) x = unif(rng);
    for (double& x : w.values) x = unif(rng);
    const auto d = farey::induced_duality(seq, u, w);
    CHECK(d.lhs == doctest::Approx(d.rhs).epsilon(1e-9));
  }
}
