#include "doctest.h"

#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "farey/map.hpp"

using farey::BranchWord;
using farey::Index;
using farey::TailSequence;

namespace {

// Orbit iteration: first n >= 1 with F^n(x) back in [t_2, 1].
Index orbit_return_time(const TailSequence& seq, double x) {
  const double t2 = seq.tail(2);
  double y = x;
  for (Index n = 1; n < 100000; ++n) {
    y = farey::farey_apply(seq, y);
    if (y >= t2) return n;
  }
  return -1;
}

}  // namespace

TEST_CASE("map examples") {
  const auto seq = TailSequence::power_law(1.0);
  CHECK(farey::farey_apply(seq, 0.75) == 0.5);
  CHECK(farey::farey_apply(seq, 0.0) == 0.0);
  CHECK(farey::farey_apply(seq, 1.0) == 0.0);
  CHECK(farey::farey_apply(seq, 0.5) == 1.0);
  const double mid3 = seq.atom_interval(3).midpoint();
  CHECK(seq.locate(farey::farey_apply(seq, mid3)) == 2);
  CHECK_THROWS_AS(farey::farey_apply(seq, 1.5), farey::DomainError);
  CHECK_THROWS_AS(farey::farey_apply(seq, -0.1), farey::DomainError);
}

TEST_CASE("words") {
  const auto seq = TailSequence::power_law(1.0);
  CHECK(farey::word_apply(seq, {}, 0.3) == 0.3);
  CHECK(farey::word_apply(seq, farey::parse_word("1"), 0.5) == 0.75);
  CHECK(farey::to_string(farey::parse_word("0110")) == "0110");
  CHECK(farey::to_string(farey::one_zeros(3)) == "100");
  CHECK(farey::zeros(4).size() == 4);
  CHECK_THROWS(farey::parse_word("012"));
  for (Index n = 1; n <= 30; ++n) {
    const double y = farey::word_apply(seq, farey::zeros(n - 1), 0.8);
    CHECK(seq.locate(y) == n);
  }
}

TEST_CASE("branch inversion on random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (double delta : {0.6, 1.0}) {
    const auto seq = TailSequence::power_law(delta);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = unif(rng);
      for (std::uint8_t b : {std::uint8_t{0}, std::uint8_t{1}}) {
        const double y = farey::branch_apply(seq, b, x);
        worst = std::max(worst, std::fabs(farey::farey_apply(seq, y) - x));
      }
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("markov images") {
  const auto seq = TailSequence::power_law(0.75);
  CHECK(farey::farey_apply(seq, seq.tail(2)) == doctest::Approx(1.0).epsilon(1e-12));
  for (Index n = 2; n <= 200; ++n) {
    const auto a = seq.atom_interval(n);
    CHECK(std::fabs(farey::farey_apply(seq, a.left) - seq.tail(n)) <= 1e-12);
    const double right = std::nextafter(a.right, 0.0);
    CHECK(std::fabs(farey::farey_apply(seq, right) - seq.tail(n - 1)) <= 1e-12);
  }
}

TEST_CASE("word constants") {
  const auto harmonic = TailSequence::power_law(1.0);
  CHECK(farey::c_const(harmonic, 1, farey::zeros(3)) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(farey::c_const(harmonic, 1, farey::one_zeros(2)) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(farey::c_const(harmonic, 3, farey::one_zeros(2)) == doctest::Approx(3.0 / 20.0).epsilon(1e-15));
  CHECK_THROWS_AS(farey::c_const(harmonic, 1, {}), farey::DomainError);
  CHECK_THROWS(farey::c_const(harmonic, 1, farey::zeros(65)));

  // Closed forms for k, n <= 64 (the word length limit).
  const auto seq = TailSequence::power_law(0.6);
  double worst = 0.0;
  for (Index k = 1; k <= 64; ++k) {
    worst = std::max(worst, std::fabs(farey::c_const(seq, 1, farey::zeros(k)) / seq.tail(k + 1) - 1.0));
    for (Index n = 1; n <= 64; ++n) {
      const double want = (seq.tail(k + n - 1) - seq.tail(k + n)) / seq.tail(k);
      worst = std::max(worst, std::fabs(farey::c_const(seq, k, farey::one_zeros(n)) / want - 1.0));
    }
  }
  CHECK(worst <= 1e-13);

  // Weights of all words of length 4 sum to 1 on every atom.
  for (Index n = 1; n <= 10; ++n) {
    double s = 0.0;
    for (unsigned bits = 0; bits < 16; ++bits) {
      BranchWord w(4);
      for (int i = 0; i < 4; ++i) w[i] = static_cast<std::uint8_t>((bits >> i) & 1U);
      s += farey::c_const(seq, n, w);
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("memoised word constants from several threads") {
  const auto seq = TailSequence::power_law(0.75);
  const farey::WordConstants memo(seq);
  std::vector<std::thread> pool;
  std::vector<double> out(4);
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] {
      double s = 0.0;
      for (Index n = 1; n <= 50; ++n) s += memo(n, farey::one_zeros(5));
      out[static_cast<std::size_t>(t)] = s;
    });
  }
  for (auto& th : pool) th.join();
  for (double v : out) CHECK(v == out[0]);
  CHECK(memo.cached() == 50);
  CHECK(memo(7, farey::one_zeros(5)) == farey::c_const(seq, 7, farey::one_zeros(5)));
}

TEST_CASE("return time and cylinders") {
  const auto seq = TailSequence::power_law(1.0);
  CHECK(farey::return_time(seq, 0.6) == 1);
  CHECK(farey::return_time(seq, 0.8) == 2);
  CHECK(farey::return_time(seq, 1.0) == 1);
  CHECK(orbit_return_time(seq, 0.8) == 2);
  CHECK_THROWS_AS(farey::return_time(seq, 0.3), farey::DomainError);

  const auto c1 = farey::return_cylinder(seq, 1);
  CHECK(c1.left == 0.5);
  CHECK(c1.right == 0.75);
  CHECK(c1.left_closed);
  const auto c2 = farey::return_cylinder(seq, 2);
  CHECK(c2.left == 0.75);
  CHECK(c2.right == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK_FALSE(c2.left_closed);

  const auto p = TailSequence::power_law(0.6);
  const double a1 = p.atom_length(1);
  double total = 0.0;
  for (Index n = 1; n <= 500; ++n) {
    const auto c = farey::return_cylinder(p, n);
    CHECK(c.length() == doctest::Approx(a1 * p.atom_length(n)).epsilon(1e-12));
    total += c.length();
  }
  CHECK(total == doctest::Approx(a1 * (1.0 - p.tail(501))).epsilon(1e-13));

  // Cylinder formula against orbit iteration on interior points.
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Index n = 1 + static_cast<Index>(rng() % 40);
    const auto c = farey::return_cylinder(p, n);
    const double x = c.left + (0.25 + 0.5 * std::ldexp(static_cast<double>(rng() >> 11), -53)) * c.length();
    CHECK(farey::return_time(p, x) == n);
    CHECK(orbit_return_time(p, x) == n);
  }
}

TEST_CASE("induced map") {
  const auto seq = TailSequence::power_law(1.0);
  CHECK(farey::induced_apply(seq, 1.0) == seq.tail(2));
  CHECK(farey::induced_apply(seq, 0.5) == 1.0);
  const double x = 0.79;
  const double h = 1e-6;
  const double slope = (farey::induced_apply(seq, x + h) - farey::induced_apply(seq, x - h)) / (2.0 * h);
  CHECK(std::fabs(slope) == doctest::Approx(6.0).epsilon(1e-6));
  // G agrees with the orbit.
  const auto p = TailSequence::power_law(0.75);
  for (double y : {0.55, 0.7, 0.9, 0.97}) {
    if (y < p.tail(2)) continue;
    double z = y;
    const Index n = farey::return_time(p, y);
    for (Index k = 0; k < n; ++k) z = farey::farey_apply(p, z);
    CHECK(farey::induced_apply(p, y) == doctest::Approx(z).epsilon(1e-10));
  }
}
