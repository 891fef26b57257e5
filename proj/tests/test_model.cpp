#include <doctest.h>

#include <cmath>
#include <random>

#include "aoii/errors.hpp"
#include "aoii/model.hpp"

using aoii::SystemParams;

TEST_CASE("params reject invalid input") {
  CHECK_THROWS_AS(SystemParams(1, 0.5, 0.5), aoii::InvalidArgument);
  CHECK_THROWS_AS(SystemParams(4, 0.0, 0.5), aoii::InvalidArgument);
  CHECK_THROWS_AS(SystemParams(4, 1.0, 0.5), aoii::InvalidArgument);
  CHECK_THROWS_AS(SystemParams(4, 0.5, -0.1), aoii::InvalidArgument);
  CHECK_THROWS_AS(SystemParams(4, 0.5, 1.1), aoii::InvalidArgument);
  CHECK_NOTHROW(SystemParams(2, 0.5, 0.0));
  CHECK_NOTHROW(SystemParams(2, 0.5, 1.0));
}

TEST_CASE("derived probabilities") {
  const SystemParams p(8, 0.3, 0.6);
  CHECK(p.p_transition() == doctest::Approx(0.1));
  CHECK(p.p_remain() + 7 * p.p_transition() == doctest::Approx(1.0));
  const double a = 0.3 * 0.4 + 6 * 0.1 + 0.6 * 0.1;
  CHECK(p.growth_transmit() == doctest::Approx(a));
  CHECK(p.growth_idle() == doctest::Approx(0.3 + 6 * 0.1));
  CHECK(p.reset_transmit() == doctest::Approx(1.0 - a));
  CHECK(p.reset_idle() == doctest::Approx(0.1));
  CHECK(p.updates_help());
  CHECK_FALSE(SystemParams(2, 0.4, 0.8).updates_help());
}

TEST_CASE("reset_transmit complements growth_transmit over random params") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.001, 0.999);
  for (int i = 0; i < 500; ++i) {
    const int n = 2 + static_cast<int>(rng() % 30);
    const SystemParams p(n, u(rng), u(rng));
    CHECK(p.reset_transmit() + p.growth_transmit() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.reset_idle() + p.growth_idle() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("kernel from the correct state ignores the action") {
  const SystemParams p(8, 0.8, 0.8);
  for (bool tx : {false, true}) {
    const auto d = aoii::aoii_kernel(p, 0, tx);
    CHECK(d.p_reset == doctest::Approx(0.8));
    CHECK(d.p_grow == doctest::Approx(7 * p.p_transition()));
  }
}

TEST_CASE("kernel in error") {
  const SystemParams p(5, 0.55, 0.7);
  const auto idle = aoii::aoii_kernel(p, 5, false);
  CHECK(idle.p_reset == doctest::Approx(p.p_transition()));
  CHECK(idle.p_grow == doctest::Approx(0.55 + 3 * p.p_transition()));

  const SystemParams perfect(2, 0.8, 1.0);
  const auto tx = aoii::aoii_kernel(perfect, 3, true);
  CHECK(tx.p_reset == doctest::Approx(0.8));
  CHECK(tx.p_grow == doctest::Approx(0.2));
}

TEST_CASE("step_aoii branches") {
  const SystemParams p(8, 0.8, 0.8);
  CHECK(aoii::step_aoii(p, 4, true, 0.0) == 0);
  CHECK(aoii::step_aoii(p, 4, true, 0.999999) == 5);
  CHECK(aoii::step_aoii(p, 0, false, 0.999999) == 1);
  CHECK(aoii::step_aoii(p, 9, false, 0.3) == aoii::step_aoii(p, 9, false, 0.3));
}

TEST_CASE("step_aoii frequencies match the kernel") {
  const SystemParams p(4, 0.45, 0.65);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr int kDraws = 1'000'000;
  for (std::uint64_t s : {0u, 3u}) {
    for (bool tx : {false, true}) {
      int resets = 0;
      for (int i = 0; i < kDraws; ++i) resets += aoii::step_aoii(p, s, tx, u(rng)) == 0;
      const double expect = aoii::aoii_kernel(p, s, tx).p_reset;
      const double sd = std::sqrt(expect * (1 - expect) / kDraws);
      CHECK(std::abs(resets / double(kDraws) - expect) < 5 * sd);
    }
  }
}

TEST_CASE("step_aoi") {
  const SystemParams p(3, 0.5, 0.5);
  CHECK(aoii::step_aoi(p, 7, true, true) == 1);
  CHECK(aoii::step_aoi(p, 7, true, false) == 8);
  CHECK(aoii::step_aoi(p, 0, false, true) == 1);
  CHECK(aoii::step_aoi(p, 4, false, true) == 5);
}

TEST_CASE("penalty state") {
  CHECK_FALSE(aoii::PenaltyState{0, 3}.in_error());
  CHECK(aoii::PenaltyState{2, 3}.in_error());
}
