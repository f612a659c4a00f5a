// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "cfsense/errors.hpp"
#include "cfsense/scene.hpp"

using namespace cfsense;

TEST_SUITE_BEGIN("scene");

TEST_CASE("distance basics") {
  CHECK(distance({0, 0}, {3, 4}) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(distance({7, -2}, {7, -2}) == 0.0);
  CHECK(distance({0, 0}, {100, 0}) == doctest::Approx(100.0).epsilon(1e-15));
}

TEST_CASE("distance symmetry and triangle inequality") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int i = 0; i < 200; ++i) {
    const Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    CHECK(distance(a, b) == distance(b, a));
    CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12);
  }
}

TEST_CASE("relative_angle conventions") {
  RuConfig ru;
  ru.position = {0, 0};
  ru.boresight = {1, 0};
  CHECK(relative_angle(ru, {5, 0}) == doctest::Approx(0.0));
  CHECK(relative_angle(ru, {0, 5}) == doctest::Approx(std::numbers::pi / 2));
  CHECK(relative_angle(ru, {0, -5}) == doctest::Approx(-std::numbers::pi / 2));

  // §V style: boresight through the triangle center sees the center at angle 0.
  RuConfig corner;
  corner.position = {0, 0};
  corner.boresight = Vec2{50.0, 28.867}.normalized();
  CHECK(relative_angle(corner, {50.0, 28.867}) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(relative_angle(ru, ru.position), std::domain_error);
}

TEST_CASE("relative_angle on-boresight property and range") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    RuConfig ru;
    ru.position = {u(rng) * 50, u(rng) * 50};
    ru.boresight = Vec2{u(rng), u(rng)}.normalized();
    const double t = std::abs(u(rng)) * 100 + 1e-3;
    CHECK(relative_angle(ru, ru.position + t * ru.boresight) == doctest::Approx(0.0));
    const Vec2 p{u(rng) * 200, u(rng) * 200};
    if (p != ru.position) {
      const double a = relative_angle(ru, p);
      CHECK(a > -std::numbers::pi);
      CHECK(a <= std::numbers::pi);
    }
  }
}

TEST_CASE("bistatic_delay values") {
  RuConfig a, b;
  a.position = {0, 0};
  b.position = {2 * 149.896229, 0};
  // both legs 149.896229 m from the midpoint
  CHECK(bistatic_delay(a, b, {149.896229, 0}) == doctest::Approx(1e-6).epsilon(1e-12));

  RuConfig c = a;
  c.position = {0, 0};
  CHECK(bistatic_delay(a, c, {0, 0}) == 0.0);

  RuConfig i, k;
  i.position = {0, 0};
  k.position = {100, 0};
  const Vec2 p{50, 86};
  const double expected = (std::hypot(50.0, 86.0) + std::hypot(-50.0, 86.0)) / kSpeedOfLight;
  CHECK(bistatic_delay(i, k, p) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(bistatic_delay(i, k, p) == bistatic_delay(k, i, p));
}

TEST_CASE("bistatic_pathloss values and scaling") {
  RuConfig i, k;
  i.position = {0, 0};
  k.position = {2, 0};
  const Vec2 unit_point{1, 0};  // d_i = d_k = 1
  const double lambda = 0.0299792458;
  const double pi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;
  const double expected = lambda * lambda / (64.0 * pi3);
  CHECK(bistatic_pathloss(i, k, unit_point, lambda) ==
        doctest::Approx(expected).epsilon(1e-15));
  CHECK(expected == doctest::Approx(4.529e-7).epsilon(1e-3));

  // doubling both legs divides by 16; doubling lambda quadruples
  RuConfig i2, k2;
  i2.position = {0, 0};
  k2.position = {4, 0};
  const Vec2 p2{2, 0};
  CHECK(bistatic_pathloss(i2, k2, p2, lambda) ==
        doctest::Approx(expected / 16.0).epsilon(1e-12));
  CHECK(bistatic_pathloss(i, k, unit_point, 2 * lambda) ==
        doctest::Approx(4.0 * expected).epsilon(1e-12));

  CHECK(bistatic_pathloss(i, k, unit_point, lambda) ==
        bistatic_pathloss(k, i, unit_point, lambda));
  CHECK_THROWS_AS(bistatic_pathloss(i, k, i.position, lambda), std::domain_error);
}

TEST_CASE("build_grid reference dimensions") {
  const GridSpec g = make_grid({25, 20}, {75, 70}, 20, 20);
  REQUIRE(g.points.size() == 400);
  CHECK(g.points[1].x() - g.points[0].x() == doctest::Approx(50.0 / 19).epsilon(1e-13));
  CHECK(g.points[20].y() - g.points[0].y() == doctest::Approx(50.0 / 19).epsilon(1e-13));

  const GridSpec fine = make_grid({25, 20}, {75, 70}, 40, 40);
  REQUIRE(fine.points.size() == 1600);
  CHECK(fine.points[1].x() - fine.points[0].x() ==
        doctest::Approx(50.0 / 39).epsilon(1e-13));
}

TEST_CASE("build_grid corners and ordering") {
  const GridSpec g = make_grid({0, 0}, {1, 1}, 2, 2);
  REQUIRE(g.points.size() == 4);
  CHECK(g.points[0] == Vec2{0, 0});
  CHECK(g.points[1] == Vec2{1, 0});  // x fastest
  CHECK(g.points[2] == Vec2{0, 1});
  CHECK(g.points[3] == Vec2{1, 1});

  GridSpec bad;
  bad.corner_min = {1, 0};
  bad.corner_max = {0, 1};
  bad.nx = bad.ny = 2;
  CHECK_THROWS_AS(build_grid(bad), ConfigError);
}

TEST_CASE("build_grid points stay inside the box, endpoints exact") {
  const GridSpec g = make_grid({-3.5, 2.25}, {7.75, 9.5}, 7, 5);
  CHECK(static_cast<int>(g.points.size()) == g.nx * g.ny);
  for (const auto& p : g.points) {
    CHECK(p.x() >= g.corner_min.x());
    CHECK(p.x() <= g.corner_max.x());
    CHECK(p.y() >= g.corner_min.y());
    CHECK(p.y() <= g.corner_max.y());
  }
  CHECK(g.points.front() == g.corner_min);
  CHECK(g.points.back() == g.corner_max);
}

TEST_CASE("config validation") {
  RuConfig ru;
  ru.boresight = {1, 1};  // not unit
  ru.num_antennas = 8;
  ru.num_beams = 4;
  CHECK_THROWS_AS(ru.validate(), ConfigError);
  ru.boresight = Vec2{1, 1}.normalized();
  CHECK_NOTHROW(ru.validate());
  ru.num_beams = 8;  // Z must be < M
  CHECK_THROWS_AS(ru.validate(), ConfigError);
  ru.num_beams = 4;
  ru.tx_power_w = 0.0;
  CHECK_THROWS_AS(ru.validate(), ConfigError);

  Scene s;
  s.rus = {ru, ru};  // duplicate positions
  s.rus[0].tx_power_w = s.rus[1].tx_power_w = 1.0;
  s.grid = make_grid({0, 0}, {1, 1}, 2, 2);
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.rus[1].position = {10, 0};
  CHECK_NOTHROW(s.validate());
  CHECK(s.wavelength() == doctest::Approx(kSpeedOfLight / s.carrier_freq_hz));

  s.targets = {{{1, 1}, 2.0}, {{1, 1}, 3.0}};  // duplicate targets
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_SUITE_END();
