#include <doctest.h>

#include <cmath>
#include <random>

#include "gsamp/errors.hpp"
#include "gsamp/gabor.hpp"

using namespace gsamp;

TEST_SUITE("gabor") {

TEST_CASE("unit cell volume equals c*d") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.3, 3.0);
  const std::vector<std::pair<int, int>> dirs = {{1, 1}, {1, 2}, {2, 1},
                                                 {3, 4}, {1, -2}};
  for (int trial = 0; trial < 10; ++trial) {
    const auto [p, q] = dirs[trial % dirs.size()];
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const gabor_spec spec = gabor_spec::delta_abcd(p, q, a, b, c, d);
    const delta_lattice lat =
        build_delta_lattice(spec, {-4.0, -4.0}, {4.0, 4.0});
    CHECK(lat.volume == doctest::Approx(c * d).epsilon(1e-12));
  }
}

TEST_CASE("axis-aligned instance reduces to a plain grid") {
  // (p,q) = (1,0), a = b = 1: time plane is cZ x dZ and the generator is
  // diagonal.
  const gabor_spec spec = gabor_spec::delta_abcd(1, 0, 1.0, 1.0, 0.9, 0.9);
  const delta_lattice lat = build_delta_lattice(spec, {-2.0, -2.0}, {2.0, 2.0});
  CHECK(lat.time_generator(0, 0) == doctest::Approx(0.9));
  CHECK(lat.time_generator(1, 1) == doctest::Approx(0.9));
  CHECK(std::abs(lat.time_generator(0, 1)) < 1e-15);
  CHECK(std::abs(lat.time_generator(1, 0)) < 1e-15);
  REQUIRE(lat.points.rows() > 0);
  for (Eigen::Index i = 0; i < lat.points.rows(); ++i) {
    CHECK(std::abs(std::remainder(lat.points(i, 0), 0.9)) < 1e-9);
    CHECK(std::abs(std::remainder(lat.points(i, 1), 0.9)) < 1e-9);
    CHECK(std::abs(std::remainder(lat.points(i, 2), 1.0)) < 1e-9);
    CHECK(std::abs(std::remainder(lat.points(i, 3), 1.0)) < 1e-9);
  }
}

TEST_CASE("generator matches the slanted construction") {
  const int p = 3, q = 4;
  const double a = 1.3, b = 0.7, c = 1.1, d = 0.5;
  const double s2 = 25.0;
  const gabor_spec spec = gabor_spec::delta_abcd(p, q, a, b, c, d);
  const delta_lattice lat = build_delta_lattice(spec, {-3.0, -3.0}, {3.0, 3.0});
  CHECK(lat.time_generator(0, 0) == doctest::Approx(p * c / (a * s2)).epsilon(1e-12));
  CHECK(lat.time_generator(1, 0) == doctest::Approx(q * c / (b * s2)).epsilon(1e-12));
  CHECK(lat.time_generator(0, 1) == doctest::Approx(-q * d / a).epsilon(1e-12));
  CHECK(lat.time_generator(1, 1) == doctest::Approx(p * d / b).epsilon(1e-12));
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(gabor_spec::delta_abcd(2, 2, 1, 1, 1, 1), invalid_parameter);
  CHECK_THROWS_AS(gabor_spec::delta_abcd(1, 1, -1, 1, 1, 1), invalid_parameter);
  CHECK_THROWS_AS(gabor_spec::delta_abcd(1, 1, 1, 1, 0, 1), invalid_parameter);
}

TEST_CASE("translating by a lattice vector leaves the bound unchanged") {
  // (1,1) with integer offset families: (1/2, 1/2) generates the time plane,
  // so translating by it maps the configuration onto itself.
  const slanted_config cfg(1, 1, point_set_1d::prog(1.0),
                           point_set_1d::prog(1.0));
  bounds_options opt;
  opt.want_upper = false;
  const auto boundsA = [&](const slanted_config& c) {
    const auto pts = build_slanted(c, {-12.0, -12.0}, {12.0, 12.0});
    const sampling_matrix m =
        assemble(M_PI, 1.0, pts, {-6, -6}, {6, 6});
    return estimate_bounds(m, 2, opt).A_est;
  };
  const double base = boundsA(cfg);
  const double moved = boundsA(cfg.translated({0.5, 0.5}));
  CHECK(base > 0.0);
  CHECK(moved == doctest::Approx(base).epsilon(1e-6));
}

TEST_CASE("sweep covers the unit cell inclusively") {
  const slanted_config cfg(1, 0, point_set_1d::prog(0.9),
                           point_set_1d::prog(0.9));
  const translate_sweep_report rep = translate_sweep(cfg, M_PI, 0.25, 6, 2);
  REQUIRE(rep.entries.size() == 25);  // ticks {0, 0.25, ..., 1} in u and v
  CHECK(rep.entries.front().u == 0.0);
  CHECK(rep.entries.back().u == 1.0);
  CHECK(rep.entries.back().v == 1.0);
  double mn = 1e300;
  for (const sweep_entry& e : rep.entries) mn = std::min(mn, e.bounds.A_est);
  CHECK(rep.min_A == doctest::Approx(mn));
  CHECK(rep.min_A > 0.0);
  // Steps that cannot tile [0,1] beyond the cap are rejected.
  CHECK_THROWS_AS(translate_sweep(cfg, M_PI, 0.3, 6, 2), invalid_parameter);
}

TEST_CASE("frame trend on a comfortably sampling product lattice") {
  const gabor_spec spec = gabor_spec::delta_abcd(1, 0, 1.0, 1.0, 0.8, 0.8);
  const gabor_trend t = frame_verdict_trend(spec, {6, 10}, 0.25, 2);
  CHECK(t.a_shape == doctest::Approx(M_PI));
  REQUIRE(t.rows.size() == 2);
  for (const gabor_trend_row& r : t.rows) {
    CHECK(r.sweep.min_A > 1e-4);
  }
  CHECK(t.max_consecutive_ratio < 2.0);
}

TEST_CASE("sampling reduction maps both entry forms") {
  const sampling_problem abcd = sampling_reduction(
      gabor_spec::delta_abcd(1, 1, 2.0, 1.0, 0.9, 0.7, 8.0));
  CHECK(abcd.a_shape == doctest::Approx(2.0));  // alpha / a^2
  CHECK(abcd.time_plane.gamma1().separation_hint() == doctest::Approx(0.9));
  CHECK(abcd.time_plane.gamma2().separation_hint() == doctest::Approx(0.7));

  const sampling_problem prod = sampling_reduction(gabor_spec::product(
      slanted_config(1, 0, point_set_1d::prog(1.0), point_set_1d::prog(1.0))));
  CHECK(prod.a_shape == doctest::Approx(M_PI));  // default window shape
}

TEST_CASE("alpha scaling feeds the reduced shape") {
  // alpha = 2 pi a^2 doubles the reduced isotropic shape.
  const gabor_spec spec =
      gabor_spec::delta_abcd(1, 0, 2.0, 1.0, 0.8, 0.8, 2.0 * M_PI * 4.0);
  const gabor_trend t = frame_verdict_trend(spec, {4, 6}, 0.25, 1);
  CHECK(t.a_shape == doctest::Approx(2.0 * M_PI));
}

}  // TEST_SUITE
