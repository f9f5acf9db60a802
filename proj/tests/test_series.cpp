#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gsamp/errors.hpp"
#include "gsamp/series.hpp"

using namespace gsamp;

namespace {

// Untruncated reference sum over the whole support.
complexd naive_eval(const gauss_series& f, complexd z, complexd w = 0.0) {
  const double shape = f.a * f.scale * f.scale;
  complexd s = 0.0;
  for (int n = f.coeffs.lo().x(); n <= f.coeffs.hi().x(); ++n) {
    for (int m = f.coeffs.lo().y(); m <= f.coeffs.hi().y(); ++m) {
      const complexd dz = z - static_cast<double>(n);
      const complexd dw = w - static_cast<double>(m);
      complexd e = -shape * dz * dz;
      if (f.coeffs.dim() == 2) e -= shape * dw * dw;
      s += f.coeffs.at(n, m) * std::exp(e);
    }
  }
  return s;
}

gauss_series random_series_1d(unsigned seed, int radius, double a,
                              double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  coeff_grid g(-radius, radius);
  for (int n = -radius; n <= radius; ++n) g.at(n) = complexd(u(rng), u(rng));
  return make_series(a, scale, std::move(g));
}

}  // namespace

TEST_SUITE("series") {

TEST_CASE("eval matches the full sum inside the support") {
  const gauss_series f = random_series_1d(7, 5, 1.0, 1.0);
  for (double x = -3.0; x <= 3.0; x += 0.37) {
    CHECK(std::abs(eval(f, x) - naive_eval(f, x)) < 1e-12);
  }
  // Complex arguments inside the strip.
  const complexd z(0.4, 1.3);
  CHECK(std::abs(eval(f, z) - naive_eval(f, z)) < 1e-10);
}

TEST_CASE("2d eval matches the full sum") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  coeff_grid g(Eigen::Vector2i(-3, -4), Eigen::Vector2i(3, 4));
  for (int n = -3; n <= 3; ++n) {
    for (int m = -4; m <= 4; ++m) g.at(n, m) = complexd(u(rng), u(rng));
  }
  const gauss_series f = make_series(0.8, 1.0, std::move(g));
  for (double x = -2.0; x <= 2.0; x += 0.61) {
    for (double y = -2.0; y <= 2.0; y += 0.53) {
      CHECK(std::abs(eval(f, x, y) - naive_eval(f, x, y)) < 1e-12);
    }
  }
}

TEST_CASE("batch eval agrees with scalar eval") {
  const gauss_series f = random_series_1d(23, 6, 2.0, 1.0);
  Eigen::VectorXd xs(9);
  for (int i = 0; i < 9; ++i) xs[i] = -4.0 + i;
  const Eigen::VectorXcd vals = eval(f, xs);
  for (int i = 0; i < 9; ++i) {
    CHECK(std::abs(vals[i] - eval(f, xs[i])) == 0.0);
  }
}

TEST_CASE("certified eval bounds the dropped tail") {
  // A wide support makes the truncation actually drop terms.
  const gauss_series f = random_series_1d(31, 40, 3.0, 1.0);
  for (double x : {-35.0, -12.3, 0.0, 7.7, 39.0}) {
    const eval_report r = eval_certified(f, complexd(x, 0.0));
    const complexd full = naive_eval(f, x);
    // tail_bound covers the dropped terms in exact arithmetic; the two sums
    // also differ by summation roundoff, which the slack term absorbs.
    const double slack = 1e-13 * (1.0 + std::abs(full));
    CHECK(std::abs(full - r.value) <= r.tail_bound + slack);
  }
}

TEST_CASE("eval outside the strip throws") {
  const gauss_series f = random_series_1d(5, 3, 1.0, 1.0);
  CHECK_THROWS_AS(eval(f, complexd(0.0, 10.5)), unsupported_domain);
}

TEST_CASE("with_shape preserves the function") {
  const gauss_series f = random_series_1d(41, 5, 2.0, 1.0);
  const gauss_series g = with_shape(f, 8.0, 0.5);
  CHECK(g.a == 8.0);
  CHECK(g.scale == 0.5);
  for (double x = -2.0; x <= 2.0; x += 0.41) {
    CHECK(std::abs(eval(f, x) - eval(g, x)) < 1e-13);
  }
  CHECK_THROWS_AS(with_shape(f, 1.0, 1.0 + 1e-6), invalid_parameter);
}

TEST_CASE("parameter validation") {
  coeff_grid g(-1, 1);
  g.at(0) = 1.0;
  CHECK_THROWS_AS(make_series(0.0, 1.0, g), invalid_parameter);
  CHECK_THROWS_AS(make_series(1.0, -2.0, g), invalid_parameter);
  CHECK_THROWS_AS(make_series(1.0, 1.0, g, 2.0), invalid_parameter);
}

TEST_CASE("sup norm estimate sees the peak") {
  coeff_grid g(-2, 2);
  g.at(0) = 3.0;
  g.at(1) = -1.0;
  const gauss_series f = make_series(1.0, 1.0, std::move(g));
  const double s = sup_norm_estimate(f, -4.0, 4.0, 0.01);
  double brute = 0.0;
  for (double x = -4.0; x <= 4.0; x += 0.001) {
    brute = std::max(brute, std::abs(eval(f, x)));
  }
  CHECK(s == doctest::Approx(brute).epsilon(1e-3));
  // Default-window overload must not miss the support. Its grid is coarser
  // (step 0.05 at this shape), so allow the quadratic peak undershoot.
  CHECK(sup_norm_estimate(f) >= s * (1 - 1e-3));
}

TEST_CASE("lp norm equivalence stays within a mild bracket") {
  // Single atom: L2 norm (pi/(2a))^{1/4}, coefficient norm 1.
  coeff_grid g(0, 0);
  g.at(0) = 1.0;
  const double a = 1.0;
  const gauss_series f = make_series(a, 1.0, std::move(g));
  const norm_equivalence_report r = lp_norm_equivalence_check(f, 2.0);
  CHECK(!r.degenerate);
  const double exact = std::pow(M_PI / (2.0 * a), 0.25);
  CHECK(r.ratio == doctest::Approx(exact).epsilon(0.02));

  // Ratio spread over random draws is bounded (norm equivalence witness).
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double lo = 1e300, hi = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    coeff_grid c(-6, 6);
    for (int n = -6; n <= 6; ++n) c.at(n) = complexd(u(rng), u(rng));
    const auto rep = lp_norm_equivalence_check(
        make_series(2.0, 1.0, std::move(c)), 2.0);
    REQUIRE(!rep.degenerate);
    lo = std::min(lo, rep.ratio);
    hi = std::max(hi, rep.ratio);
  }
  CHECK(hi / lo < 10.0);
}

TEST_CASE("serialization round-trips bit for bit") {
  const gauss_series f = random_series_1d(55, 7, 0.9, 2.0);
  std::ostringstream o1;
  write_series(o1, f);
  std::istringstream in(o1.str());
  const gauss_series g = read_series(in);
  CHECK(g.a == f.a);
  CHECK(g.scale == f.scale);
  CHECK(g.coeffs.lo() == f.coeffs.lo());
  CHECK(g.coeffs.hi() == f.coeffs.hi());
  for (int n = -7; n <= 7; ++n) CHECK(g.coeffs.at(n) == f.coeffs.at(n));
  std::ostringstream o2;
  write_series(o2, g);
  CHECK(o1.str() == o2.str());
}

TEST_CASE("2d serialization round-trips") {
  coeff_grid g(Eigen::Vector2i(-2, -1), Eigen::Vector2i(2, 3), inf_p);
  g.at(-2, -1) = complexd(0.5, -0.25);
  g.at(2, 3) = complexd(-1e-30, 1.0);
  const gauss_series f = make_series(3.0, 1.0, std::move(g), 1e-12);
  std::ostringstream o1;
  write_series(o1, f);
  std::istringstream in(o1.str());
  const gauss_series h = read_series(in);
  CHECK(h.coeffs.dim() == 2);
  CHECK(h.coeffs.at(-2, -1) == complexd(0.5, -0.25));
  CHECK(h.coeffs.at(2, 3) == complexd(-1e-30, 1.0));
  std::ostringstream o2;
  write_series(o2, h);
  CHECK(o1.str() == o2.str());
}

TEST_CASE("read_series rejects corrupted headers") {
  std::istringstream bad("not-a-header\n1 1 1 2\n");
  CHECK_THROWS_AS(read_series(bad), error);
}

}  // TEST_SUITE
