#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "gsamp/annihilator.hpp"
#include "gsamp/errors.hpp"
#include "gsamp/slanted.hpp"

using namespace gsamp;

TEST_SUITE("annihilator") {

TEST_CASE("counting slope is exact for progressions") {
  const counting_report r1 = counting_slope(point_set_1d::prog(2.0, 0.3));
  CHECK(r1.exact);
  CHECK(r1.rho == doctest::Approx(0.5));

  const counting_report r2 =
      counting_slope(point_set_1d::prog_union({{1.0, 0.0}, {1.0, 0.5}}));
  CHECK(r2.rho == doctest::Approx(2.0));

  // Explicit finite chunk: measured slope, K absorbs the excess.
  Eigen::VectorXd pts(5);
  pts << -1.0, 0.0, 1.0, 2.0, 3.0;
  const counting_report r3 = counting_slope(point_set_1d::explicit_list(pts));
  CHECK(!r3.exact);
  CHECK(r3.rho < 0.1);  // 5 points over a 400-wide probe window
}

TEST_CASE("product vanishes exactly on the set and nowhere nearby") {
  const auto gamma = point_set_1d::prog(2.0, 0.3);
  const double a = 1.0;
  for (double g : {0.3, 2.3, -1.7, -3.7}) {
    CHECK(std::abs(product_g(gamma, a, g)) == 0.0);
  }
  for (double x : {0.0, 1.0, -0.5, 3.0}) {
    CHECK(std::abs(product_g(gamma, a, x)) > 1e-6);
  }
  // Empty set: the empty product.
  const auto none = point_set_1d::explicit_list(Eigen::VectorXd());
  CHECK(product_g(none, a, 0.7) == std::complex<double>(1.0, 0.0));
  // log form matches the direct value away from zeros.
  const log_complex lc = product_g_log(gamma, a, {1.1, 0.4});
  CHECK(std::abs(lc.value() - product_g(gamma, a, {1.1, 0.4})) <
        1e-12 * std::abs(lc.value()));
}

TEST_CASE("laurent table structure and quadrature health") {
  const auto gamma = point_set_1d::prog(2.0, 0.3);
  const laurent_table t = laurent_coeffs(gamma, 1.0, -6, 6, 0.25);
  REQUIRE(t.entries.size() == 13);
  for (size_t i = 0; i + 1 < t.entries.size(); ++i) {
    CHECK(t.entries[i].k + 1 == t.entries[i + 1].k);
  }
  CHECK(t.at(0).k == 0);
  CHECK(t.at(-6).radius == doctest::Approx(std::exp(2.0 * (-6) / 0.75)));
  for (const laurent_entry& e : t.entries) {
    CHECK(e.quad_error <= 1e-8 * std::max(std::abs(e.b), 1e-300) + 1e-250);
    CHECK(e.nodes >= 256);
  }
  CHECK(std::isfinite(t.decay_envelope_max));
}

TEST_CASE("eps must respect the density gap") {
  const auto gamma = point_set_1d::prog(2.0, 0.3);
  CHECK_THROWS_AS(laurent_coeffs(gamma, 1.0, -4, 4, 0.6), invalid_parameter);
  CHECK_THROWS_AS(laurent_coeffs(gamma, 1.0, -4, 4, 0.0), invalid_parameter);
  CHECK_THROWS_AS(build_annihilator_1d(point_set_1d::prog(1.0), 1.0),
                  infeasible_density);  // rho = 1
}

TEST_CASE("reference annihilator vanishes, is nontrivial, decays on budget") {
  const auto gamma = point_set_1d::prog(2.0, 0.3);
  const double a = 1.0, eps = 0.25;
  const annihilator_1d ann = build_annihilator_1d(gamma, a, eps, 12);

  CHECK(ann.counting.rho == doctest::Approx(0.5));
  CHECK(ann.eps == doctest::Approx(eps));
  CHECK(ann.residual <= 1e-8 * ann.sup_norm);

  double max_c = 0.0;
  for (int k = -12; k <= 12; ++k) {
    max_c = std::max(max_c, std::abs(ann.f.coeffs.at(k)));
  }
  CHECK(ann.sup_norm >= 0.1 * max_c);

  // Quadratic decay of the Laurent coefficients: fit log|b_k| ~ s k^2 + ...
  // and require s at least as steep as 0.75 * a/(1-eps) (the true decay can
  // exceed the guaranteed envelope, so the check is one-sided).
  std::vector<double> ks, logs;
  for (const laurent_entry& e : ann.table.entries) {
    if (std::abs(e.b) > 0.0) {
      ks.push_back(e.k);
      logs.push_back(e.log.log_abs);
    }
  }
  REQUIRE(ks.size() >= 9);
  Eigen::MatrixXd X(ks.size(), 3);
  Eigen::VectorXd y(ks.size());
  for (size_t i = 0; i < ks.size(); ++i) {
    X(i, 0) = ks[i] * ks[i];
    X(i, 1) = ks[i];
    X(i, 2) = 1.0;
    y(i) = logs[i];
  }
  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  CHECK(beta[0] <= -0.75 * a / (1.0 - eps));

  // Envelope boundedness: the normalized sequence v_k = |b_k| e^{ak^2/(1-eps)}
  // must not blow up beyond its head scale (it may decay far below it).
  std::vector<double> v;
  for (const laurent_entry& e : ann.table.entries) {
    v.push_back(std::abs(e.b) * std::exp(a * e.k * e.k / (1.0 - eps)));
  }
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double v0 = std::abs(ann.table.at(0).b);
  const double vmax = *std::max_element(v.begin(), v.end());
  CHECK(vmax <= 10.0 * std::max(v0, median));
  CHECK(vmax == doctest::Approx(ann.table.decay_envelope_max).epsilon(1e-12));
}

TEST_CASE("annihilator zeros hold on a wider window than reported") {
  const annihilator_1d ann =
      build_annihilator_1d(point_set_1d::prog(2.0, 0.3), 1.0, 0.25, 12);
  const auto pts = ann.target.points(-ann.report_halfwidth,
                                     ann.report_halfwidth);
  for (Eigen::Index i = 0; i < pts.size(); ++i) {
    CHECK(std::abs(eval(ann.f, pts[i])) <= 1.0000001e-8 * ann.sup_norm);
  }
}

TEST_CASE("alternating theta vanishes on half-integers") {
  const gauss_series th = alternating_theta(M_PI, 1.0);
  const double sup = sup_norm_estimate(th, -3.0, 3.0, 0.02);
  REQUIRE(sup > 0.5);
  for (int k = -5; k <= 5; ++k) {
    CHECK(std::abs(eval(th, k + 0.5)) <= 1e-12 * sup);
  }
  // Direct reference for the center value.
  double ref = 0.0;
  for (int n = -12; n <= 12; ++n) {
    ref += ((n % 2 + 2) % 2 == 0 ? 1.0 : -1.0) * std::exp(-M_PI * n * n);
  }
  CHECK(std::abs(eval(th, 0.0)) == doctest::Approx(std::abs(ref)).epsilon(1e-12));
}

TEST_CASE("lift reproduces the closed form") {
  const int p = 1, q = 2;
  const double a = 1.0;
  const double sigma = std::sqrt(5.0);
  coeff_grid g(-4, 4);
  for (int n = -4; n <= 4; ++n) {
    g.at(n) = std::complex<double>(std::cos(0.7 * n), std::sin(1.3 * n + 0.2));
  }
  const gauss_series prof = make_series(a, sigma, std::move(g));
  const lifted_function f = lift_to_2d(prof, p, q);
  CHECK(f.series.coeffs.dim() == 2);
  for (double x = -2.0; x <= 2.0; x += 0.57) {
    for (double y = -2.0; y <= 2.0; y += 0.61) {
      CHECK(std::abs(eval(f.series, x, y) - f.closed_form(x, y)) < 1e-10);
    }
  }
  // Wrong profile scale is rejected.
  const gauss_series bad = make_series(a, 2.0, coeff_grid(-1, 1));
  CHECK_THROWS_AS(lift_to_2d(bad, p, q), invalid_parameter);
}

TEST_CASE("critical pair vanishes on the matching configurations") {
  const double a = M_PI;
  const auto [f1, f2] = critical_counterexamples(1, 1, a);

  // f2: zero wherever the second offset family sits on Z + 1/2.
  const slanted_config lam2(1, 1, point_set_1d::prog(0.7),
                            point_set_1d::prog(1.0, 0.5));
  const auto pts2 = build_slanted(lam2, {-3.0, -3.0}, {3.0, 3.0});
  REQUIRE(pts2.rows() >= 20);
  const double sup2 = std::abs(f2.closed_form(0.0, 0.0));
  CHECK(sup2 > 0.5);  // nontrivial
  for (Eigen::Index i = 0; i < pts2.rows(); ++i) {
    CHECK(std::abs(eval(f2.series, pts2(i, 0), pts2(i, 1))) <= 1e-8 * sup2);
  }

  // f1: zero wherever the first offset family sits on sigma^2 (Z + 1/2).
  const slanted_config lam1(1, 1, point_set_1d::prog(2.0, 1.0),
                            point_set_1d::prog(0.7));
  const auto pts1 = build_slanted(lam1, {-3.0, -3.0}, {3.0, 3.0});
  REQUIRE(pts1.rows() >= 20);
  double peak1 = 0.0;
  for (double x = -1.0; x <= 1.0; x += 0.1) {
    for (double y = -1.0; y <= 1.0; y += 0.1) {
      peak1 = std::max(peak1, std::abs(f1.closed_form(x, y)));
    }
  }
  CHECK(peak1 > 0.1);
  for (Eigen::Index i = 0; i < pts1.rows(); ++i) {
    CHECK(std::abs(eval(f1.series, pts1(i, 0), pts1(i, 1))) <= 1e-8 * peak1);
  }
}

}  // TEST_SUITE
