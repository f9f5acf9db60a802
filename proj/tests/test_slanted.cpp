#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "gsamp/errors.hpp"
#include "gsamp/slanted.hpp"

using namespace gsamp;

namespace {

std::vector<std::pair<double, double>> sorted_rows(
    const Eigen::Matrix<double, Eigen::Dynamic, 2>& m) {
  std::vector<std::pair<double, double>> v;
  v.reserve(static_cast<size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) v.emplace_back(m(i, 0), m(i, 1));
  std::sort(v.begin(), v.end());
  return v;
}

void check_same_set(const Eigen::Matrix<double, Eigen::Dynamic, 2>& a,
                    const Eigen::Matrix<double, Eigen::Dynamic, 2>& b,
                    double tol) {
  const auto va = sorted_rows(a);
  const auto vb = sorted_rows(b);
  REQUIRE(va.size() == vb.size());
  for (size_t i = 0; i < va.size(); ++i) {
    CHECK(std::abs(va[i].first - vb[i].first) < tol);
    CHECK(std::abs(va[i].second - vb[i].second) < tol);
  }
}

}  // namespace

TEST_SUITE("slanted") {

TEST_CASE("rotation is orthonormal with the right first column") {
  for (auto [p, q] : {std::pair{1, 1}, {1, 2}, {3, 4}, {2, -3}, {0, 1}}) {
    const slanted_config cfg(p, q, point_set_1d::prog(1.0),
                             point_set_1d::prog(1.0));
    const Eigen::Matrix2d R = cfg.rotation();
    CHECK((R.transpose() * R - Eigen::Matrix2d::Identity()).norm() < 1e-15);
    CHECK(R.determinant() == doctest::Approx(1.0));
    const double s = cfg.sigma();
    CHECK(R(0, 0) == doctest::Approx(p / s));
    CHECK(R(1, 0) == doctest::Approx(q / s));
  }
}

TEST_CASE("coprimality is required") {
  CHECK_THROWS_AS(slanted_config(2, 2, point_set_1d::prog(1.0),
                                 point_set_1d::prog(1.0)),
                  invalid_parameter);
  CHECK_THROWS_AS(slanted_config(0, 0, point_set_1d::prog(1.0),
                                 point_set_1d::prog(1.0)),
                  invalid_parameter);
}

TEST_CASE("generated points follow the rotated product formula") {
  const int p = 1, q = 2;
  const double s2 = 5.0;
  const slanted_config cfg(p, q, point_set_1d::prog(1.0, 0.25),
                           point_set_1d::prog(0.5));
  const auto pts = build_slanted(cfg, {-3.0, -3.0}, {3.0, 3.0});
  REQUIRE(pts.rows() > 10);
  // Each row must be (p g1/s2 - q g2, q g1/s2 + p g2) for integers j, k
  // recovered from the known offset families.
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const double x = pts(i, 0), y = pts(i, 1);
    const double g1 = (p * x + q * y);       // = gamma1 (v . lambda * sigma)
    const double g2 = (p * y - q * x) / s2;  // = gamma2
    const double j = (g1 - 0.25) / 1.0;
    const double k = g2 / 0.5;
    CHECK(std::abs(j - std::round(j)) < 1e-9);
    CHECK(std::abs(k - std::round(k)) < 1e-9);
  }
}

TEST_CASE("(1,0) is the plain product") {
  const slanted_config cfg(1, 0, point_set_1d::prog(0.9),
                           point_set_1d::prog(0.7));
  const auto pts = build_slanted(cfg, {-2.0, -2.0}, {2.0, 2.0});
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    CHECK(std::abs(std::remainder(pts(i, 0), 0.9)) < 1e-9);
    CHECK(std::abs(std::remainder(pts(i, 1), 0.7)) < 1e-9);
  }
  CHECK(pts.rows() == 5 * 5);  // both 0.9Z and 0.7Z have 5 points in [-2,2]
}

TEST_CASE("alternative representation generates the same set") {
  const slanted_config cfg(1, 2, point_set_1d::prog(0.8, 0.1),
                           point_set_1d::prog(1.1, -0.3));
  const slanted_config alt = cfg.alternative_representation();
  CHECK(alt.p() == cfg.q());
  CHECK(alt.q() == -cfg.p());
  const Eigen::Vector2d lo(-4.0, -4.0), hi(4.0, 4.0);
  check_same_set(build_slanted(cfg, lo, hi), build_slanted(alt, lo, hi), 1e-9);
}

TEST_CASE("translated configuration shifts every point") {
  const slanted_config cfg(2, 1, point_set_1d::prog(1.3, 0.2),
                           point_set_1d::prog(0.9));
  const Eigen::Vector2d t(0.33, -0.41);
  // Generate the base set on an inflated box, shift manually, clip, and
  // compare with the translated descriptor on the tight box.
  const Eigen::Vector2d lo(-3.0, -3.0), hi(3.0, 3.0);
  const auto base = build_slanted(cfg, lo - Eigen::Vector2d(2, 2),
                                  hi + Eigen::Vector2d(2, 2));
  std::vector<std::pair<double, double>> shifted;
  for (Eigen::Index i = 0; i < base.rows(); ++i) {
    const double x = base(i, 0) + t.x(), y = base(i, 1) + t.y();
    if (x >= lo.x() - 1e-12 && x <= hi.x() + 1e-12 && y >= lo.y() - 1e-12 &&
        y <= hi.y() + 1e-12) {
      shifted.emplace_back(x, y);
    }
  }
  std::sort(shifted.begin(), shifted.end());
  const auto got = sorted_rows(build_slanted(cfg.translated(t), lo, hi));
  REQUIRE(got.size() == shifted.size());
  for (size_t i = 0; i < got.size(); ++i) {
    CHECK(std::abs(got[i].first - shifted[i].first) < 1e-9);
    CHECK(std::abs(got[i].second - shifted[i].second) < 1e-9);
  }
}

TEST_CASE("negation mirrors the set") {
  const slanted_config cfg(1, 1, point_set_1d::prog(1.0, 0.3),
                           point_set_1d::prog(1.0));
  const Eigen::Vector2d lo(-3.0, -3.0), hi(3.0, 3.0);
  const auto neg = build_slanted(cfg.negated(), lo, hi);
  auto mirrored = build_slanted(cfg, lo, hi);
  mirrored = (-mirrored).eval();
  check_same_set(neg, mirrored, 1e-9);
}

TEST_CASE("line family invariants") {
  const auto fam = line_family::rational(1, 2, point_set_1d::prog(2.0));
  CHECK(fam.sigma() == doctest::Approx(std::sqrt(5.0)));
  CHECK(fam.v().norm() == doctest::Approx(1.0));
  CHECK(fam.v().x() == doctest::Approx(1.0 / std::sqrt(5.0)));

  const auto irr = line_family::irrational(1.618, point_set_1d::prog(4.0));
  CHECK(!irr.is_rational());
  CHECK(std::isinf(irr.sigma()));
  CHECK(irr.v().norm() == doctest::Approx(1.0));

  CHECK_THROWS_AS(line_family::rational(2, 4, point_set_1d::prog(1.0)),
                  invalid_parameter);
}

}  // TEST_SUITE
