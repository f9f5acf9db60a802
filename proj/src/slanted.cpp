#include "gsamp/slanted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "gsamp/errors.hpp"

namespace gsamp {

namespace {

void check_coprime(int p, int q) {
  if (p == 0 && q == 0) throw invalid_parameter("(p, q) must not both be zero");
  if (std::gcd(std::abs(p), std::abs(q)) != 1) {
    throw invalid_parameter("(p, q) must be coprime");
  }
}

}  // namespace

slanted_config::slanted_config(int p, int q, point_set_1d gamma1,
                               point_set_1d gamma2)
    : p_(p), q_(q), g1_(std::move(gamma1)), g2_(std::move(gamma2)) {
  check_coprime(p, q);
  const Eigen::Matrix2d R = rotation();
  const double resid = (R.transpose() * R - Eigen::Matrix2d::Identity())
                           .cwiseAbs()
                           .maxCoeff();
  if (resid > 1e-15) {
    throw precondition_error("rotation block failed the orthogonality check");
  }
}

double slanted_config::sigma() const {
  return std::sqrt(static_cast<double>(p_) * p_ + static_cast<double>(q_) * q_);
}

Eigen::Matrix2d slanted_config::rotation() const {
  const double s = sigma();
  Eigen::Matrix2d R;
  R << p_ / s, -q_ / s, q_ / s, p_ / s;
  return R;
}

slanted_config slanted_config::translated(const Eigen::Vector2d& shift) const {
  const double s2 = static_cast<double>(p_) * p_ + static_cast<double>(q_) * q_;
  const double d1 = p_ * shift.x() + q_ * shift.y();
  const double d2 = (p_ * shift.y() - q_ * shift.x()) / s2;
  return slanted_config(p_, q_, g1_.translated(d1), g2_.translated(d2));
}

slanted_config slanted_config::negated() const {
  return slanted_config(p_, q_, g1_.negated(), g2_.negated());
}

slanted_config slanted_config::alternative_representation() const {
  const double s2 = static_cast<double>(p_) * p_ + static_cast<double>(q_) * q_;
  return slanted_config(q_, -p_, g2_.scaled(s2).negated(), g1_.scaled(1.0 / s2));
}

Eigen::Matrix<double, Eigen::Dynamic, 2> build_slanted(
    const slanted_config& cfg, const Eigen::Vector2d& lo,
    const Eigen::Vector2d& hi) {
  if (!(hi.x() >= lo.x()) || !(hi.y() >= lo.y())) {
    throw invalid_parameter("window is empty");
  }
  const double s = cfg.sigma();
  // |point|^2 = (g1/sigma)^2 + (sigma*g2)^2, so a box of corner radius r
  // admits only |g1| <= r*sigma and |g2| <= r/sigma.
  const double r = std::max({lo.norm(), hi.norm(),
                             Eigen::Vector2d(lo.x(), hi.y()).norm(),
                             Eigen::Vector2d(hi.x(), lo.y()).norm()}) +
                   1.0;
  const Eigen::VectorXd g1 = cfg.gamma1().points(-r * s, r * s);
  const Eigen::VectorXd g2 = cfg.gamma2().points(-r / s, r / s);
  const double s2 = s * s;
  std::vector<Eigen::Vector2d> pts;
  for (Eigen::Index i = 0; i < g1.size(); ++i) {
    for (Eigen::Index j = 0; j < g2.size(); ++j) {
      const double x = cfg.p() * g1[i] / s2 - cfg.q() * g2[j];
      const double y = cfg.q() * g1[i] / s2 + cfg.p() * g2[j];
      if (x >= lo.x() && x <= hi.x() && y >= lo.y() && y <= hi.y()) {
        pts.emplace_back(x, y);
      }
    }
  }
  std::sort(pts.begin(), pts.end(),
            [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
              return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
            });
  Eigen::Matrix<double, Eigen::Dynamic, 2> out(
      static_cast<Eigen::Index>(pts.size()), 2);
  for (Eigen::Index k = 0; k < out.rows(); ++k) out.row(k) = pts[k];
  return out;
}

line_family line_family::rational(int p, int q, point_set_1d offsets) {
  check_coprime(p, q);
  line_family f;
  f.rational_ = true;
  f.p_ = p;
  f.q_ = q;
  f.offsets_ = std::move(offsets);
  return f;
}

line_family line_family::irrational(double slope, point_set_1d offsets) {
  if (!std::isfinite(slope)) {
    throw invalid_parameter("irrational slope value must be finite");
  }
  line_family f;
  f.rational_ = false;
  f.slope_ = slope;
  f.offsets_ = std::move(offsets);
  return f;
}

Eigen::Vector2d line_family::v() const {
  if (rational_) {
    const double s = std::sqrt(static_cast<double>(p_) * p_ +
                               static_cast<double>(q_) * q_);
    return {p_ / s, q_ / s};
  }
  const double n = std::sqrt(1.0 + slope_ * slope_);
  return {1.0 / n, slope_ / n};
}

double line_family::sigma() const {
  if (!rational_) return std::numeric_limits<double>::infinity();
  return std::sqrt(static_cast<double>(p_) * p_ + static_cast<double>(q_) * q_);
}

line_family line_family::with_offsets(point_set_1d offsets) const {
  line_family f = *this;
  f.offsets_ = std::move(offsets);
  return f;
}

}  // namespace gsamp
