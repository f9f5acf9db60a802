#include "gsamp/grid.hpp"

#include <cmath>

#include "gsamp/errors.hpp"

namespace gsamp {

namespace {

void check_p(double p) {
  if (std::isnan(p) || p < 1.0) {
    throw invalid_parameter("norm exponent must satisfy p >= 1 (inf allowed)");
  }
}

}  // namespace

coeff_grid::coeff_grid(int lo, int hi, double declared_p)
    : dim_(1), lo_(lo, 0), hi_(hi, 0), p_(declared_p) {
  if (hi < lo) throw invalid_parameter("coefficient support is empty");
  check_p(declared_p);
  v_ = Eigen::ArrayXXcd::Zero(hi - lo + 1, 1);
}

coeff_grid::coeff_grid(const Eigen::Vector2i& lo, const Eigen::Vector2i& hi,
                       double declared_p)
    : dim_(2), lo_(lo), hi_(hi), p_(declared_p) {
  if (hi.x() < lo.x() || hi.y() < lo.y()) {
    throw invalid_parameter("coefficient support is empty");
  }
  check_p(declared_p);
  v_ = Eigen::ArrayXXcd::Zero(hi.x() - lo.x() + 1, hi.y() - lo.y() + 1);
}

complexd& coeff_grid::at(int n, int m) {
  if (!contains(n, m)) throw precondition_error("coefficient index out of support");
  return v_(n - lo_.x(), m - lo_.y());
}

complexd coeff_grid::at(int n, int m) const {
  if (!contains(n, m)) return complexd(0.0, 0.0);
  return v_(n - lo_.x(), m - lo_.y());
}

bool coeff_grid::contains(int n, int m) const {
  if (dim_ == 1 && m != 0) return false;
  return n >= lo_.x() && n <= hi_.x() && m >= lo_.y() && m <= hi_.y();
}

double coeff_grid::lp_norm(double p) const {
  check_p(p);
  const Eigen::ArrayXXd mags = v_.abs();
  if (std::isinf(p)) return mags.maxCoeff();
  if (p == 1.0) return mags.sum();
  if (p == 2.0) return std::sqrt((mags * mags).sum());
  // General exponent: factor out the peak so pow stays in a tame range.
  const double peak = mags.maxCoeff();
  if (peak == 0.0) return 0.0;
  const double s = (mags / peak).pow(p).sum();
  return peak * std::pow(s, 1.0 / p);
}

}  // namespace gsamp
