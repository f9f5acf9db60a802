#pragma once

#include <Eigen/Core>
#include <complex>
#include <limits>

namespace gsamp {

using complexd = std::complex<double>;

// Finitely supported coefficient array over Z (dim 1) or Z^2 (dim 2).
// Support is the inclusive integer rectangle [lo.x(), hi.x()] x [lo.y(), hi.y()];
// dim 1 stores lo.y() == hi.y() == 0 and ignores the second index.
// declared_p is the norm exponent the grid is meant to be measured in;
// infinity is allowed.
class coeff_grid {
 public:
  coeff_grid(int lo, int hi, double declared_p = 2.0);
  coeff_grid(const Eigen::Vector2i& lo, const Eigen::Vector2i& hi,
             double declared_p = 2.0);

  int dim() const { return dim_; }
  const Eigen::Vector2i& lo() const { return lo_; }
  const Eigen::Vector2i& hi() const { return hi_; }
  double declared_p() const { return p_; }

  complexd& at(int n, int m = 0);
  complexd at(int n, int m = 0) const;
  bool contains(int n, int m = 0) const;

  // Row r holds index n = lo.x() + r, column c holds m = lo.y() + c.
  const Eigen::ArrayXXcd& values() const { return v_; }
  Eigen::ArrayXXcd& values() { return v_; }

  long size() const { return v_.size(); }

  double lp_norm() const { return lp_norm(p_); }
  double lp_norm(double p) const;
  double l1_norm() const { return lp_norm(1.0); }

 private:
  int dim_;
  Eigen::Vector2i lo_, hi_;
  double p_;
  Eigen::ArrayXXcd v_;
};

inline constexpr double inf_p = std::numeric_limits<double>::infinity();

}  // namespace gsamp
