#pragma once

#include <Eigen/Core>

#include "gsamp/point_set.hpp"

namespace gsamp {

// Planar configuration R * (g1/sigma, sigma*g2) for g1 in gamma1, g2 in
// gamma2, where R is the rotation sending e1 to (p,q)/sigma and sigma =
// sqrt(p^2 + q^2). (p,q) = (1,0) reduces to the Cartesian product
// gamma1 x gamma2.
class slanted_config {
 public:
  slanted_config(int p, int q, point_set_1d gamma1, point_set_1d gamma2);

  int p() const { return p_; }
  int q() const { return q_; }
  double sigma() const;
  Eigen::Matrix2d rotation() const;  // columns (p,q)/sigma, (-q,p)/sigma

  const point_set_1d& gamma1() const { return g1_; }
  const point_set_1d& gamma2() const { return g2_; }

  // Pointwise-exact set operations. translated() absorbs the shift into the
  // offset sets: gamma1 + p*u + q*v and gamma2 + (p*v - q*u)/sigma^2, which
  // reproduces lambda + (u,v) for every generated point. negated() is the
  // separate set map lambda -> -lambda; compose the two for reflected
  // translates.
  slanted_config translated(const Eigen::Vector2d& shift) const;
  slanted_config negated() const;

  // Same generated set through the swapped parameters (p', q') = (q, -p),
  // gamma1' = -sigma^2 * gamma2, gamma2' = gamma1 / sigma^2.
  slanted_config alternative_representation() const;

 private:
  int p_, q_;
  point_set_1d g1_, g2_;
};

// All configuration points inside the box [lo, hi], one per row, in
// lexicographic (gamma1 index, gamma2 index) generation order after a final
// deterministic sort by (x, y).
Eigen::Matrix<double, Eigen::Dynamic, 2> build_slanted(
    const slanted_config& cfg, const Eigen::Vector2d& lo,
    const Eigen::Vector2d& hi);

// Family of parallel lines {x : x . v in gamma} with unit normal v. Rational
// families carry coprime (p, q) with v = (p,q)/sigma; irrational ones carry a
// caller-declared slope s with v = (1,s)/sqrt(1+s^2) (rationality of a float
// is not detectable, so the caller must flag it).
class line_family {
 public:
  static line_family rational(int p, int q, point_set_1d offsets);
  static line_family irrational(double slope, point_set_1d offsets);

  bool is_rational() const { return rational_; }
  int p() const { return p_; }
  int q() const { return q_; }
  Eigen::Vector2d v() const;        // unit normal
  double sigma() const;             // sqrt(p^2+q^2), infinity when irrational
  const point_set_1d& offsets() const { return offsets_; }

  line_family with_offsets(point_set_1d offsets) const;

 private:
  line_family() = default;

  bool rational_ = true;
  int p_ = 1, q_ = 0;
  double slope_ = 0.0;
  point_set_1d offsets_ = point_set_1d::prog(1.0);
};

}  // namespace gsamp
