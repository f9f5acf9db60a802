#pragma once

#include <Eigen/Core>
#include <iosfwd>

#include "gsamp/grid.hpp"

namespace gsamp {

// f(x) = sum_n c_n exp(-a * scale^2 * |x - n|^2), the sum running over the
// coefficient support (Z or Z^2). The shape of every kernel is the product
// a * scale^2; keeping the two factors separate lets a rescaled space carry
// its native lattice step through scale while the coefficient indices stay
// integer. trunc_tol controls how far from the evaluation point kernels are
// kept: an index is included iff a*scale^2*dist^2 <= -ln(trunc_tol) + 5.
struct gauss_series {
  double a = 1.0;
  double scale = 1.0;
  double trunc_tol = 1e-14;
  coeff_grid coeffs;
};

// Validates parameters (a > 0, scale > 0, trunc_tol in (0, 1)).
gauss_series make_series(double a, double scale, coeff_grid coeffs,
                         double trunc_tol = 1e-14);

// Re-tags the shape factors without changing the function. The product
// a * scale^2 must be preserved to relative 1e-12.
gauss_series with_shape(const gauss_series& f, double a, double scale);

// Evaluation is supported on the horizontal strip |Im z| <= strip_half_width
// (per coordinate in dim 2); outside it the truncation certificate degrades
// and eval throws unsupported_domain.
inline constexpr double strip_half_width = 10.0;

complexd eval(const gauss_series& f, double x);
complexd eval(const gauss_series& f, complexd z);
complexd eval(const gauss_series& f, double x, double y);
complexd eval(const gauss_series& f, complexd z, complexd w);

Eigen::VectorXcd eval(const gauss_series& f, const Eigen::VectorXd& xs);
Eigen::VectorXcd eval(const gauss_series& f, const Eigen::VectorXcd& zs);
Eigen::VectorXcd eval(const gauss_series& f,
                      const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts);

// Value plus a rigorous bound on the dropped tail, |full sum - value| <=
// tail_bound. The bound is the exact sum of the omitted term magnitudes.
struct eval_report {
  complexd value;
  double tail_bound;
};

eval_report eval_certified(const gauss_series& f, complexd z);
eval_report eval_certified(const gauss_series& f, complexd z, complexd w);

// Dense-grid estimate of sup |f| over a real window. The default window is
// the support box inflated by 4 kernel widths (4 / sqrt(a * scale^2)) and the
// default step is 0.05 / sqrt(a * scale^2); past the inflated box |f| decays
// below anything the grid can see.
double sup_norm_estimate(const gauss_series& f, double lo, double hi,
                         double step);
double sup_norm_estimate(const gauss_series& f, const Eigen::Vector2d& lo,
                         const Eigen::Vector2d& hi, double step);
double sup_norm_estimate(const gauss_series& f);

// Riemann estimate of the function Lp norm against the coefficient lp norm.
// A finite-supported coefficient sequence makes the two comparable with
// constants depending only on a * scale^2 and p; the ratio is the empirical
// witness. Step is 0.2 / sqrt(a * scale^2), window as in sup_norm_estimate.
struct norm_equivalence_report {
  double function_norm;
  double coeff_norm;
  double ratio;  // function_norm / coeff_norm, NaN when degenerate
  bool degenerate;
};

norm_equivalence_report lp_norm_equivalence_check(const gauss_series& f,
                                                  double p);

// Text serialization. Shortest round-trip decimal formatting, so
// write -> read reproduces the series bit for bit. Layout:
//   gsamp-series-v1
//   <dim> <a> <scale> <p>
//   <lo_x> <hi_x> [<lo_y> <hi_y>]
//   <n> [<m>] <re> <im>          one line per nonzero coefficient
void write_series(std::ostream& os, const gauss_series& f);
gauss_series read_series(std::istream& is);

}  // namespace gsamp
