#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "gsamp/point_set.hpp"
#include "gsamp/series.hpp"

namespace gsamp {

// Factories for functions in the Gaussian series span that vanish on a
// prescribed separated set. The 1D construction multiplies the Gaussian by an
// infinite product with zeros exactly on the set; its Laurent coefficients
// (recovered by contour quadrature) become the series coefficients. A 1D
// profile lifts to 2D along an integer direction, which is how vanishing on a
// slanted configuration is arranged.

// Growth budget of the infinite product, measured from the counting function
// of the set: rho is the slope such that #(gamma in [0,r)) and
// #(gamma in (-r,0]) stay below K + rho*r on the probed window. The
// construction needs rho < 1.
struct counting_report {
  double rho = 0.0;
  double K = 0.0;
  bool exact = false;  // rho taken from a pure progression's 1/alpha
};

counting_report counting_slope(const point_set_1d& gamma, double window = 200.0);

// log-magnitude / phase pair; exp(log_abs) can over- or underflow double
// while the pair stays meaningful.
struct log_complex {
  double log_abs;
  double phase;
  std::complex<double> value() const;
};

// Weierstrass-type product over gamma in the set:
//   factors (1 - e^{2a(z - gamma)}) for gamma >= 0,
//           (1 - e^{2a(gamma - z)}) for gamma < 0,
// truncated to |gamma| <= |Re z| + 20/a (omitted factors differ from 1 by
// < e^{-40}). Vanishes exactly on the set, equals 1 for the empty set.
// product_g returns the value and throws unsupported_domain when the result
// cannot be represented in double; product_g_log always works.
std::complex<double> product_g(const point_set_1d& gamma, double a,
                               std::complex<double> z);
log_complex product_g_log(const point_set_1d& gamma, double a,
                          std::complex<double> z);

struct laurent_entry {
  int k;
  std::complex<double> b;  // exp(log) when representable, else 0
  log_complex log;
  double radius;      // contour radius used for this k
  int nodes;          // trapezoid nodes at convergence
  double quad_error;  // |change| across the final node doubling
};

struct laurent_table {
  std::vector<laurent_entry> entries;  // ascending k
  double a = 0.0;
  double eps = 0.0;
  // max over k of |b_k| e^{a k^2/(1-eps)}; finite iff the computed
  // coefficients respect the analytic decay bound.
  double decay_envelope_max = 0.0;

  const laurent_entry& at(int k) const;
};

// Laurent coefficients b_k of the product (as a function of w = e^{2az})
// for k in [k_min, k_max], each by trapezoid quadrature on the circle of
// radius e^{2ak/(1-eps)}. Node count starts at nodes_per_circle (at least
// 256) and doubles until the coefficient stabilizes; failure to stabilize
// by 2^18 nodes raises accuracy_error. Requires 0 < eps < 1 - rho where rho
// is the measured counting slope.
laurent_table laurent_coeffs(const point_set_1d& gamma, double a, int k_min,
                             int k_max, double eps,
                             int nodes_per_circle = 256);

struct annihilator_1d {
  gauss_series f;  // coefficients c_k = b_k e^{a k^2} on [-k_radius, k_radius]
  point_set_1d target;
  counting_report counting;
  double eps;
  laurent_table table;
  // Largest index where |gamma| <= report_halfwidth is checked; the residual
  // is max |f| over those target points, sup_norm a grid estimate there.
  double report_halfwidth;
  double residual;
  double sup_norm;
};

// Builds a function in the span of integer Gaussian shifts (shape a,
// scale 1) vanishing on the set. eps defaults to (1-rho)/2. Throws
// infeasible_density when rho >= 1, range_too_small when the coefficient
// tail is not negligible at the requested k_radius, accuracy_error when the
// closed form e^{-a z^2} * product disagrees with the coefficient series.
annihilator_1d build_annihilator_1d(const point_set_1d& gamma, double a,
                                    std::optional<double> eps = std::nullopt,
                                    int k_radius = 12);

// 2D function built from a 1D profile g (scale sigma = sqrt(p^2+q^2)) by
// placing g's coefficients at the points (p n, q n). closed_form evaluates
//   exp(a ((p z + q w)/sigma)^2 - a z^2 - a w^2) * g((p z + q w)/sigma^2)
// which the series reproduces; |f| <= sup |g| everywhere on R^2.
struct lifted_function {
  gauss_series series;  // 2D, shape a, scale 1
  gauss_series g1d;
  int p = 0;
  int q = 0;
  std::complex<double> closed_form(std::complex<double> z,
                                   std::complex<double> w) const;
  std::complex<double> closed_form(double x, double y) const;
};

lifted_function lift_to_2d(const gauss_series& g, int p, int q);

// Exact 1D profile with coefficients (-1)^n: vanishes on half-integers
// (scaled by the series scale). Used for the critical-density obstructions.
gauss_series alternating_theta(double a, double scale);

// For direction (p,q), the pair of nontrivial 2D functions that vanish on
// every slanted configuration whose first / second offset family sits on the
// critical residues: .first vanishes wherever gamma_1 in sigma^2 (Z + 1/2),
// .second wherever gamma_2 in Z + 1/2.
std::pair<lifted_function, lifted_function> critical_counterexamples(int p,
                                                                     int q,
                                                                     double a);

}  // namespace gsamp
