#pragma once

#include <Eigen/Core>
#include <vector>

#include "gsamp/annihilator.hpp"
#include "gsamp/frame.hpp"
#include "gsamp/slanted.hpp"

namespace gsamp {

// One line of the family clipped to the window: points base + t * dir for
// t in [t0, t1], where base = gamma * v sits on the line and dir is the unit
// tangent. Every point satisfies x . v = gamma exactly (up to 1e-12).
struct line_segment {
  double gamma;
  Eigen::Vector2d base;
  Eigen::Vector2d dir;
  double t0;
  double t1;
};

// A line family restricted to a rectangular window, with the quadrature step
// used along the lines. Segments are ordered by ascending offset.
struct trajectory_windowed {
  line_family family;
  Eigen::Vector2d window_lo;
  Eigen::Vector2d window_hi;
  double step;
  std::vector<line_segment> segments;
};

trajectory_windowed make_trajectory(const line_family& family,
                                    const Eigen::Vector2d& window_lo,
                                    const Eigen::Vector2d& window_hi,
                                    double step = 0.05);

// Arc-length integral of |f|^p over the clipped family, p in [1, inf).
// Composite trapezoid per segment, step halved until the value settles to
// 1e-6 relative; hitting the 1e-3 step floor without settling raises
// accuracy_error carrying the last two values.
double line_integral_p(const gauss_series& f, const trajectory_windowed& t,
                       double p);

// Separated point set representing the trajectory: each line is cut into
// parameter cells of length delta and every cell meeting the clipped segment
// contributes the in-cell point nearest the cell center. A scan then drops
// points closer than delta * (1 - 1e-9) to their kept predecessor on the
// same line (cell clamping at segment ends can otherwise shorten one gap).
// Requires 0 < delta < separation(offsets) / 3 so neighboring lines stay
// farther apart than in-line samples; with fewer than two lines in the
// window the offset separation poses no constraint.
Eigen::Matrix<double, Eigen::Dynamic, 2> discretize(
    const trajectory_windowed& t, double delta);

// A_est/B_est of the discretized trajectory across growing windows, same
// window convention as bound_trend: coefficients on [-N, N]^2, trajectory
// clipped to [-(N + 2 margin), N + 2 margin]^2, interior margin applied.
trend_table st_bound_trend(const line_family& family, double a,
                           const std::vector<int>& N_list, double delta,
                           int margin = 5, const bounds_options& opt = {});

struct trajectory_annihilator {
  lifted_function f;   // vanishes on every line of the family
  annihilator_1d base; // 1D construction on offsets/sigma at shape a sigma^2
  double d_plus;       // measured upper density of the offsets
  double residual;     // max |f| over dense samples of family cap window
  double sup_norm;     // grid sup over the window
  Eigen::Vector2d window_lo;
  Eigen::Vector2d window_hi;
};

// Nontrivial function of the 2D space vanishing on the whole line family
// (rational slope only): the 1D annihilator of offsets/sigma, built at shape
// a sigma^2, lifted along (p, q). Requires measured D+ (offsets) * sigma < 1,
// else infeasible_density. The residual is scanned along the family inside
// the window; the window default matches the reliable region of the 1D
// construction at the default k_radius.
trajectory_annihilator annihilator_on_trajectory(
    const line_family& family, double a,
    const Eigen::Vector2d& window_lo = Eigen::Vector2d(-8.0, -8.0),
    const Eigen::Vector2d& window_hi = Eigen::Vector2d(8.0, 8.0),
    int k_radius = 12);

}  // namespace gsamp
