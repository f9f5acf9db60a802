#include "gsamp/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gsamp/detail/kahan.hpp"
#include "gsamp/errors.hpp"
#include "gsamp/text_io.hpp"

namespace gsamp {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void check_window(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi) {
  if (!lo.allFinite() || !hi.allFinite()) {
    throw invalid_parameter("window must be finite");
  }
  if (!(hi.x() >= lo.x()) || !(hi.y() >= lo.y())) {
    throw invalid_parameter("window is empty");
  }
}

// Offset range covered by the window: gamma = x . v over the corners.
std::pair<double, double> offset_range(const line_family& family,
                                       const Eigen::Vector2d& lo,
                                       const Eigen::Vector2d& hi) {
  const Eigen::Vector2d v = family.v();
  double gmin = inf, gmax = -inf;
  for (double x : {lo.x(), hi.x()}) {
    for (double y : {lo.y(), hi.y()}) {
      const double g = x * v.x() + y * v.y();
      gmin = std::min(gmin, g);
      gmax = std::max(gmax, g);
    }
  }
  return {gmin - 1e-12, gmax + 1e-12};
}

}  // namespace

trajectory_windowed make_trajectory(const line_family& family,
                                    const Eigen::Vector2d& window_lo,
                                    const Eigen::Vector2d& window_hi,
                                    double step) {
  check_window(window_lo, window_hi);
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw invalid_parameter("quadrature step must be positive and finite");
  }
  const Eigen::Vector2d v = family.v();
  const Eigen::Vector2d u(-v.y(), v.x());

  const auto [gmin, gmax] = offset_range(family, window_lo, window_hi);
  const Eigen::VectorXd gammas = family.offsets().points(gmin, gmax);

  trajectory_windowed out{family, window_lo, window_hi, step, {}};
  for (Eigen::Index i = 0; i < gammas.size(); ++i) {
    const double gamma = gammas[i];
    const Eigen::Vector2d base = gamma * v;
    // Slab clipping against both coordinate ranges.
    double t0 = -inf, t1 = inf;
    bool empty = false;
    for (int c = 0; c < 2; ++c) {
      const double b = base[c], d = u[c];
      const double lo = window_lo[c], hi = window_hi[c];
      if (std::abs(d) < 1e-15) {
        if (b < lo - 1e-12 || b > hi + 1e-12) empty = true;
        continue;
      }
      double ta = (lo - b) / d, tb = (hi - b) / d;
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
    }
    if (empty || !(t1 >= t0)) continue;
    out.segments.push_back({gamma, base, u, t0, t1});
  }
  return out;
}

double line_integral_p(const gauss_series& f, const trajectory_windowed& t,
                       double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw invalid_parameter("exponent must lie in [1, inf)");
  }
  if (f.coeffs.dim() != 2) {
    throw invalid_parameter("line integrals take a 2D function");
  }

  const auto integrate = [&](double h) {
    detail::kahan_sum total;
    for (const line_segment& seg : t.segments) {
      const double len = seg.t1 - seg.t0;
      if (len <= 0.0) continue;
      const auto n = static_cast<Eigen::Index>(std::ceil(len / h));
      const double dt = len / static_cast<double>(n);
      Eigen::Matrix<double, Eigen::Dynamic, 2> pts(n + 1, 2);
      for (Eigen::Index j = 0; j <= n; ++j) {
        const Eigen::Vector2d x =
            seg.base + (seg.t0 + dt * static_cast<double>(j)) * seg.dir;
        pts(j, 0) = x.x();
        pts(j, 1) = x.y();
      }
      const Eigen::VectorXcd vals = eval(f, pts);
      for (Eigen::Index j = 0; j <= n; ++j) {
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        const double m = std::abs(vals[j]);
        if (m == 0.0) continue;
        total.add(w * dt * std::pow(m, p));
      }
    }
    return total.value();
  };

  double h = t.step;
  double prev = integrate(h);
  while (true) {
    const double cur = integrate(h / 2.0);
    if (std::abs(cur - prev) <= 1e-6 * std::max(std::abs(cur), 1e-300)) {
      return cur;
    }
    h /= 2.0;
    if (h / 2.0 < 1e-3 * (1.0 - 1e-12)) {
      throw accuracy_error(
          "line quadrature hit the step floor without settling; last two "
          "values " +
          format_double(prev) + ", " + format_double(cur));
    }
    prev = cur;
  }
}

Eigen::Matrix<double, Eigen::Dynamic, 2> discretize(
    const trajectory_windowed& t, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw invalid_parameter("delta must be positive and finite");
  }
  // Neighboring lines must stay 3 delta apart so cross-line distances never
  // fall below the in-line spacing. Fewer than two lines in the window means
  // there is no neighbor to collide with.
  const auto [gmin, gmax] = offset_range(t.family, t.window_lo, t.window_hi);
  try {
    const double sep = t.family.offsets().separation(gmin, gmax);
    if (!(delta < sep / 3.0)) {
      throw invalid_parameter(
          "delta must be below a third of the line separation (" +
          format_double(sep / 3.0) + ")");
    }
  } catch (const undefined_separation&) {
  }

  std::vector<Eigen::Vector2d> kept;
  for (const line_segment& seg : t.segments) {
    // Cells [k delta, (k+1) delta) along the line parameter; each cell
    // meeting [t0, t1] contributes the in-cell point nearest the center.
    auto k0 = static_cast<long>(std::floor(seg.t0 / delta));
    if ((k0 + 1) * delta <= seg.t0) ++k0;
    const auto k1 = static_cast<long>(std::floor(seg.t1 / delta));
    double last = -inf;
    for (long k = k0; k <= k1; ++k) {
      const double cell_lo = std::max(seg.t0, k * delta);
      const double cell_hi = std::min(seg.t1, (k + 1) * delta);
      if (cell_hi < cell_lo) continue;
      const double ts =
          std::clamp(delta * (k + 0.5), cell_lo, cell_hi);
      if (ts - last < delta * (1.0 - 1e-9)) continue;
      last = ts;
      kept.push_back(seg.base + ts * seg.dir);
    }
  }

  Eigen::Matrix<double, Eigen::Dynamic, 2> out(
      static_cast<Eigen::Index>(kept.size()), 2);
  for (size_t i = 0; i < kept.size(); ++i) {
    out(static_cast<Eigen::Index>(i), 0) = kept[i].x();
    out(static_cast<Eigen::Index>(i), 1) = kept[i].y();
  }
  return out;
}

trend_table st_bound_trend(const line_family& family, double a,
                           const std::vector<int>& N_list, double delta,
                           int margin, const bounds_options& opt) {
  check_window_list(N_list, margin, 2);
  std::vector<trend_row> rows;
  for (int N : N_list) {
    const double w = N + 2.0 * margin;
    const trajectory_windowed traj =
        make_trajectory(family, {-w, -w}, {w, w});
    const auto pts = discretize(traj, delta);
    if (pts.rows() == 0) {
      throw range_too_small("no trajectory samples in the inflated window");
    }
    const sampling_matrix M = assemble(a, 1.0, pts, {-N, -N}, {N, N});
    trend_row row;
    row.N = N;
    row.bounds = estimate_bounds(M, margin, opt);
    row.ratio_prev =
        rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                     : pair_ratio(rows.back().bounds, row.bounds);
    rows.push_back(std::move(row));
  }
  return finish_trend(std::move(rows));
}

trajectory_annihilator annihilator_on_trajectory(
    const line_family& family, double a, const Eigen::Vector2d& window_lo,
    const Eigen::Vector2d& window_hi, int k_radius) {
  if (!family.is_rational()) {
    throw invalid_parameter(
        "trajectory annihilators exist only for rational slopes");
  }
  check_window(window_lo, window_hi);

  const double sigma = family.sigma();
  const density_report dens = beurling_density(family.offsets(), {200.0});
  if (!(dens.d_plus * sigma < 1.0)) {
    throw infeasible_density(
        "offsets are too dense along this direction: D+ * sigma = " +
        format_double(dens.d_plus * sigma) + " (need < 1)");
  }

  // A function vanishing on every line x . v = gamma must, through the lift
  // along (p, q), come from a 1D profile vanishing on offsets / sigma; the
  // profile lives at shape a sigma^2 and is re-tagged to scale sigma so the
  // lift recognizes the direction.
  annihilator_1d base = build_annihilator_1d(
      family.offsets().scaled(1.0 / sigma), a * sigma * sigma,
      std::nullopt, k_radius);
  const gauss_series profile = with_shape(base.f, a, sigma);
  lifted_function f = lift_to_2d(profile, family.p(), family.q());

  // Residual scan along the family, dense in the line parameter.
  const trajectory_windowed traj =
      make_trajectory(family, window_lo, window_hi, 0.05);
  double residual = 0.0;
  for (const line_segment& seg : traj.segments) {
    const double len = seg.t1 - seg.t0;
    const auto n = std::max<Eigen::Index>(
        1, static_cast<Eigen::Index>(std::ceil(len / 0.05)));
    Eigen::Matrix<double, Eigen::Dynamic, 2> pts(n + 1, 2);
    for (Eigen::Index j = 0; j <= n; ++j) {
      const Eigen::Vector2d x =
          seg.base + (seg.t0 + len * static_cast<double>(j) /
                                   static_cast<double>(n)) *
                         seg.dir;
      pts(j, 0) = x.x();
      pts(j, 1) = x.y();
    }
    residual = std::max(residual, eval(f.series, pts).cwiseAbs().maxCoeff());
  }

  const double sup = sup_norm_estimate(f.series, window_lo, window_hi,
                                       0.05 / std::sqrt(a));

  return trajectory_annihilator{std::move(f), std::move(base), dens.d_plus,
                                residual,     sup,             window_lo,
                                window_hi};
}

}  // namespace gsamp
