#include "gsamp/gabor.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "gsamp/errors.hpp"
#include "gsamp/text_io.hpp"

namespace gsamp {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void check_abcd(const gabor_spec::abcd_params& ps) {
  for (double x : {ps.a, ps.b, ps.c, ps.d}) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw invalid_parameter("lattice parameters must be positive and finite");
    }
  }
}

// Pure progression through 0 or a clean lattice step; needed when a
// generator matrix is reported for a product-mode spec.
double lattice_step(const point_set_1d& s) {
  if (!s.is_pure_progression() || s.progressions()[0].beta != 0.0) {
    throw invalid_parameter(
        "lattice enumeration needs progression offsets through 0");
  }
  return s.progressions()[0].alpha;
}

}  // namespace

gabor_spec gabor_spec::delta_abcd(int p, int q, double a, double b, double c,
                                  double d, double alpha) {
  abcd_params ps{a, b, c, d};
  check_abcd(ps);
  if (alpha < 0.0 || !std::isfinite(alpha)) {
    throw invalid_parameter("window shape must be nonnegative");
  }
  // Validates coprimality as a side effect.
  slanted_config probe(p, q, point_set_1d::prog(c), point_set_1d::prog(d));
  gabor_spec spec;
  spec.p = p;
  spec.q = q;
  spec.abcd = ps;
  spec.alpha = alpha;
  return spec;
}

gabor_spec gabor_spec::product(const slanted_config& time_plane,
                               double alpha) {
  if (alpha < 0.0 || !std::isfinite(alpha)) {
    throw invalid_parameter("window shape must be nonnegative");
  }
  gabor_spec spec;
  spec.p = time_plane.p();
  spec.q = time_plane.q();
  spec.time_plane = time_plane;
  spec.alpha = alpha;
  return spec;
}

delta_lattice build_delta_lattice(const gabor_spec& spec,
                                  const Eigen::Vector2d& lo,
                                  const Eigen::Vector2d& hi) {
  if (!lo.allFinite() || !hi.allFinite() || !(hi.x() >= lo.x()) ||
      !(hi.y() >= lo.y())) {
    throw invalid_parameter("window must be finite and nonempty");
  }

  const double p = spec.p, q = spec.q;
  const double s2 = p * p + q * q;
  Eigen::Matrix2d T;
  double mod_x, mod_y;
  if (spec.abcd.has_value()) {
    const auto& ps = *spec.abcd;
    check_abcd(ps);
    T << p * ps.c / (ps.a * s2), -q * ps.d / ps.a,
         q * ps.c / (ps.b * s2),  p * ps.d / ps.b;
    mod_x = ps.a;
    mod_y = ps.b;
  } else if (spec.time_plane.has_value()) {
    const double a1 = lattice_step(spec.time_plane->gamma1());
    const double a2 = lattice_step(spec.time_plane->gamma2());
    T << p * a1 / s2, -q * a2,
         q * a1 / s2,  p * a2;
    mod_x = 1.0;
    mod_y = 1.0;
  } else {
    throw invalid_parameter("spec carries neither abcd nor a time plane");
  }

  const double volume = std::abs(T.determinant()) * mod_x * mod_y;
  if (spec.abcd.has_value()) {
    const double cd = spec.abcd->c * spec.abcd->d;
    if (std::abs(volume - cd) > 1e-12 * std::max(1.0, cd)) {
      throw accuracy_error("lattice volume " + format_double(volume) +
                           " deviates from c*d = " + format_double(cd));
    }
  }

  // Integer ranges for the time plane from the preimages of the corners.
  const Eigen::Matrix2d Tinv = T.inverse();
  double m_lo = 0, m_hi = 0, n_lo = 0, n_hi = 0;
  bool first = true;
  for (double x : {lo.x(), hi.x()}) {
    for (double y : {lo.y(), hi.y()}) {
      const Eigen::Vector2d mn = Tinv * Eigen::Vector2d(x, y);
      if (first) {
        m_lo = m_hi = mn.x();
        n_lo = n_hi = mn.y();
        first = false;
      } else {
        m_lo = std::min(m_lo, mn.x());
        m_hi = std::max(m_hi, mn.x());
        n_lo = std::min(n_lo, mn.y());
        n_hi = std::max(n_hi, mn.y());
      }
    }
  }

  std::vector<Eigen::Vector2d> time_pts;
  for (long m = static_cast<long>(std::floor(m_lo)) - 1;
       m <= static_cast<long>(std::ceil(m_hi)) + 1; ++m) {
    for (long n = static_cast<long>(std::floor(n_lo)) - 1;
         n <= static_cast<long>(std::ceil(n_hi)) + 1; ++n) {
      const Eigen::Vector2d x =
          T * Eigen::Vector2d(static_cast<double>(m), static_cast<double>(n));
      if (x.x() >= lo.x() && x.x() <= hi.x() && x.y() >= lo.y() &&
          x.y() <= hi.y()) {
        time_pts.push_back(x);
      }
    }
  }
  std::sort(time_pts.begin(), time_pts.end(),
            [](const Eigen::Vector2d& s, const Eigen::Vector2d& t) {
              return s.x() != t.x() ? s.x() < t.x() : s.y() < t.y();
            });

  std::vector<Eigen::Vector2d> mods;
  for (long j = static_cast<long>(std::ceil(lo.x() / mod_x));
       j <= static_cast<long>(std::floor(hi.x() / mod_x)); ++j) {
    for (long k = static_cast<long>(std::ceil(lo.y() / mod_y));
         k <= static_cast<long>(std::floor(hi.y() / mod_y)); ++k) {
      mods.emplace_back(mod_x * static_cast<double>(j),
                        mod_y * static_cast<double>(k));
    }
  }

  delta_lattice out;
  out.time_generator = T;
  out.volume = volume;
  out.points.resize(static_cast<Eigen::Index>(time_pts.size() * mods.size()),
                    4);
  Eigen::Index r = 0;
  for (const auto& tp : time_pts) {
    for (const auto& md : mods) {
      out.points.row(r++) << tp.x(), tp.y(), md.x(), md.y();
    }
  }
  return out;
}

translate_sweep_report translate_sweep(const slanted_config& time_plane,
                                       double a_shape, double grid_step,
                                       int N, int margin,
                                       const bounds_options& opt) {
  if (!(grid_step > 0.0) || !(grid_step <= 0.25)) {
    throw invalid_parameter("grid step must lie in (0, 0.25]");
  }
  if (N <= margin || margin < 0) {
    throw invalid_parameter("window must exceed the interior margin");
  }
  if (!(a_shape > 0.0) || !std::isfinite(a_shape)) {
    throw invalid_parameter("shape parameter must be positive and finite");
  }

  // The minimum over a hundred-plus translates is the payload; per-translate
  // dense SVDs would dominate the runtime, so the sweep always runs the
  // iterative lower-bound path and skips the upper bound.
  bounds_options sweep_opt = opt;
  sweep_opt.mode = bounds_options::path::iterative;
  sweep_opt.want_upper = false;

  std::vector<double> ticks;
  for (int i = 0; static_cast<double>(i) * grid_step <= 1.0 + 1e-12; ++i) {
    ticks.push_back(std::min(1.0, static_cast<double>(i) * grid_step));
  }

  const slanted_config negated = time_plane.negated();
  const double w = N + 2.0 * margin;

  translate_sweep_report rep;
  rep.grid_step = grid_step;
  rep.N = N;
  rep.margin = margin;
  rep.min_A = std::numeric_limits<double>::infinity();
  rep.min_u = rep.min_v = 0.0;

  for (double u : ticks) {
    for (double v : ticks) {
      const slanted_config shifted = negated.translated({u, v});
      const auto pts = build_slanted(shifted, {-w, -w}, {w, w});
      if (pts.rows() == 0) {
        throw range_too_small("translated configuration misses the window");
      }
      const sampling_matrix M =
          assemble(a_shape, 1.0, pts, {-N, -N}, {N, N});
      sweep_entry en;
      en.u = u;
      en.v = v;
      en.bounds = estimate_bounds(M, margin, sweep_opt);
      if (en.bounds.A_est < rep.min_A) {
        rep.min_A = en.bounds.A_est;
        rep.min_u = u;
        rep.min_v = v;
      }
      rep.entries.push_back(std::move(en));
    }
  }
  return rep;
}

sampling_problem sampling_reduction(const gabor_spec& spec) {
  // The anisotropy (1/a, 1/b) of the four-parameter lattice is absorbed by
  // a dilation that carries the window g_{alpha, alpha b^2/a^2} to the
  // isotropic Gaussian of shape alpha / a^2 and the time plane to the
  // slanted configuration with offset families c Z and d Z; the default
  // alpha = pi a^2 lands on shape pi.
  if (spec.abcd.has_value()) {
    const double a = spec.abcd->a;
    return {slanted_config(spec.p, spec.q, point_set_1d::prog(spec.abcd->c),
                           point_set_1d::prog(spec.abcd->d)),
            spec.alpha > 0.0 ? spec.alpha / (a * a) : std::numbers::pi};
  }
  if (!spec.time_plane.has_value()) {
    throw invalid_parameter("spec carries neither abcd nor a time plane");
  }
  return {*spec.time_plane,
          spec.alpha > 0.0 ? spec.alpha : std::numbers::pi};
}

gabor_trend frame_verdict_trend(const gabor_spec& spec,
                                const std::vector<int>& N_list,
                                double grid_step, int margin) {
  check_window_list(N_list, margin, 2);

  const sampling_problem red = sampling_reduction(spec);
  const slanted_config& time_plane = red.time_plane;
  const double a_shape = red.a_shape;

  gabor_trend trend{{}, nan, a_shape, time_plane};
  for (int N : N_list) {
    gabor_trend_row row{N,
                        translate_sweep(time_plane, a_shape, grid_step, N,
                                        margin),
                        nan};
    if (!trend.rows.empty()) {
      const auto& prev = trend.rows.back().sweep;
      const auto min_bounds = [](const translate_sweep_report& r) {
        for (const sweep_entry& en : r.entries) {
          if (en.u == r.min_u && en.v == r.min_v) return en.bounds;
        }
        return r.entries.front().bounds;
      };
      row.ratio_prev = pair_ratio(min_bounds(prev), min_bounds(row.sweep));
      if (!std::isnan(row.ratio_prev)) {
        const double sym = std::max(row.ratio_prev, 1.0 / row.ratio_prev);
        if (std::isnan(trend.max_consecutive_ratio) ||
            sym > trend.max_consecutive_ratio) {
          trend.max_consecutive_ratio = sym;
        }
      }
    }
    trend.rows.push_back(std::move(row));
  }
  return trend;
}

}  // namespace gsamp
