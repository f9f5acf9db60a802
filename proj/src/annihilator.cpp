#include "gsamp/annihilator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "gsamp/detail/kahan.hpp"
#include "gsamp/errors.hpp"
#include "gsamp/text_io.hpp"

namespace gsamp {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log of the product of (1 - e^{2a(z-gamma)}) / (1 - e^{2a(gamma-z)}) over a
// fixed point list. Factors whose exponential dominates are split as
// -e^t (1 - e^{-t}) so the accumulator never sees an overflowing magnitude.
log_complex product_log_over(const double* pts, Eigen::Index n, double a,
                             complexd z) {
  double la = 0.0;
  double ph = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double g = pts[i];
    const complexd t = g >= 0.0 ? 2.0 * a * (z - g) : 2.0 * a * (g - z);
    if (t.real() > 350.0) {
      const complexd r = 1.0 - std::exp(-t);
      la += t.real() + std::log(std::abs(r));
      ph += t.imag() + std::numbers::pi + std::arg(r);
    } else {
      const complexd f = 1.0 - std::exp(t);
      const double af = std::abs(f);
      if (af == 0.0) return {neg_inf, 0.0};  // exact zero of the product
      la += std::log(af);
      ph += std::arg(f);
    }
  }
  return {la, ph};
}

void require_shape(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw invalid_parameter("shape parameter a must be positive and finite");
  }
}

}  // namespace

complexd log_complex::value() const {
  if (log_abs == neg_inf) return {0.0, 0.0};
  return std::polar(std::exp(log_abs), phase);
}

counting_report counting_slope(const point_set_1d& gamma, double window) {
  if (!(window > 0.0) || !std::isfinite(window)) {
    throw invalid_parameter("counting window must be positive and finite");
  }
  counting_report rep;
  const Eigen::VectorXd pts = gamma.points(-window, window);
  const double* b = pts.data();
  const double* e = b + pts.size();
  // one-sided counts from the origin
  const auto count_right = [&](double r) {
    return static_cast<double>(std::lower_bound(b, e, r) -
                               std::lower_bound(b, e, 0.0));
  };
  const auto count_left = [&](double r) {
    return static_cast<double>(std::upper_bound(b, e, 0.0) -
                               std::upper_bound(b, e, -r));
  };
  if (auto d = gamma.exact_density()) {
    rep.exact = true;
    rep.rho = *d;
  } else {
    rep.rho = std::max(count_right(window), count_left(window)) / window;
  }
  double K = 0.0;
  for (int i = 1; i <= 64; ++i) {
    const double r = window * i / 64.0;
    K = std::max(K, std::max(count_right(r), count_left(r)) - rep.rho * r);
  }
  rep.K = K;
  return rep;
}

log_complex product_g_log(const point_set_1d& gamma, double a, complexd z) {
  require_shape(a);
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw invalid_parameter("evaluation point must be finite");
  }
  // Factors beyond this window differ from 1 by less than e^{-40}.
  const double L = std::abs(z.real()) + 20.0 / a;
  const Eigen::VectorXd pts = gamma.points(-L, L);
  return product_log_over(pts.data(), pts.size(), a, z);
}

complexd product_g(const point_set_1d& gamma, double a, complexd z) {
  const log_complex lc = product_g_log(gamma, a, z);
  if (lc.log_abs > 700.0) {
    throw unsupported_domain(
        "product magnitude exceeds the double range at Re z = " +
        format_double(z.real()) + "; use product_g_log");
  }
  return lc.value();
}

const laurent_entry& laurent_table::at(int k) const {
  for (const laurent_entry& en : entries) {
    if (en.k == k) return en;
  }
  throw invalid_parameter("coefficient index outside the computed range");
}

laurent_table laurent_coeffs(const point_set_1d& gamma, double a, int k_min,
                             int k_max, double eps, int nodes_per_circle) {
  require_shape(a);
  if (k_min > k_max) throw invalid_parameter("k range is empty");
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw invalid_parameter("eps must lie in (0, 1)");
  }
  if (nodes_per_circle > (1 << 17)) {
    throw invalid_parameter("initial node count leaves no room to refine");
  }
  const counting_report cnt = counting_slope(gamma);
  if (!(eps < 1.0 - cnt.rho)) {
    throw invalid_parameter("eps must be below 1 - rho; measured rho = " +
                            format_double(cnt.rho));
  }

  laurent_table tab;
  tab.a = a;
  tab.eps = eps;
  tab.entries.resize(static_cast<size_t>(k_max - k_min) + 1);

  // Process by increasing |k| so the k = 0 magnitude is available as the
  // reference scale when deciding whether a deep coefficient has stabilized:
  // a change of 1e-10 relative to the table's decay envelope is as good as
  // one relative to the (possibly vanishing) coefficient itself.
  std::vector<int> order;
  for (int k = k_min; k <= k_max; ++k) order.push_back(k);
  std::sort(order.begin(), order.end(), [](int x, int y) {
    return std::abs(x) != std::abs(y) ? std::abs(x) < std::abs(y) : x < y;
  });

  const int n0 = std::max(256, nodes_per_circle);
  double run_max_log = neg_inf;

  for (int k : order) {
    const double ln_r = 2.0 * a * k / (1.0 - eps);
    const double x_re = k / (1.0 - eps);
    const double L = std::abs(x_re) + 20.0 / a;
    const Eigen::VectorXd pts = gamma.points(-L, L);

    const auto integrate = [&](int n) -> log_complex {
      // b_k = (1/n) sum_j h(R e^{i theta_j}) (R e^{i theta_j})^{-k} with the
      // integrand assembled in log space; the largest real exponent is
      // factored out before summation so nothing overflows.
      std::vector<log_complex> terms(static_cast<size_t>(n));
      double m = neg_inf;
      for (int j = 0; j < n; ++j) {
        const double th = 2.0 * std::numbers::pi * j / n;
        const complexd z(x_re, th / (2.0 * a));  // w = e^{2az} = R e^{i th}
        log_complex lc = product_log_over(pts.data(), pts.size(), a, z);
        lc.log_abs -= k * ln_r;
        lc.phase -= k * th;
        terms[static_cast<size_t>(j)] = lc;
        m = std::max(m, lc.log_abs);
      }
      if (m == neg_inf) return {neg_inf, 0.0};
      detail::kahan_csum s;
      for (const log_complex& lc : terms) {
        if (lc.log_abs == neg_inf) continue;
        s.add(std::polar(std::exp(lc.log_abs - m), lc.phase));
      }
      const complexd v = s.value();
      const double av = std::abs(v);
      if (av == 0.0) return {neg_inf, 0.0};
      return {m + std::log(av) - std::log(static_cast<double>(n)),
              std::arg(v)};
    };

    log_complex prev = integrate(n0);
    int n = n0;
    bool converged = false;
    double err = std::numeric_limits<double>::quiet_NaN();
    double scale = 0.0;
    while (2 * n <= (1 << 18)) {
      const log_complex cur = integrate(2 * n);
      n *= 2;
      err = std::abs(cur.value() - prev.value());
      const double env = run_max_log == neg_inf
                             ? 0.0
                             : std::exp(run_max_log -
                                        a * static_cast<double>(k) * k /
                                            (1.0 - eps));
      scale = std::max({std::abs(cur.value()), env, 1e-300});
      prev = cur;
      if (err <= 1e-10 * scale) {
        converged = true;
        break;
      }
    }
    if (!converged && !(err <= 1e-8 * scale)) {
      throw accuracy_error("Laurent coefficient k = " + std::to_string(k) +
                           " did not stabilize under node doubling; last "
                           "change " +
                           format_double(err));
    }

    laurent_entry en;
    en.k = k;
    en.log = prev;
    en.b = prev.value();
    en.radius = std::exp(ln_r);
    en.nodes = n;
    en.quad_error = err;
    tab.entries[static_cast<size_t>(k - k_min)] = en;
    run_max_log = std::max(run_max_log, prev.log_abs);
  }

  double env_max = 0.0;
  for (const laurent_entry& en : tab.entries) {
    if (en.log.log_abs == neg_inf) continue;
    env_max = std::max(
        env_max, std::exp(en.log.log_abs +
                          a * static_cast<double>(en.k) * en.k / (1.0 - eps)));
  }
  tab.decay_envelope_max = env_max;
  return tab;
}

annihilator_1d build_annihilator_1d(const point_set_1d& gamma, double a,
                                    std::optional<double> eps_opt,
                                    int k_radius) {
  require_shape(a);
  if (k_radius < 1) throw invalid_parameter("k_radius must be at least 1");
  const counting_report cnt = counting_slope(gamma);
  if (cnt.rho >= 1.0) {
    throw infeasible_density(
        "zero set is too dense for a Gaussian-series annihilator; measured "
        "counting slope rho = " +
        format_double(cnt.rho) + " (need rho < 1)");
  }
  const double eps = eps_opt.value_or(0.5 * (1.0 - cnt.rho));
  if (!(eps > 0.0) || !(eps < 1.0 - cnt.rho)) {
    throw invalid_parameter("eps must lie in (0, 1 - rho); measured rho = " +
                            format_double(cnt.rho));
  }

  laurent_table tab = laurent_coeffs(gamma, a, -k_radius, k_radius, eps);

  coeff_grid grid(-k_radius, k_radius, 1.0);
  for (const laurent_entry& en : tab.entries) {
    if (en.log.log_abs == neg_inf) continue;
    const double log_c = en.log.log_abs + a * static_cast<double>(en.k) * en.k;
    if (log_c > 709.0) {
      throw accuracy_error("series coefficient overflows double at k = " +
                           std::to_string(en.k));
    }
    grid.at(en.k) = std::polar(std::exp(log_c), en.log.phase);
  }

  // The truncated index range must carry essentially all of the l1 mass,
  // otherwise vanishing degrades away from the origin.
  {
    const double total = grid.l1_norm();
    double outer = 0.0;
    const double cut = 0.8 * k_radius;
    for (int k = -k_radius; k <= k_radius; ++k) {
      if (std::abs(k) > cut) outer += std::abs(grid.at(k));
    }
    if (total == 0.0) {
      throw accuracy_error("annihilator degenerated to the zero function");
    }
    if (outer > 0.01 * total) {
      throw range_too_small(
          "coefficient tail carries " + format_double(outer / total) +
          " of the l1 mass; increase k_radius");
    }
  }

  annihilator_1d out{make_series(a, 1.0, std::move(grid)),
                     gamma,
                     cnt,
                     eps,
                     std::move(tab),
                     2.0 * k_radius / 3.0,
                     0.0,
                     0.0};

  const double w = out.report_halfwidth;
  const Eigen::VectorXd zero_pts = gamma.points(-w, w);
  double resid = 0.0;
  if (zero_pts.size() > 0) {
    resid = eval(out.f, zero_pts).cwiseAbs().maxCoeff();
  }
  out.residual = resid;
  out.sup_norm = sup_norm_estimate(out.f, -w, w, 0.05 / std::sqrt(a));

  // The coefficient series must reproduce e^{-a x^2} times the product; a
  // disagreement means the quadrature or the decay budget is off.
  double max_diff = 0.0;
  for (int i = 0; i <= 32; ++i) {
    const double x = -w + 2.0 * w * i / 32.0;
    log_complex lc = product_g_log(gamma, a, complexd(x, 0.0));
    lc.log_abs -= a * x * x;
    max_diff = std::max(max_diff, std::abs(eval(out.f, x) - lc.value()));
  }
  if (max_diff > 1e-8 * std::max(out.sup_norm, 1e-300)) {
    throw accuracy_error(
        "coefficient series disagrees with the closed-form product by " +
        format_double(max_diff));
  }
  return out;
}

gauss_series alternating_theta(double a, double scale) {
  require_shape(a);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw invalid_parameter("scale must be positive and finite");
  }
  const double as2 = a * scale * scale;
  // Terms beyond the width contribute less than 1e-15 of a central term;
  // the radius triples it so every evaluation point inside the central third
  // of the support sees a full window of kernels.
  const double width = std::sqrt((std::log(1e15) + 5.0) / as2);
  const int radius =
      std::max(64, 3 * static_cast<int>(std::ceil(width)));
  coeff_grid grid(-radius, radius, inf_p);
  for (int n = -radius; n <= radius; ++n) {
    grid.at(n) = (((n % 2) + 2) % 2 == 0) ? 1.0 : -1.0;
  }
  return make_series(a, scale, std::move(grid), 1e-15);
}

complexd lifted_function::closed_form(complexd z, complexd w) const {
  const double s2 = static_cast<double>(p) * p + static_cast<double>(q) * q;
  const complexd pr = static_cast<double>(p) * z + static_cast<double>(q) * w;
  const complexd expo = g1d.a * (pr * pr / s2 - z * z - w * w);
  return std::exp(expo) * eval(g1d, pr / s2);
}

complexd lifted_function::closed_form(double x, double y) const {
  return closed_form(complexd(x, 0.0), complexd(y, 0.0));
}

lifted_function lift_to_2d(const gauss_series& g, int p, int q) {
  if (p == 0 && q == 0) throw invalid_parameter("direction must be nonzero");
  if (std::gcd(std::abs(p), std::abs(q)) != 1) {
    throw invalid_parameter("direction integers must be coprime");
  }
  if (g.coeffs.dim() != 1) {
    throw invalid_parameter("lift expects a 1D profile");
  }
  const double sigma = std::hypot(static_cast<double>(p),
                                  static_cast<double>(q));
  if (std::abs(g.scale - sigma) > 1e-9 * sigma) {
    throw invalid_parameter("profile scale " + format_double(g.scale) +
                            " does not match the direction; expected sigma = " +
                            format_double(sigma));
  }
  const int k0 = g.coeffs.lo().x();
  const int k1 = g.coeffs.hi().x();
  const Eigen::Vector2i lo(std::min(p * k0, p * k1), std::min(q * k0, q * k1));
  const Eigen::Vector2i hi(std::max(p * k0, p * k1), std::max(q * k0, q * k1));
  coeff_grid grid(lo, hi, g.coeffs.declared_p());
  for (int n = k0; n <= k1; ++n) {
    const complexd c = g.coeffs.at(n);
    if (c != 0.0) grid.at(p * n, q * n) = c;
  }
  return lifted_function{make_series(g.a, 1.0, std::move(grid), g.trunc_tol),
                         g, p, q};
}

std::pair<lifted_function, lifted_function> critical_counterexamples(int p,
                                                                     int q,
                                                                     double a) {
  if (p == 0 && q == 0) throw invalid_parameter("direction must be nonzero");
  if (std::gcd(std::abs(p), std::abs(q)) != 1) {
    throw invalid_parameter("direction integers must be coprime");
  }
  require_shape(a);
  const double sigma = std::hypot(static_cast<double>(p),
                                  static_cast<double>(q));
  // The alternating profile vanishes on Z + 1/2; composed with the slanted
  // coordinates this hits gamma_1 in sigma^2 (Z + 1/2) along (p, q) and
  // gamma_2 in Z + 1/2 along the rotated direction (-q, p).
  const gauss_series theta = alternating_theta(a, sigma);
  return {lift_to_2d(theta, p, q), lift_to_2d(theta, -q, p)};
}

}  // namespace gsamp
