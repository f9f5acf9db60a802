#include "gsamp/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "gsamp/detail/kahan.hpp"
#include "gsamp/errors.hpp"
#include "gsamp/text_io.hpp"

namespace gsamp {

namespace {

double shape(const gauss_series& f) { return f.a * f.scale * f.scale; }

void validate(const gauss_series& f) {
  if (!std::isfinite(f.a) || !(f.a > 0.0)) {
    throw invalid_parameter("kernel parameter a must be positive and finite");
  }
  if (!std::isfinite(f.scale) || !(f.scale > 0.0)) {
    throw invalid_parameter("scale must be positive and finite");
  }
  if (!(f.trunc_tol > 0.0) || !(f.trunc_tol < 1.0)) {
    throw invalid_parameter("trunc_tol must lie in (0, 1)");
  }
}

double window_radius(const gauss_series& f) {
  return std::sqrt((-std::log(f.trunc_tol) + 5.0) / shape(f));
}

void check_strip(complexd z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw invalid_parameter("evaluation point must be finite");
  }
  if (std::abs(z.imag()) > strip_half_width) {
    throw unsupported_domain("evaluation point outside the |Im z| <= 10 strip");
  }
}

bool is_zero(complexd c) { return c.real() == 0.0 && c.imag() == 0.0; }

// Indices within the truncation window around x, ordered by increasing
// integer distance from the integer nearest to Re x, ties toward the smaller
// index. The order depends only on the point, never on the support bounds, so
// enlarging the support by zero coefficients reproduces the exact same
// floating-point sum (zero terms are skipped by the evaluators).
std::vector<int> window_indices_1d(const gauss_series& f, double x) {
  const int slo = f.coeffs.lo().x();
  const int shi = f.coeffs.hi().x();
  const double r = window_radius(f);
  int nlo = static_cast<int>(std::ceil(x - r));
  int nhi = static_cast<int>(std::floor(x + r));
  nlo = std::max(nlo, slo);
  nhi = std::min(nhi, shi);
  const int n0 = static_cast<int>(std::llround(x));
  std::vector<int> idx;
  if (nlo > nhi) {
    // Window misses the support; keep the nearest index so the value is the
    // best single-term approximation instead of silently zero.
    idx.push_back(std::clamp(n0, slo, shi));
    return idx;
  }
  idx.reserve(static_cast<size_t>(nhi - nlo + 1));
  for (int n = nlo; n <= nhi; ++n) idx.push_back(n);
  std::sort(idx.begin(), idx.end(), [n0](int p, int q) {
    const long dp = static_cast<long>(p - n0) * (p - n0);
    const long dq = static_cast<long>(q - n0) * (q - n0);
    return dp != dq ? dp < dq : p < q;
  });
  return idx;
}

struct index2 {
  long d2;
  int n;
  int m;
};

std::vector<index2> window_indices_2d(const gauss_series& f, double x,
                                      double y) {
  const Eigen::Vector2i slo = f.coeffs.lo();
  const Eigen::Vector2i shi = f.coeffs.hi();
  const double r = window_radius(f);
  const int n0 = static_cast<int>(std::llround(x));
  const int m0 = static_cast<int>(std::llround(y));
  int nlo = std::max(static_cast<int>(std::ceil(x - r)), slo.x());
  int nhi = std::min(static_cast<int>(std::floor(x + r)), shi.x());
  int mlo = std::max(static_cast<int>(std::ceil(y - r)), slo.y());
  int mhi = std::min(static_cast<int>(std::floor(y + r)), shi.y());
  std::vector<index2> idx;
  if (nlo > nhi || mlo > mhi) {
    const int n = std::clamp(n0, slo.x(), shi.x());
    const int m = std::clamp(m0, slo.y(), shi.y());
    idx.push_back({0, n, m});
    return idx;
  }
  idx.reserve(static_cast<size_t>(nhi - nlo + 1) *
              static_cast<size_t>(mhi - mlo + 1));
  for (int n = nlo; n <= nhi; ++n) {
    for (int m = mlo; m <= mhi; ++m) {
      const long d2 = static_cast<long>(n - n0) * (n - n0) +
                      static_cast<long>(m - m0) * (m - m0);
      idx.push_back({d2, n, m});
    }
  }
  std::sort(idx.begin(), idx.end(), [](const index2& p, const index2& q) {
    if (p.d2 != q.d2) return p.d2 < q.d2;
    if (p.n != q.n) return p.n < q.n;
    return p.m < q.m;
  });
  return idx;
}

complexd eval_real_1d(const gauss_series& f, double x) {
  const double as2 = shape(f);
  detail::kahan_csum acc;
  for (int n : window_indices_1d(f, x)) {
    const complexd c = f.coeffs.at(n);
    if (is_zero(c)) continue;
    const double d = x - n;
    const double k = std::exp(-as2 * d * d);
    acc.add({c.real() * k, c.imag() * k});
  }
  return acc.value();
}

complexd eval_complex_1d(const gauss_series& f, complexd z) {
  const double as2 = shape(f);
  detail::kahan_csum acc;
  for (int n : window_indices_1d(f, z.real())) {
    const complexd c = f.coeffs.at(n);
    if (is_zero(c)) continue;
    const complexd d = z - static_cast<double>(n);
    acc.add(c * std::exp(-as2 * d * d));
  }
  return acc.value();
}

complexd eval_real_2d(const gauss_series& f, double x, double y) {
  const double as2 = shape(f);
  detail::kahan_csum acc;
  for (const index2& i : window_indices_2d(f, x, y)) {
    const complexd c = f.coeffs.at(i.n, i.m);
    if (is_zero(c)) continue;
    const double dx = x - i.n;
    const double dy = y - i.m;
    const double k = std::exp(-as2 * (dx * dx + dy * dy));
    acc.add({c.real() * k, c.imag() * k});
  }
  return acc.value();
}

complexd eval_complex_2d(const gauss_series& f, complexd z, complexd w) {
  const double as2 = shape(f);
  detail::kahan_csum acc;
  for (const index2& i : window_indices_2d(f, z.real(), w.real())) {
    const complexd c = f.coeffs.at(i.n, i.m);
    if (is_zero(c)) continue;
    const complexd dz = z - static_cast<double>(i.n);
    const complexd dw = w - static_cast<double>(i.m);
    acc.add(c * std::exp(-as2 * (dz * dz + dw * dw)));
  }
  return acc.value();
}

void require_dim(const gauss_series& f, int d) {
  if (f.coeffs.dim() != d) {
    throw precondition_error("series dimension does not match the call");
  }
}

struct window_box {
  Eigen::Vector2d lo;
  Eigen::Vector2d hi;
};

window_box default_window(const gauss_series& f) {
  const double infl = 4.0 / std::sqrt(shape(f));
  window_box w;
  w.lo = f.coeffs.lo().cast<double>().array() - infl;
  w.hi = f.coeffs.hi().cast<double>().array() + infl;
  return w;
}

double grid_max_1d(const gauss_series& f, double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) {
    throw invalid_parameter("sup-norm window must be nonempty with step > 0");
  }
  const long count = static_cast<long>(std::floor((hi - lo) / step)) + 1;
  double best = 0.0;
  for (long i = 0; i < count; ++i) {
    best = std::max(best, std::abs(eval(f, lo + step * static_cast<double>(i))));
  }
  best = std::max(best, std::abs(eval(f, hi)));
  return best;
}

double grid_max_2d(const gauss_series& f, const Eigen::Vector2d& lo,
                   const Eigen::Vector2d& hi, double step) {
  if (!(step > 0.0) || !(hi.x() >= lo.x()) || !(hi.y() >= lo.y())) {
    throw invalid_parameter("sup-norm window must be nonempty with step > 0");
  }
  const long nx = static_cast<long>(std::floor((hi.x() - lo.x()) / step)) + 1;
  const long ny = static_cast<long>(std::floor((hi.y() - lo.y()) / step)) + 1;
  double best = 0.0;
  for (long i = 0; i < nx; ++i) {
    const double x = lo.x() + step * static_cast<double>(i);
    for (long j = 0; j < ny; ++j) {
      const double y = lo.y() + step * static_cast<double>(j);
      best = std::max(best, std::abs(eval(f, x, y)));
    }
  }
  return best;
}

}  // namespace

gauss_series make_series(double a, double scale, coeff_grid coeffs,
                         double trunc_tol) {
  gauss_series f{a, scale, trunc_tol, std::move(coeffs)};
  validate(f);
  return f;
}

gauss_series with_shape(const gauss_series& f, double a, double scale) {
  gauss_series g = f;
  g.a = a;
  g.scale = scale;
  validate(g);
  const double before = shape(f);
  const double after = shape(g);
  if (std::abs(after - before) > 1e-12 * before) {
    throw invalid_parameter("re-tagging must preserve a * scale^2");
  }
  return g;
}

complexd eval(const gauss_series& f, double x) {
  validate(f);
  require_dim(f, 1);
  check_strip(complexd(x, 0.0));
  return eval_real_1d(f, x);
}

complexd eval(const gauss_series& f, complexd z) {
  validate(f);
  require_dim(f, 1);
  check_strip(z);
  if (z.imag() == 0.0) return eval_real_1d(f, z.real());
  return eval_complex_1d(f, z);
}

complexd eval(const gauss_series& f, double x, double y) {
  validate(f);
  require_dim(f, 2);
  check_strip(complexd(x, 0.0));
  check_strip(complexd(y, 0.0));
  return eval_real_2d(f, x, y);
}

complexd eval(const gauss_series& f, complexd z, complexd w) {
  validate(f);
  require_dim(f, 2);
  check_strip(z);
  check_strip(w);
  if (z.imag() == 0.0 && w.imag() == 0.0) {
    return eval_real_2d(f, z.real(), w.real());
  }
  return eval_complex_2d(f, z, w);
}

Eigen::VectorXcd eval(const gauss_series& f, const Eigen::VectorXd& xs) {
  validate(f);
  require_dim(f, 1);
  Eigen::VectorXcd out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    check_strip(complexd(xs[i], 0.0));
    out[i] = eval_real_1d(f, xs[i]);
  }
  return out;
}

Eigen::VectorXcd eval(const gauss_series& f, const Eigen::VectorXcd& zs) {
  validate(f);
  require_dim(f, 1);
  Eigen::VectorXcd out(zs.size());
  for (Eigen::Index i = 0; i < zs.size(); ++i) {
    check_strip(zs[i]);
    out[i] = zs[i].imag() == 0.0 ? eval_real_1d(f, zs[i].real())
                                 : eval_complex_1d(f, zs[i]);
  }
  return out;
}

Eigen::VectorXcd eval(const gauss_series& f,
                      const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts) {
  validate(f);
  require_dim(f, 2);
  Eigen::VectorXcd out(pts.rows());
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    check_strip(complexd(pts(i, 0), 0.0));
    check_strip(complexd(pts(i, 1), 0.0));
    out[i] = eval_real_2d(f, pts(i, 0), pts(i, 1));
  }
  return out;
}

eval_report eval_certified(const gauss_series& f, complexd z) {
  validate(f);
  require_dim(f, 1);
  check_strip(z);
  eval_report rep;
  rep.value = z.imag() == 0.0 ? eval_real_1d(f, z.real())
                              : eval_complex_1d(f, z);
  const std::vector<int> used = window_indices_1d(f, z.real());
  const double as2 = shape(f);
  const double y2 = z.imag() * z.imag();
  detail::kahan_sum tail;
  for (int n = f.coeffs.lo().x(); n <= f.coeffs.hi().x(); ++n) {
    if (std::find(used.begin(), used.end(), n) != used.end()) continue;
    const complexd c = f.coeffs.at(n);
    if (is_zero(c)) continue;
    const double d = z.real() - n;
    tail.add(std::abs(c) * std::exp(-as2 * (d * d - y2)));
  }
  rep.tail_bound = tail.value();
  return rep;
}

eval_report eval_certified(const gauss_series& f, complexd z, complexd w) {
  validate(f);
  require_dim(f, 2);
  check_strip(z);
  check_strip(w);
  eval_report rep;
  rep.value = (z.imag() == 0.0 && w.imag() == 0.0)
                  ? eval_real_2d(f, z.real(), w.real())
                  : eval_complex_2d(f, z, w);
  const std::vector<index2> used = window_indices_2d(f, z.real(), w.real());
  auto was_used = [&used](int n, int m) {
    for (const index2& i : used) {
      if (i.n == n && i.m == m) return true;
    }
    return false;
  };
  const double as2 = shape(f);
  const double y2 = z.imag() * z.imag() + w.imag() * w.imag();
  detail::kahan_sum tail;
  for (int n = f.coeffs.lo().x(); n <= f.coeffs.hi().x(); ++n) {
    for (int m = f.coeffs.lo().y(); m <= f.coeffs.hi().y(); ++m) {
      if (was_used(n, m)) continue;
      const complexd c = f.coeffs.at(n, m);
      if (is_zero(c)) continue;
      const double dx = z.real() - n;
      const double dy = w.real() - m;
      tail.add(std::abs(c) * std::exp(-as2 * (dx * dx + dy * dy - y2)));
    }
  }
  rep.tail_bound = tail.value();
  return rep;
}

double sup_norm_estimate(const gauss_series& f, double lo, double hi,
                         double step) {
  validate(f);
  require_dim(f, 1);
  return grid_max_1d(f, lo, hi, step);
}

double sup_norm_estimate(const gauss_series& f, const Eigen::Vector2d& lo,
                         const Eigen::Vector2d& hi, double step) {
  validate(f);
  require_dim(f, 2);
  return grid_max_2d(f, lo, hi, step);
}

double sup_norm_estimate(const gauss_series& f) {
  validate(f);
  const window_box w = default_window(f);
  const double step = 0.05 / std::sqrt(shape(f));
  if (f.coeffs.dim() == 1) return grid_max_1d(f, w.lo.x(), w.hi.x(), step);
  return grid_max_2d(f, w.lo, w.hi, step);
}

norm_equivalence_report lp_norm_equivalence_check(const gauss_series& f,
                                                  double p) {
  validate(f);
  if (std::isnan(p) || p < 1.0) {
    throw invalid_parameter("norm exponent must satisfy p >= 1 (inf allowed)");
  }
  norm_equivalence_report rep;
  rep.coeff_norm = f.coeffs.lp_norm(p);
  rep.degenerate = rep.coeff_norm == 0.0;
  const window_box w = default_window(f);
  const double step = 0.2 / std::sqrt(shape(f));
  if (std::isinf(p)) {
    rep.function_norm = f.coeffs.dim() == 1
                            ? grid_max_1d(f, w.lo.x(), w.hi.x(), step)
                            : grid_max_2d(f, w.lo, w.hi, step);
  } else if (f.coeffs.dim() == 1) {
    const long count =
        static_cast<long>(std::floor((w.hi.x() - w.lo.x()) / step)) + 1;
    detail::kahan_sum s;
    for (long i = 0; i < count; ++i) {
      const double v = std::abs(eval(f, w.lo.x() + step * i));
      s.add(std::pow(v, p));
    }
    rep.function_norm = std::pow(s.value() * step, 1.0 / p);
  } else {
    const long nx =
        static_cast<long>(std::floor((w.hi.x() - w.lo.x()) / step)) + 1;
    const long ny =
        static_cast<long>(std::floor((w.hi.y() - w.lo.y()) / step)) + 1;
    detail::kahan_sum s;
    for (long i = 0; i < nx; ++i) {
      for (long j = 0; j < ny; ++j) {
        const double v =
            std::abs(eval(f, w.lo.x() + step * i, w.lo.y() + step * j));
        s.add(std::pow(v, p));
      }
    }
    rep.function_norm = std::pow(s.value() * step * step, 1.0 / p);
  }
  rep.ratio = rep.degenerate
                  ? std::numeric_limits<double>::quiet_NaN()
                  : rep.function_norm / rep.coeff_norm;
  return rep;
}

namespace {

std::string format_p(double p) {
  return std::isinf(p) ? std::string("inf") : format_double(p);
}

double parse_p(const std::string& tok) {
  if (tok == "inf") return inf_p;
  return parse_double(tok);
}

}  // namespace

void write_series(std::ostream& os, const gauss_series& f) {
  validate(f);
  os << "gsamp-series-v1\n";
  os << f.coeffs.dim() << ' ' << format_double(f.a) << ' '
     << format_double(f.scale) << ' ' << format_p(f.coeffs.declared_p())
     << '\n';
  if (f.coeffs.dim() == 1) {
    os << f.coeffs.lo().x() << ' ' << f.coeffs.hi().x() << '\n';
    for (int n = f.coeffs.lo().x(); n <= f.coeffs.hi().x(); ++n) {
      const complexd c = f.coeffs.at(n);
      if (is_zero(c)) continue;
      os << n << ' ' << format_complex(c) << '\n';
    }
  } else {
    os << f.coeffs.lo().x() << ' ' << f.coeffs.hi().x() << ' '
       << f.coeffs.lo().y() << ' ' << f.coeffs.hi().y() << '\n';
    for (int n = f.coeffs.lo().x(); n <= f.coeffs.hi().x(); ++n) {
      for (int m = f.coeffs.lo().y(); m <= f.coeffs.hi().y(); ++m) {
        const complexd c = f.coeffs.at(n, m);
        if (is_zero(c)) continue;
        os << n << ' ' << m << ' ' << format_complex(c) << '\n';
      }
    }
  }
}

gauss_series read_series(std::istream& is) {
  std::string magic;
  if (!(is >> magic) || magic != "gsamp-series-v1") {
    throw invalid_parameter("unrecognized series header");
  }
  int dim = 0;
  std::string a_tok, scale_tok, p_tok;
  if (!(is >> dim >> a_tok >> scale_tok >> p_tok) || (dim != 1 && dim != 2)) {
    throw invalid_parameter("malformed series parameter line");
  }
  const double a = parse_double(a_tok);
  const double scale = parse_double(scale_tok);
  const double p = parse_p(p_tok);
  if (dim == 1) {
    int lo = 0, hi = 0;
    if (!(is >> lo >> hi)) throw invalid_parameter("malformed support bounds");
    coeff_grid grid(lo, hi, p);
    int n = 0;
    std::string re_tok, im_tok;
    while (is >> n) {
      if (!(is >> re_tok >> im_tok)) {
        throw invalid_parameter("truncated coefficient row");
      }
      if (!grid.contains(n)) {
        throw invalid_parameter("coefficient index outside declared support");
      }
      if (!is_zero(grid.at(n))) {
        throw invalid_parameter("duplicate coefficient index");
      }
      grid.at(n) = complexd(parse_double(re_tok), parse_double(im_tok));
    }
    return make_series(a, scale, std::move(grid));
  }
  Eigen::Vector2i lo, hi;
  if (!(is >> lo.x() >> hi.x() >> lo.y() >> hi.y())) {
    throw invalid_parameter("malformed support bounds");
  }
  coeff_grid grid(lo, hi, p);
  int n = 0, m = 0;
  std::string re_tok, im_tok;
  while (is >> n) {
    if (!(is >> m >> re_tok >> im_tok)) {
      throw invalid_parameter("truncated coefficient row");
    }
    if (!grid.contains(n, m)) {
      throw invalid_parameter("coefficient index outside declared support");
    }
    if (!is_zero(grid.at(n, m))) {
      throw invalid_parameter("duplicate coefficient index");
    }
    grid.at(n, m) = complexd(parse_double(re_tok), parse_double(im_tok));
  }
  return make_series(a, scale, std::move(grid));
}

}  // namespace gsamp
