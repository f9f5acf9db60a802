#include "gsamp/frame.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "gsamp/errors.hpp"

namespace gsamp {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Deterministic pseudo-random start vector; splitmix64 scaled to [-0.5, 0.5].
Eigen::VectorXd start_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  std::uint64_t s = 0x9E3779B97F4A7C15ull;
  for (Eigen::Index i = 0; i < n; ++i) {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z = z ^ (z >> 31);
    v[i] = static_cast<double>(z) / static_cast<double>(
               std::numeric_limits<std::uint64_t>::max()) - 0.5;
  }
  return v;
}

// Largest eigenvalue of the PSD operator v -> op(v) by power iteration with a
// Rayleigh-quotient stopping rule. Returns the last Rayleigh quotient (always
// a lower estimate of lambda_max).
template <class Op>
double power_lambda_max(const Op& op, Eigen::Index n) {
  Eigen::VectorXd v = start_vector(n).normalized();
  double lam = 0.0;
  for (int it = 0; it < 300; ++it) {
    Eigen::VectorXd w = op(v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    const double lam_new = v.dot(w);
    w /= nw;
    const double resid = (op(w) - lam_new * w).norm();
    v = w;
    if (it > 3 && std::abs(lam_new - lam) <= 1e-10 * std::abs(lam_new) &&
        resid <= 1e-7 * std::max(lam_new, eps)) {
      return lam_new;
    }
    lam = lam_new;
  }
  return lam;
}

struct lowest_eig {
  double lambda;
  double residual;  // ||G v - lambda v||
};

// Smallest eigenvalue of the sparse PSD Gram matrix by shifted inverse
// iteration. The shift keeps the factorization well posed when G is
// numerically singular; it is escalated if the factorization or the solves
// break down. The certificate is the plain eigen-residual on the UNshifted
// matrix, so a sloppy shift can only slow convergence, never corrupt the
// reported radius.
lowest_eig smallest_eigenvalue(const Eigen::SparseMatrix<double>& G,
                               double lam_max_scale, double tol) {
  const Eigen::Index n = G.rows();
  Eigen::SparseMatrix<double> I(n, n);
  I.setIdentity();
  lowest_eig best{std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity()};
  double shift = std::max(lam_max_scale, eps) * 1e-14;
  for (int attempt = 0; attempt < 3; ++attempt, shift *= 1e3) {
    Eigen::SparseMatrix<double> Gs = G + shift * I;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Gs);
    if (ldlt.info() != Eigen::Success) continue;
    Eigen::VectorXd v = start_vector(n).normalized();
    for (int it = 0; it < 100; ++it) {
      Eigen::VectorXd w = ldlt.solve(v);
      if (!w.allFinite()) break;
      const double nw = w.norm();
      if (nw == 0.0) break;
      v = w / nw;
      const double lam = v.dot(G * v);
      const double resid = (G * v - lam * v).norm();
      if (resid < best.residual ||
          (resid <= tol * lam_max_scale && lam < best.lambda)) {
        best = {lam, resid};
      }
      if (best.residual <= tol * lam_max_scale && it >= 2) return best;
    }
    if (best.residual <= tol * lam_max_scale) return best;
  }
  if (!std::isfinite(best.lambda)) {
    throw accuracy_error("inverse iteration failed to produce an eigenpair");
  }
  return best;
}

}  // namespace

sampling_matrix::sampling_matrix(
    double a, double scale, Eigen::Matrix<double, Eigen::Dynamic, 2> samples,
    int dim, const Eigen::Vector2i& coeff_lo, const Eigen::Vector2i& coeff_hi)
    : a_(a), scale_(scale), dim_(dim), samples_(std::move(samples)),
      lo_(coeff_lo), hi_(coeff_hi) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw invalid_parameter("kernel parameter a must be positive and finite");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw invalid_parameter("scale must be positive and finite");
  }
  if (dim != 1 && dim != 2) throw invalid_parameter("dim must be 1 or 2");
  if (samples_.rows() == 0) throw invalid_parameter("sample list is empty");
  if (!samples_.allFinite()) throw invalid_parameter("samples must be finite");
  if (hi_.x() < lo_.x() || hi_.y() < lo_.y()) {
    throw invalid_parameter("coefficient window is empty");
  }
  if (dim_ == 1 && (lo_.y() != 0 || hi_.y() != 0)) {
    throw invalid_parameter("1D coefficient window must pin m = 0");
  }
}

Eigen::Index sampling_matrix::cols() const {
  return static_cast<Eigen::Index>(hi_.x() - lo_.x() + 1) *
         static_cast<Eigen::Index>(hi_.y() - lo_.y() + 1);
}

Eigen::Vector2i sampling_matrix::col_index(Eigen::Index j) const {
  const Eigen::Index ny = hi_.y() - lo_.y() + 1;
  return {lo_.x() + static_cast<int>(j / ny), lo_.y() + static_cast<int>(j % ny)};
}

double sampling_matrix::entry(Eigen::Index i, Eigen::Index j) const {
  const Eigen::Vector2i nm = col_index(j);
  const double dx = samples_(i, 0) - nm.x();
  const double dy = samples_(i, 1) - nm.y();
  return std::exp(-a_ * scale_ * scale_ * (dx * dx + dy * dy));
}

Eigen::MatrixXd sampling_matrix::dense() const {
  Eigen::MatrixXd M(rows(), cols());
  const double as2 = a_ * scale_ * scale_;
  const Eigen::Index ny = hi_.y() - lo_.y() + 1;
  for (Eigen::Index j = 0; j < cols(); ++j) {
    const int n = lo_.x() + static_cast<int>(j / ny);
    const int m = lo_.y() + static_cast<int>(j % ny);
    for (Eigen::Index i = 0; i < rows(); ++i) {
      const double dx = samples_(i, 0) - n;
      const double dy = samples_(i, 1) - m;
      M(i, j) = std::exp(-as2 * (dx * dx + dy * dy));
    }
  }
  return M;
}

Eigen::SparseMatrix<double> sampling_matrix::sparse(
    double cutoff_exponent, const Eigen::Vector2i& box_lo,
    const Eigen::Vector2i& box_hi) const {
  if (!(cutoff_exponent > 0.0)) {
    throw invalid_parameter("cutoff exponent must be positive");
  }
  const double as2 = a_ * scale_ * scale_;
  const double r = std::sqrt(cutoff_exponent / as2);
  const int ir = static_cast<int>(std::floor(r)) + 1;
  const Eigen::Index ny = box_hi.y() - box_lo.y() + 1;
  const Eigen::Index ncol =
      static_cast<Eigen::Index>(box_hi.x() - box_lo.x() + 1) * ny;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(rows()) * (2 * ir + 1));
  for (Eigen::Index i = 0; i < rows(); ++i) {
    const double x = samples_(i, 0);
    const double y = samples_(i, 1);
    const int bx = static_cast<int>(std::llround(x));
    const int by = static_cast<int>(std::llround(y));
    const int n0 = std::max(bx - ir, box_lo.x());
    const int n1 = std::min(bx + ir, box_hi.x());
    const int m0 = std::max(by - ir, box_lo.y());
    const int m1 = std::min(by + ir, box_hi.y());
    for (int n = n0; n <= n1; ++n) {
      for (int m = m0; m <= m1; ++m) {
        const double dx = x - n;
        const double dy = y - m;
        const double e = as2 * (dx * dx + dy * dy);
        if (e > cutoff_exponent) continue;
        const Eigen::Index j =
            static_cast<Eigen::Index>(n - box_lo.x()) * ny + (m - box_lo.y());
        trips.emplace_back(static_cast<int>(i), static_cast<int>(j),
                           std::exp(-e));
      }
    }
  }
  Eigen::SparseMatrix<double> M(rows(), ncol);
  M.setFromTriplets(trips.begin(), trips.end());
  M.makeCompressed();
  return M;
}

Eigen::SparseMatrix<double> sampling_matrix::sparse(
    double cutoff_exponent) const {
  return sparse(cutoff_exponent, lo_, hi_);
}

sampling_matrix assemble(double a, double scale, const Eigen::VectorXd& samples,
                         int coeff_lo, int coeff_hi) {
  Eigen::Matrix<double, Eigen::Dynamic, 2> s(samples.size(), 2);
  s.col(0) = samples;
  s.col(1).setZero();
  return sampling_matrix(a, scale, std::move(s), 1, {coeff_lo, 0},
                         {coeff_hi, 0});
}

sampling_matrix assemble(double a, double scale,
                         const Eigen::Matrix<double, Eigen::Dynamic, 2>& samples,
                         const Eigen::Vector2i& coeff_lo,
                         const Eigen::Vector2i& coeff_hi) {
  return sampling_matrix(a, scale, samples, 2, coeff_lo, coeff_hi);
}

frame_bounds estimate_bounds(const sampling_matrix& m, int interior_margin,
                             const bounds_options& opt) {
  if (interior_margin < 0) {
    throw invalid_parameter("interior margin must be nonnegative");
  }
  Eigen::Vector2i ilo = m.coeff_lo();
  Eigen::Vector2i ihi = m.coeff_hi();
  ilo.x() += interior_margin;
  ihi.x() -= interior_margin;
  if (m.dim() == 2) {
    ilo.y() += interior_margin;
    ihi.y() -= interior_margin;
  }
  if (ihi.x() < ilo.x() || ihi.y() < ilo.y()) {
    throw precondition_error("interior window is empty at this margin");
  }
  // Samples must at least span the interior window; otherwise the lower
  // bound measures window truncation, not the point set.
  const auto& S = m.samples();
  if (S.col(0).minCoeff() > ilo.x() || S.col(0).maxCoeff() < ihi.x() ||
      (m.dim() == 2 &&
       (S.col(1).minCoeff() > ilo.y() || S.col(1).maxCoeff() < ihi.y()))) {
    throw precondition_error("samples do not cover the interior window");
  }

  frame_bounds out;
  out.interior_margin = interior_margin;
  out.interior_lo = ilo;
  out.interior_hi = ihi;

  const Eigen::Index ny = m.coeff_hi().y() - m.coeff_lo().y() + 1;
  const Eigen::Index icols =
      static_cast<Eigen::Index>(ihi.x() - ilo.x() + 1) *
      static_cast<Eigen::Index>(ihi.y() - ilo.y() + 1);

  bool dense_path;
  switch (opt.mode) {
    case bounds_options::path::dense: dense_path = true; break;
    case bounds_options::path::iterative: dense_path = false; break;
    default:
      dense_path = m.cols() <= 4000 &&
                   m.rows() * m.cols() <= static_cast<Eigen::Index>(2e7);
  }

  if (dense_path) {
    const Eigen::MatrixXd M = m.dense();
    Eigen::MatrixXd MI(M.rows(), icols);
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Eigen::Vector2i nm = m.col_index(j);
      if (nm.x() >= ilo.x() && nm.x() <= ihi.x() && nm.y() >= ilo.y() &&
          nm.y() <= ihi.y()) {
        MI.col(k++) = M.col(j);
      }
    }
    // Direct SVD of the rectangular section. Forming the Gram matrix would
    // square the condition number and bury genuinely tiny sigma_min^2
    // (~1e-17) in formation noise (~1e-14); BDCSVD keeps the floor at
    // (eps * sigma_max)^2 scale.
    Eigen::BDCSVD<Eigen::MatrixXd> svd_i(MI);
    const double smin = svd_i.singularValues().tail(1)(0);
    double smax_ref = svd_i.singularValues()(0);
    out.A_est = smin * smin;
    if (opt.want_upper) {
      Eigen::BDCSVD<Eigen::MatrixXd> svd_f(M);
      const double smax = svd_f.singularValues()(0);
      out.B_est = smax * smax;
      smax_ref = smax;
    } else {
      out.B_est = nan;
    }
    const double sfloor = 100.0 * eps * smax_ref;
    out.lower_floor = sfloor * sfloor;
    out.iterative = false;
    return out;
  }

  const Eigen::SparseMatrix<double> MI =
      m.sparse(opt.cutoff_exponent, ilo, ihi);
  Eigen::SparseMatrix<double> G(icols, icols);
  G = Eigen::SparseMatrix<double>(MI.transpose()) * MI;
  G.makeCompressed();
  const double lam_max_G =
      power_lambda_max([&G](const Eigen::VectorXd& v) { return G * v; },
                       icols);
  double lam_scale = lam_max_G;
  if (opt.want_upper) {
    const Eigen::SparseMatrix<double> M = m.sparse(opt.cutoff_exponent);
    const double lam_max_full = power_lambda_max(
        [&M](const Eigen::VectorXd& v) {
          return Eigen::VectorXd(M.transpose() * (M * v));
        },
        m.cols());
    out.B_est = lam_max_full;
    lam_scale = std::max(lam_scale, lam_max_full);
  } else {
    out.B_est = nan;
  }
  const lowest_eig low = smallest_eigenvalue(G, lam_scale, opt.tol);
  out.A_est = std::max(low.lambda, 0.0);
  out.certificate = low.residual;
  out.lower_floor = low.residual + 10.0 * eps * lam_scale;
  out.iterative = true;
  return out;
}

double pair_ratio(const frame_bounds& prev, const frame_bounds& cur) {
  if (prev.A_est <= prev.lower_floor || cur.A_est <= cur.lower_floor) {
    return nan;  // at least one side unresolved
  }
  return cur.A_est / prev.A_est;
}

trend_table finish_trend(std::vector<trend_row> rows) {
  trend_table t;
  t.max_consecutive_ratio = nan;
  for (size_t i = 1; i < rows.size(); ++i) {
    const double r = pair_ratio(rows[i - 1].bounds, rows[i].bounds);
    if (std::isnan(r)) continue;
    const double sym = std::max(r, 1.0 / r);
    if (std::isnan(t.max_consecutive_ratio) || sym > t.max_consecutive_ratio) {
      t.max_consecutive_ratio = sym;
    }
  }
  t.rows = std::move(rows);
  return t;
}

void check_window_list(const std::vector<int>& N_list, int margin,
                       size_t min_count) {
  if (N_list.size() < min_count) {
    throw invalid_parameter("trend needs at least " +
                            std::to_string(min_count) + " windows");
  }
  for (size_t i = 0; i < N_list.size(); ++i) {
    if (N_list[i] <= margin) {
      throw invalid_parameter("window must exceed the interior margin");
    }
    if (i > 0 && N_list[i] <= N_list[i - 1]) {
      throw invalid_parameter("window list must be strictly increasing");
    }
  }
}

trend_table bound_trend(const point_set_1d& gamma, double a,
                        const std::vector<int>& N_list, int margin,
                        const bounds_options& opt) {
  check_window_list(N_list, margin, 3);
  std::vector<trend_row> rows;
  for (int N : N_list) {
    const double w = N + 2.0 * margin;
    const Eigen::VectorXd pts = gamma.points(-w, w);
    if (pts.size() == 0) {
      throw range_too_small("no sample points in the inflated window");
    }
    const sampling_matrix M = assemble(a, 1.0, pts, -N, N);
    trend_row row;
    row.N = N;
    row.bounds = estimate_bounds(M, margin, opt);
    row.ratio_prev =
        rows.empty() ? nan : pair_ratio(rows.back().bounds, row.bounds);
    rows.push_back(std::move(row));
  }
  return finish_trend(std::move(rows));
}

trend_table bound_trend(const slanted_config& cfg, double a,
                        const std::vector<int>& N_list, int margin,
                        const bounds_options& opt) {
  check_window_list(N_list, margin, 3);
  std::vector<trend_row> rows;
  for (int N : N_list) {
    const double w = N + 2.0 * margin;
    const auto pts = build_slanted(cfg, {-w, -w}, {w, w});
    if (pts.rows() == 0) {
      throw range_too_small("no sample points in the inflated window");
    }
    const sampling_matrix M = assemble(a, 1.0, pts, {-N, -N}, {N, N});
    trend_row row;
    row.N = N;
    row.bounds = estimate_bounds(M, margin, opt);
    row.ratio_prev =
        rows.empty() ? nan : pair_ratio(rows.back().bounds, row.bounds);
    rows.push_back(std::move(row));
  }
  return finish_trend(std::move(rows));
}

reconstruction reconstruct(const sampling_matrix& m,
                           const Eigen::VectorXd& values) {
  if (values.size() != m.rows()) {
    throw invalid_parameter("sample value count does not match matrix rows");
  }
  reconstruction rec;
  if (m.cols() <= 4000 && m.rows() * m.cols() <= static_cast<Eigen::Index>(2e7)) {
    const Eigen::MatrixXd M = m.dense();
    if (M.cwiseAbs().maxCoeff() == 0.0) {
      throw rank_error("sampling matrix is numerically zero");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    rec.coefficients = qr.solve(values);
    rec.residual_norm = (M * rec.coefficients - values).norm();
    return rec;
  }
  // CGLS on the sparse section for desk-scale-exceeding inputs.
  const Eigen::SparseMatrix<double> M = m.sparse();
  if (M.nonZeros() == 0) throw rank_error("sampling matrix is numerically zero");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m.cols());
  Eigen::VectorXd r = values;
  Eigen::VectorXd s = M.transpose() * r;
  Eigen::VectorXd p = s;
  double snorm2 = s.squaredNorm();
  const double tol2 = 1e-20 * snorm2;
  const int maxit = 5 * static_cast<int>(m.cols());
  for (int it = 0; it < maxit && snorm2 > tol2; ++it) {
    const Eigen::VectorXd q = M * p;
    const double alpha = snorm2 / q.squaredNorm();
    x += alpha * p;
    r -= alpha * q;
    s = M.transpose() * r;
    const double snorm2_new = s.squaredNorm();
    p = s + (snorm2_new / snorm2) * p;
    snorm2 = snorm2_new;
  }
  rec.coefficients = std::move(x);
  rec.residual_norm = r.norm();
  return rec;
}

}  // namespace gsamp
