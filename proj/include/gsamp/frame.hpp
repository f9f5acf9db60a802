#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <vector>

#include "gsamp/point_set.hpp"
#include "gsamp/slanted.hpp"

namespace gsamp {

// Finite section of the analysis map coefficients -> samples: row i, column
// (n,m) holds exp(-a * scale^2 * |sample_i - (n,m)|^2). Rows keep the input
// sample order; columns run lexicographically over the integer window
// (dim 1 uses the x component only, y pinned to 0).
class sampling_matrix {
 public:
  sampling_matrix(double a, double scale,
                  Eigen::Matrix<double, Eigen::Dynamic, 2> samples, int dim,
                  const Eigen::Vector2i& coeff_lo,
                  const Eigen::Vector2i& coeff_hi);

  double a() const { return a_; }
  double scale() const { return scale_; }
  int dim() const { return dim_; }
  const Eigen::Matrix<double, Eigen::Dynamic, 2>& samples() const {
    return samples_;
  }
  const Eigen::Vector2i& coeff_lo() const { return lo_; }
  const Eigen::Vector2i& coeff_hi() const { return hi_; }

  Eigen::Index rows() const { return samples_.rows(); }
  Eigen::Index cols() const;

  Eigen::Vector2i col_index(Eigen::Index j) const;  // (n, m) of column j
  double entry(Eigen::Index i, Eigen::Index j) const;

  Eigen::MatrixXd dense() const;

  // Sparse view dropping entries with a * scale^2 * d^2 > cutoff_exponent
  // (each dropped entry is below e^{-cutoff}; at the default 50 the
  // perturbation is ~1e-22 per entry, far beneath the iterative-path
  // certificates). Column box may restrict to a sub-window.
  Eigen::SparseMatrix<double> sparse(double cutoff_exponent,
                                     const Eigen::Vector2i& box_lo,
                                     const Eigen::Vector2i& box_hi) const;
  Eigen::SparseMatrix<double> sparse(double cutoff_exponent = 50.0) const;

 private:
  double a_, scale_;
  int dim_;
  Eigen::Matrix<double, Eigen::Dynamic, 2> samples_;
  Eigen::Vector2i lo_, hi_;
};

sampling_matrix assemble(double a, double scale, const Eigen::VectorXd& samples,
                         int coeff_lo, int coeff_hi);
sampling_matrix assemble(double a, double scale,
                         const Eigen::Matrix<double, Eigen::Dynamic, 2>& samples,
                         const Eigen::Vector2i& coeff_lo,
                         const Eigen::Vector2i& coeff_hi);

struct bounds_options {
  enum class path { auto_select, dense, iterative };
  path mode = path::auto_select;
  bool want_upper = true;
  // Iterative-path certificate target: accepted when the eigen-residual
  // ||G v - lambda v|| falls below tol * lambda_max.
  double tol = 1e-8;
  double cutoff_exponent = 50.0;
};

// Squared-bound convention throughout: A_est and B_est multiply squared
// norms, A_est = sigma_min^2 over interior-supported coefficients (all
// rows), B_est = sigma_max^2 of the full section. lower_floor is the
// numerical resolution of A_est: values at or below it are
// indistinguishable from zero (dense: SVD backward-error scale; iterative:
// the certified residual radius). Trend predicates must treat A_est <=
// lower_floor as "numerically zero" rather than a resolved magnitude.
struct frame_bounds {
  double A_est = 0.0;
  double B_est = 0.0;  // NaN when the upper bound was not requested
  double lower_floor = 0.0;
  int interior_margin = 0;
  Eigen::Vector2i interior_lo, interior_hi;
  bool iterative = false;
  double certificate = 0.0;  // achieved residual (iterative path)
};

frame_bounds estimate_bounds(const sampling_matrix& m, int interior_margin,
                             const bounds_options& opt = {});

struct trend_row {
  int N;
  frame_bounds bounds;
  double ratio_prev;  // A_est(N) / A_est(previous N); NaN on the first row
};

struct trend_table {
  std::vector<trend_row> rows;
  // max over consecutive pairs of max(r, 1/r) with below-floor values
  // excluded; NaN when no pair is resolvable.
  double max_consecutive_ratio;
};

// Shared trend machinery, used by every module that tracks A_est across
// growing windows. pair_ratio is NaN when either side sits at or below its
// numerical floor; finish_trend fills max_consecutive_ratio from the rows.
double pair_ratio(const frame_bounds& prev, const frame_bounds& cur);
trend_table finish_trend(std::vector<trend_row> rows);
void check_window_list(const std::vector<int>& N_list, int margin,
                       size_t min_count);

// Window convention: coefficients on [-N, N]^d, samples drawn from the
// source intersected with [-N - 2*margin, N + 2*margin]^d, interior mask
// [-(N - margin), N - margin]^d.
trend_table bound_trend(const point_set_1d& gamma, double a,
                        const std::vector<int>& N_list, int margin,
                        const bounds_options& opt = {});
trend_table bound_trend(const slanted_config& cfg, double a,
                        const std::vector<int>& N_list, int margin,
                        const bounds_options& opt = {});

struct reconstruction {
  Eigen::VectorXd coefficients;  // column order of the matrix
  double residual_norm;
};

// Least squares min ||M c - values||_2. With A_est > 0 for the interior
// block, interior coefficients of a ground-truth function are recovered
// with error <= residual / sqrt(A_est).
reconstruction reconstruct(const sampling_matrix& m,
                           const Eigen::VectorXd& values);

}  // namespace gsamp
