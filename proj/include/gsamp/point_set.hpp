#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

namespace gsamp {

// alpha * Z + beta with alpha > 0.
struct progression {
  double alpha;
  double beta;
};

// Separated subset of the line, described symbolically: a union of arithmetic
// progressions or an explicit finite list, optionally punctured (points
// removed by 1e-9 proximity match) and perturbed (per-point offsets from a
// table of (base point, offset) rows). Window queries generate on an
// internally inflated window, apply modifiers, then filter, so boundary
// points survive descriptor arithmetic. Immutable after construction.
class point_set_1d {
 public:
  static point_set_1d prog(double alpha, double beta = 0.0);
  static point_set_1d prog_union(std::vector<progression> progs);
  static point_set_1d explicit_list(Eigen::VectorXd pts);

  point_set_1d punctured(std::vector<double> removed) const;
  point_set_1d perturbed(std::vector<std::pair<double, double>> table) const;
  point_set_1d translated(double shift) const;
  point_set_1d negated() const;
  point_set_1d scaled(double factor) const;  // factor > 0

  // Sorted points in [lo, hi]; throws if a positive separation fails.
  Eigen::VectorXd points(double lo, double hi) const;

  // Minimum gap among points in [lo, hi]; exact closed form (alpha) for a
  // pure single progression. Throws undefined_separation below 2 points.
  double separation(double lo, double hi) const;

  // Exact separation for pure progressions, otherwise measured on a default
  // window. Used for window inflation and density center-grid steps.
  double separation_hint() const;

  bool is_pure_progression() const;
  // The exact density (sum of 1/alpha over union branches, counted as a
  // multiset) when the descriptor is built from progressions up to finitely
  // many modifications (punctures and bounded perturbations are
  // density-neutral); empty for explicit lists.
  std::optional<double> exact_density() const;

  const std::vector<progression>& progressions() const { return progs_; }

 private:
  point_set_1d() = default;

  std::vector<progression> progs_;  // union members; empty for explicit lists
  Eigen::VectorXd explicit_pts_;
  std::vector<double> removed_;
  std::vector<std::pair<double, double>> offsets_;
};

struct density_row {
  double R;
  double count_over_R_inf;
  double count_over_R_sup;
};

struct density_report {
  double d_minus;
  double d_plus;
  bool exact;  // closed form, not a windowed estimate
  std::vector<density_row> table;
};

// Sliding-window Beurling density estimates: for each R the centers sweep
// [-R/2, R/2] at center_step (default separation/2) and count points in
// [x - R/2, x + R/2]. Progression-like descriptors short-circuit to the
// exact limit and flag it.
density_report beurling_density(const point_set_1d& set,
                                const std::vector<double>& R_list,
                                double center_step = 0.0);

}  // namespace gsamp
