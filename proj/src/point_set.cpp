#include "gsamp/point_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsamp/errors.hpp"

namespace gsamp {

namespace {

constexpr double match_tol = 1e-9;

void check_alpha(double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) {
    throw invalid_parameter("progression step must be positive and finite");
  }
}

}  // namespace

point_set_1d point_set_1d::prog(double alpha, double beta) {
  check_alpha(alpha);
  if (!std::isfinite(beta)) throw invalid_parameter("progression offset must be finite");
  point_set_1d s;
  s.progs_.push_back({alpha, beta});
  return s;
}

point_set_1d point_set_1d::prog_union(std::vector<progression> progs) {
  if (progs.empty()) throw invalid_parameter("union needs at least one progression");
  for (const progression& pr : progs) {
    check_alpha(pr.alpha);
    if (!std::isfinite(pr.beta)) throw invalid_parameter("progression offset must be finite");
  }
  point_set_1d s;
  s.progs_ = std::move(progs);
  return s;
}

point_set_1d point_set_1d::explicit_list(Eigen::VectorXd pts) {
  // An empty list is a valid (empty) separated set; annihilator factories
  // accept it and produce unconstrained functions.
  if (!pts.allFinite()) throw invalid_parameter("explicit points must be finite");
  std::sort(pts.begin(), pts.end());
  point_set_1d s;
  s.explicit_pts_ = std::move(pts);
  return s;
}

point_set_1d point_set_1d::punctured(std::vector<double> removed) const {
  point_set_1d s = *this;
  s.removed_.insert(s.removed_.end(), removed.begin(), removed.end());
  return s;
}

point_set_1d point_set_1d::perturbed(
    std::vector<std::pair<double, double>> table) const {
  for (const auto& [x, off] : table) {
    if (!std::isfinite(x) || !std::isfinite(off)) {
      throw invalid_parameter("perturbation table entries must be finite");
    }
  }
  point_set_1d s = *this;
  s.offsets_.insert(s.offsets_.end(), table.begin(), table.end());
  return s;
}

point_set_1d point_set_1d::translated(double shift) const {
  if (!std::isfinite(shift)) throw invalid_parameter("shift must be finite");
  point_set_1d s = *this;
  for (progression& pr : s.progs_) pr.beta += shift;
  s.explicit_pts_.array() += shift;
  for (double& r : s.removed_) r += shift;
  for (auto& [x, off] : s.offsets_) x += shift;
  return s;
}

point_set_1d point_set_1d::negated() const {
  point_set_1d s = *this;
  for (progression& pr : s.progs_) pr.beta = -pr.beta;  // alpha*Z is symmetric
  s.explicit_pts_ = (-explicit_pts_.array()).reverse();
  for (double& r : s.removed_) r = -r;
  for (auto& [x, off] : s.offsets_) {
    x = -x;
    off = -off;
  }
  return s;
}

point_set_1d point_set_1d::scaled(double factor) const {
  if (!std::isfinite(factor) || !(factor > 0.0)) {
    throw invalid_parameter("scale factor must be positive (compose with negated() for sign)");
  }
  point_set_1d s = *this;
  for (progression& pr : s.progs_) {
    pr.alpha *= factor;
    pr.beta *= factor;
  }
  s.explicit_pts_ *= factor;
  for (double& r : s.removed_) r *= factor;
  for (auto& [x, off] : s.offsets_) {
    x *= factor;
    off *= factor;
  }
  return s;
}

bool point_set_1d::is_pure_progression() const {
  return progs_.size() == 1 && removed_.empty() && offsets_.empty();
}

std::optional<double> point_set_1d::exact_density() const {
  // Punctures and bounded perturbations are density-neutral, and each union
  // branch counts separately: points() concatenates branches into a multiset,
  // so the density the rest of the library sees is the sum over branches.
  if (progs_.empty()) return std::nullopt;
  double d = 0.0;
  for (const progression& pr : progs_) d += 1.0 / pr.alpha;
  return d;
}

Eigen::VectorXd point_set_1d::points(double lo, double hi) const {
  if (!(hi >= lo)) throw invalid_parameter("window is empty");
  double maxoff = 0.0;
  for (const auto& [x, off] : offsets_) maxoff = std::max(maxoff, std::abs(off));
  const double infl = 2.0 / separation_hint() + maxoff;
  const double glo = lo - infl;
  const double ghi = hi + infl;

  std::vector<double> pts;
  for (const progression& pr : progs_) {
    const long j0 = static_cast<long>(std::ceil((glo - pr.beta) / pr.alpha));
    const long j1 = static_cast<long>(std::floor((ghi - pr.beta) / pr.alpha));
    for (long j = j0; j <= j1; ++j) {
      pts.push_back(pr.alpha * static_cast<double>(j) + pr.beta);
    }
  }
  for (Eigen::Index i = 0; i < explicit_pts_.size(); ++i) {
    if (explicit_pts_[i] >= glo && explicit_pts_[i] <= ghi) {
      pts.push_back(explicit_pts_[i]);
    }
  }
  for (const auto& [x, off] : offsets_) {
    for (double& p : pts) {
      if (std::abs(p - x) <= match_tol) p += off;
    }
  }
  std::vector<double> out;
  out.reserve(pts.size());
  for (double p : pts) {
    bool drop = false;
    for (double r : removed_) {
      if (std::abs(p - r) <= match_tol) {
        drop = true;
        break;
      }
    }
    if (!drop && p >= lo && p <= hi) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  for (size_t i = 1; i < out.size(); ++i) {
    if (out[i] - out[i - 1] <= 0.0) {
      throw invalid_parameter("descriptor generates coincident points; not a separated set");
    }
  }
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

double point_set_1d::separation(double lo, double hi) const {
  if (is_pure_progression()) {
    // Exact: consecutive points differ by alpha. Still require two points in
    // the window so the quantity is well defined there.
    const progression& pr = progs_[0];
    const long j0 = static_cast<long>(std::ceil((lo - pr.beta) / pr.alpha));
    const long j1 = static_cast<long>(std::floor((hi - pr.beta) / pr.alpha));
    if (j1 - j0 < 1) throw undefined_separation("fewer than 2 points in window");
    return pr.alpha;
  }
  const Eigen::VectorXd pts = points(lo, hi);
  if (pts.size() < 2) throw undefined_separation("fewer than 2 points in window");
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i < pts.size(); ++i) {
    gap = std::min(gap, pts[i] - pts[i - 1]);
  }
  return gap;
}

double point_set_1d::separation_hint() const {
  if (is_pure_progression()) return progs_[0].alpha;
  // Measured hint on a fixed default window; callers needing window-exact
  // values use separation(). Base points only (pre-modifier) so the hint is
  // cheap and cannot recurse through points().
  double hint = std::numeric_limits<double>::infinity();
  for (const progression& pr : progs_) hint = std::min(hint, pr.alpha);
  if (progs_.size() > 1) {
    // Interleaved progressions: sample gaps over a window spanning all betas.
    double blo = 0.0, bhi = 0.0;
    for (const progression& pr : progs_) {
      blo = std::min(blo, pr.beta);
      bhi = std::max(bhi, pr.beta);
    }
    std::vector<double> pts;
    for (const progression& pr : progs_) {
      const double lo = blo - 100.0 * pr.alpha, hi = bhi + 100.0 * pr.alpha;
      const long j0 = static_cast<long>(std::ceil((lo - pr.beta) / pr.alpha));
      const long j1 = static_cast<long>(std::floor((hi - pr.beta) / pr.alpha));
      for (long j = j0; j <= j1; ++j) pts.push_back(pr.alpha * j + pr.beta);
    }
    std::sort(pts.begin(), pts.end());
    for (size_t i = 1; i < pts.size(); ++i) {
      const double g = pts[i] - pts[i - 1];
      if (g > 0.0) hint = std::min(hint, g);
    }
  }
  if (explicit_pts_.size() >= 2) {
    for (Eigen::Index i = 1; i < explicit_pts_.size(); ++i) {
      const double g = explicit_pts_[i] - explicit_pts_[i - 1];
      if (g > 0.0) hint = std::min(hint, g);
    }
  }
  if (!std::isfinite(hint)) hint = 1.0;  // zero or one explicit point
  double maxoff = 0.0;
  for (const auto& [x, off] : offsets_) maxoff = std::max(maxoff, std::abs(off));
  // Perturbations can close gaps by at most 2*maxoff.
  hint = std::max(hint - 2.0 * maxoff, 0.25 * hint);
  return hint;
}

density_report beurling_density(const point_set_1d& set,
                                const std::vector<double>& R_list,
                                double center_step) {
  if (R_list.empty()) throw invalid_parameter("R_list must be nonempty");
  for (size_t i = 0; i < R_list.size(); ++i) {
    if (!(R_list[i] > 0.0)) throw invalid_parameter("window lengths must be positive");
    if (i > 0 && R_list[i] <= R_list[i - 1]) {
      throw invalid_parameter("R_list must be strictly increasing");
    }
  }
  density_report rep;
  rep.exact = set.exact_density().has_value();
  const double step =
      center_step > 0.0 ? center_step : 0.5 * set.separation_hint();
  for (double R : R_list) {
    const Eigen::VectorXd pts = set.points(-R, R);
    double lo_count = std::numeric_limits<double>::infinity();
    double hi_count = 0.0;
    const long nc = static_cast<long>(std::floor(R / step)) + 1;
    for (long i = 0; i < nc; ++i) {
      const double x = -R / 2.0 + step * static_cast<double>(i);
      if (x > R / 2.0) break;
      const double* b = pts.data();
      const double* e = pts.data() + pts.size();
      const auto c0 = std::lower_bound(b, e, x - R / 2.0);
      const auto c1 = std::upper_bound(b, e, x + R / 2.0);
      const double count = static_cast<double>(c1 - c0);
      lo_count = std::min(lo_count, count);
      hi_count = std::max(hi_count, count);
    }
    rep.table.push_back({R, lo_count / R, hi_count / R});
  }
  if (rep.exact) {
    rep.d_minus = rep.d_plus = *set.exact_density();
  } else {
    rep.d_minus = rep.table.back().count_over_R_inf;
    rep.d_plus = rep.table.back().count_over_R_sup;
  }
  return rep;
}

}  // namespace gsamp
