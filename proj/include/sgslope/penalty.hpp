#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "sgslope/common.hpp"
#include "sgslope/groups.hpp"
#include "sgslope/sorting.hpp"

namespace sgslope {

/// Sorted-L1 norm: sum_i v_i |x|_(i) with |x|_(1) >= |x|_(2) >= ...
inline double slope_norm(const VectorXd& x, const VectorXd& v) {
  require(x.size() == v.size(), "slope_norm: size mismatch");
  SortedVector s = sort_desc_with_index(x, true);
  return s.values.dot(v);
}

/// Group sorted-L1 norm: the sorted-L1 norm of the size-scaled group norms
/// sqrt(p_g) ||x^(g)||_2, weights matched to the sorted statistic.
inline double gslope_norm(const VectorXd& x, const VectorXd& w, const GroupStructure& G) {
  return slope_norm(group_reduce(x, G, 0.5), w);
}

/// Convex combination alpha * slope + (1 - alpha) * gslope.
inline double sgs_norm(const VectorXd& x, double alpha, const VectorXd& v,
                       const VectorXd& w, const GroupStructure& G) {
  require(alpha >= 0 && alpha <= 1, "sgs_norm: alpha must be in [0,1]");
  return alpha * slope_norm(x, v) + (1 - alpha) * gslope_norm(x, w, G);
}

/// Dual norm of the sorted-L1 norm: max over prefixes of
/// cumsum(|x| sorted desc) / cumsum(v). v must be nonincreasing with v_1 > 0;
/// trailing zeros in v are harmless because every prefix sum of v is then
/// positive.
inline double slope_dual_norm(const VectorXd& x, const VectorXd& v) {
  require(x.size() == v.size(), "slope_dual_norm: size mismatch");
  require(v.size() > 0 && v[0] > 0, "slope_dual_norm: v must have positive head");
  SortedVector s = sort_desc_with_index(x, true);
  double cx = 0, cv = 0, best = 0;
  for (int i = 0; i < s.values.size(); ++i) {
    cx += s.values[i];
    cv += v[i];
    best = std::max(best, cx / cv);
  }
  return best;
}

/// Dual norm of the group sorted-L1 norm: the sorted-L1 dual applied to the
/// size-down-scaled group norms p_g^{-1/2} ||x^(g)||_2.
inline double gslope_dual_norm(const VectorXd& x, const VectorXd& w,
                               const GroupStructure& G) {
  return slope_dual_norm(group_reduce(x, G, -0.5), w);
}

/// Membership test for the zero-point subdifferential of the sorted-L1 norm:
/// every prefix of cumsum(|x| sorted desc - v) must be <= tol.
inline bool slope_subdiff_zero_check(const VectorXd& x, const VectorXd& v,
                                     double tol = 1e-9) {
  require(x.size() == v.size(), "slope_subdiff_zero_check: size mismatch");
  SortedVector s = sort_desc_with_index(x, true);
  double run = 0;
  for (int i = 0; i < s.values.size(); ++i) {
    run += s.values[i] - v[i];
    if (run > tol) return false;
  }
  return true;
}

/// Same membership test for the group norm at zero: reduce with exponent
/// -1/2 and test against the group weights.
inline bool gslope_subdiff_zero_check(const VectorXd& x, const VectorXd& w,
                                      const GroupStructure& G, double tol = 1e-9) {
  return slope_subdiff_zero_check(group_reduce(x, G, -0.5), w, tol);
}

/// Soft threshold with thresholds matched to the magnitude ranks of x: the
/// i-th largest |x| entry is shrunk by t_i. Output keeps original positions
/// and signs.
inline VectorXd soft_threshold_ranked(const VectorXd& x, const VectorXd& t) {
  require(x.size() == t.size(), "soft_threshold_ranked: size mismatch");
  require(t.size() == 0 || t.minCoeff() >= 0,
          "soft_threshold_ranked: thresholds must be nonnegative");
  SortedVector s = sort_desc_with_index(x, true);
  VectorXd out(x.size());
  for (int i = 0; i < x.size(); ++i) {
    int j = s.order[std::size_t(i)];
    double mag = std::max(0.0, s.values[i] - t[i]);
    out[j] = x[j] >= 0 ? mag : -mag;
  }
  return out;
}

enum class PenaltyKind { slope, gslope, sgs };

/// Complete penalty description: lambda * [ alpha * slope(v) +
/// (1-alpha) * gslope(w) ] with kind fixing the degenerate cases
/// (slope: alpha = 1, w unused; gslope: alpha = 0, v unused).
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::gslope;
  double alpha = 0.95;  // only meaningful for kind == sgs
  VectorXd v, w;

  double effective_alpha() const {
    switch (kind) {
      case PenaltyKind::slope: return 1.0;
      case PenaltyKind::gslope: return 0.0;
      default: return alpha;
    }
  }
};

inline void validate_penalty(const PenaltySpec& P, const GroupStructure& G) {
  if (P.kind != PenaltyKind::gslope) {
    require(int(P.v.size()) == G.n_vars(), "penalty: v length must equal p");
    require(is_nonincreasing(P.v), "penalty: v must be nonincreasing and nonnegative");
    require(P.v[0] > 0, "penalty: v must have positive head");
  }
  if (P.kind != PenaltyKind::slope) {
    require(int(P.w.size()) == G.n_groups(), "penalty: w length must equal m");
    require(is_nonincreasing(P.w), "penalty: w must be nonincreasing and nonnegative");
    require(P.w[0] > 0, "penalty: w must have positive head");
  }
  if (P.kind == PenaltyKind::sgs)
    require(P.alpha >= 0 && P.alpha <= 1, "penalty: alpha must be in [0,1]");
}

/// Penalty value at beta (without the lambda factor).
inline double penalty_value(const VectorXd& beta, const PenaltySpec& P,
                            const GroupStructure& G) {
  double a = P.effective_alpha();
  double out = 0;
  if (a > 0) out += a * slope_norm(beta, P.v);
  if (a < 1) out += (1 - a) * gslope_norm(beta, P.w, G);
  return out;
}

}  // namespace sgslope
