#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <vector>

#include "sgslope/common.hpp"
#include "sgslope/groups.hpp"
#include "sgslope/penalty.hpp"
#include "sgslope/sorting.hpp"

namespace sgslope {

/// Flush condition of the cumulative-sum screen: `total` flushes the buffer
/// when the buffered sum of c - phi reaches zero; `all_prefixes` requires
/// every running prefix inside the buffer to be nonnegative.
enum class CumsumRule { total, all_prefixes };

/// Buffered cumulative-sum screen. Walks positions 0..n-1, accumulating a
/// buffer; when the flush condition on c - phi (against `margin`) holds, the
/// whole buffer is emitted. Returns the emitted positions in order. When
/// `excess` is non-null it receives the largest buffered statistic the flush
/// condition compared against `margin` (-inf for empty input).
inline std::vector<int> cumsum_screen(const VectorXd& c, const VectorXd& phi,
                                      CumsumRule rule = CumsumRule::total,
                                      double margin = 0.0,
                                      double* excess = nullptr) {
  require(c.size() == phi.size(), "cumsum_screen: size mismatch");
  std::vector<int> out, buffer;
  const double inf = std::numeric_limits<double>::infinity();
  double total = 0, min_prefix = inf, best = -inf;
  for (int i = 0; i < c.size(); ++i) {
    buffer.push_back(i);
    total += c[i] - phi[i];
    min_prefix = std::min(min_prefix, total);
    double stat = rule == CumsumRule::total ? total : min_prefix;
    best = std::max(best, stat);
    if (stat >= margin) {
      out.insert(out.end(), buffer.begin(), buffer.end());
      buffer.clear();
      total = 0;
      min_prefix = inf;
    }
  }
  if (excess) *excess = best;
  return out;
}

namespace detail {

// Screen statistic triple in sorted order: position i carries entity
// order[i] with score c[i] tested against phi[i].
struct ScreenCandidates {
  VectorXd c, phi;
  std::vector<int> order;
};

inline std::vector<int> apply_screen(const ScreenCandidates& s, CumsumRule rule,
                                     double margin = 0.0) {
  std::vector<int> pos = cumsum_screen(s.c, s.phi, rule, margin);
  std::vector<int> ids;
  ids.reserve(pos.size());
  for (int i : pos) ids.push_back(s.order[std::size_t(i)]);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace detail

/// Strong group screen for the group sorted-L1 penalty. `grad_prev` is the
/// loss gradient at the solution for lambda_k; returns the candidate group
/// ids for lambda_next <= lambda_k. With lambda_next == lambda_k this is the
/// exact (non-heuristic) rule.
inline std::vector<int> gslope_screen(const VectorXd& grad_prev,
                                      const GroupStructure& G, const VectorXd& w,
                                      double lambda_k, double lambda_next,
                                      CumsumRule rule = CumsumRule::total) {
  require(lambda_k >= lambda_next && lambda_next >= 0,
          "gslope_screen: need lambda_k >= lambda_next >= 0");
  SortedVector s = sort_desc_with_index(group_reduce(grad_prev, G, -0.5));
  detail::ScreenCandidates cand;
  cand.order = s.order;
  cand.c = s.values + (lambda_k - lambda_next) * w;
  cand.phi = lambda_next * w;
  return detail::apply_screen(cand, rule);
}

/// Strong group screen for the sparse-group penalty: the gradient is first
/// soft-thresholded at lambda_k * alpha * v (rank-aligned), then reduced and
/// tested against the group part (1 - alpha) * w.
inline std::vector<int> sgs_group_screen(const VectorXd& grad_prev,
                                         const GroupStructure& G, double alpha,
                                         const VectorXd& v, const VectorXd& w,
                                         double lambda_k, double lambda_next,
                                         CumsumRule rule = CumsumRule::total) {
  require(alpha >= 0 && alpha < 1, "sgs_group_screen: alpha must be in [0,1)");
  require(lambda_k >= lambda_next && lambda_next >= 0,
          "sgs_group_screen: need lambda_k >= lambda_next >= 0");
  VectorXd st = soft_threshold_ranked(grad_prev, lambda_k * alpha * v);
  SortedVector s = sort_desc_with_index(group_reduce(st, G, -0.5));
  detail::ScreenCandidates cand;
  cand.order = s.order;
  cand.c = s.values + (lambda_k - lambda_next) * (1 - alpha) * w;
  cand.phi = lambda_next * (1 - alpha) * w;
  return detail::apply_screen(cand, rule);
}

/// Strong variable screen for the sparse-group penalty, restricted to the
/// variables of `candidate_groups`. Weight entries are taken at the rank
/// positions the candidate variables occupy in the full |gradient| sort, so
/// with every group as candidate this is exactly the plain SLOPE strong rule.
inline std::vector<int> sgs_variable_screen(const VectorXd& grad_prev,
                                            const GroupStructure& G, double alpha,
                                            const VectorXd& v, double lambda_k,
                                            double lambda_next,
                                            const std::vector<int>& candidate_groups,
                                            CumsumRule rule = CumsumRule::total) {
  require(alpha > 0 && alpha <= 1, "sgs_variable_screen: alpha must be in (0,1]");
  require(lambda_k >= lambda_next && lambda_next >= 0,
          "sgs_variable_screen: need lambda_k >= lambda_next >= 0");
  std::vector<char> is_candidate(std::size_t(G.n_vars()), 0);
  for (int g : candidate_groups)
    for (int j : G.members[std::size_t(g)]) is_candidate[std::size_t(j)] = 1;
  SortedVector s = sort_desc_with_index(grad_prev, true);
  detail::ScreenCandidates cand;
  std::vector<double> c, phi;
  for (int i = 0; i < int(s.order.size()); ++i) {
    int var = s.order[std::size_t(i)];
    if (!is_candidate[std::size_t(var)]) continue;
    cand.order.push_back(var);
    c.push_back(s.values[i] + (lambda_k - lambda_next) * alpha * v[i]);
    phi.push_back(lambda_next * alpha * v[i]);
  }
  cand.c = Eigen::Map<VectorXd>(c.data(), Eigen::Index(c.size()));
  cand.phi = Eigen::Map<VectorXd>(phi.data(), Eigen::Index(phi.size()));
  return detail::apply_screen(cand, rule);
}

/// Plain SLOPE strong rule over all variables.
inline std::vector<int> slope_screen(const VectorXd& grad_prev, const VectorXd& v,
                                     double lambda_k, double lambda_next,
                                     CumsumRule rule = CumsumRule::total) {
  require(lambda_k >= lambda_next && lambda_next >= 0,
          "slope_screen: need lambda_k >= lambda_next >= 0");
  SortedVector s = sort_desc_with_index(grad_prev, true);
  detail::ScreenCandidates cand;
  cand.order = s.order;
  cand.c = s.values + (lambda_k - lambda_next) * v;
  cand.phi = lambda_next * v;
  return detail::apply_screen(cand, rule);
}

/// Smallest lambda with an all-zero SLOPE solution: the dual norm of the
/// gradient at zero.
inline double slope_lambda_max(const VectorXd& grad0, const VectorXd& v) {
  return slope_dual_norm(grad0, v);
}

/// Smallest lambda with an all-zero group solution: the group dual norm of
/// the gradient at zero. Zero gradient gives 0.
inline double gslope_lambda_max(const VectorXd& grad0, const GroupStructure& G,
                                const VectorXd& w) {
  return gslope_dual_norm(grad0, w, G);
}

/// Sparse-group path start as printed: max over prefixes of
/// cumsum(|grad0| sorted desc) / cumsum((1-alpha) tau omega - alpha v),
/// where tau omega expands sqrt(p_g) w_{rank(g)} to the variables (group
/// ranks taken from the reduced gradient) and only prefixes with positive
/// denominator count. Throws config_error when no prefix qualifies: for
/// alpha near 1 the denominator (1-alpha) tau omega - alpha v can be
/// entirely nonpositive, which makes the formula degenerate; reduce alpha or
/// rescale the weights (the path driver uses sgs_lambda_max_exact instead).
inline double sgs_lambda_max(const VectorXd& grad0, const GroupStructure& G,
                             double alpha, const VectorXd& v, const VectorXd& w) {
  require(alpha >= 0 && alpha < 1, "sgs_lambda_max: alpha must be in [0,1)");
  if (grad0.cwiseAbs().maxCoeff() == 0) return 0.0;
  SortedVector gs = sort_desc_with_index(group_reduce(grad0, G, -0.5));
  std::vector<int> grank(std::size_t(G.n_groups()));
  for (int r = 0; r < int(gs.order.size()); ++r) grank[std::size_t(gs.order[std::size_t(r)])] = r;
  SortedVector s = sort_desc_with_index(grad0, true);
  double cnum = 0, cden = 0, best = -1;
  for (int i = 0; i < int(s.order.size()); ++i) {
    int g = G.group_of[std::size_t(s.order[std::size_t(i)])];
    double tau_omega =
        std::sqrt(G.penalty_size[std::size_t(g)]) * w[grank[std::size_t(g)]];
    cnum += s.values[i];
    cden += (1 - alpha) * tau_omega - alpha * v[i];
    if (cden > 0) best = std::max(best, cnum / cden);
  }
  if (best < 0)
    throw config_error(
        "sgs_lambda_max: (1-alpha)*tau*omega <= alpha*v on every prefix; "
        "the printed path-start formula is degenerate for this configuration "
        "(reduce alpha or rescale the weights)");
  return best;
}

/// Provable upper bound on the sparse-group path start: lambda large enough
/// that the gradient at zero fits inside one summand of the subdifferential
/// Minkowski sum. Valid for every alpha in [0,1]; sgs_lambda_max_exact seeds
/// its bisection bracket with it (and doubles if the certificate wants more
/// room, which the slope summand's rank-wise budget can).
inline double sgs_lambda_max_bound(const VectorXd& grad0, const GroupStructure& G,
                                   double alpha, const VectorXd& v,
                                   const VectorXd& w) {
  double best = std::numeric_limits<double>::infinity();
  if (alpha > 0) best = std::min(best, slope_dual_norm(grad0, v) / alpha);
  if (alpha < 1) best = std::min(best, gslope_dual_norm(grad0, w, G) / (1 - alpha));
  return best;
}

/// Smallest lambda whose zero-solution certificate is clean: the reduced
/// soft-thresholded gradient must lie in the group zero-subdifferential.
/// Found by bisection (the certificate is monotone in lambda). The
/// certificate spends the variable budget rank by rank, so its root sits at
/// or above the true entry point but well below the printed formula; the
/// path driver starts here so the first path point is certificate-clean.
inline double sgs_lambda_max_exact(const VectorXd& grad0, const GroupStructure& G,
                                   double alpha, const VectorXd& v,
                                   const VectorXd& w) {
  require(alpha > 0 && alpha < 1, "sgs_lambda_max_exact: alpha must be in (0,1)");
  if (grad0.cwiseAbs().maxCoeff() == 0) return 0.0;
  auto clean = [&](double lam) {
    VectorXd st = soft_threshold_ranked(grad0, lam * alpha * v);
    return slope_subdiff_zero_check(group_reduce(st, G, -0.5),
                                    lam * (1 - alpha) * w, 0.0);
  };
  double hi = sgs_lambda_max_bound(grad0, G, alpha, v, w);
  for (int i = 0; i < 200 && !clean(hi); ++i) hi *= 2;
  if (!clean(hi))
    throw numerical_error("sgs_lambda_max_exact: no clean lambda found");
  double lo = 0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (clean(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace sgslope
