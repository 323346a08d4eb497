#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "sgslope/common.hpp"
#include "sgslope/groups.hpp"
#include "sgslope/penalty.hpp"
#include "sgslope/screening.hpp"
#include "sgslope/sorting.hpp"

namespace sgslope {

/// Result of a KKT safety check on a candidate solution. Empty sets mean the
/// optimality conditions hold (within tolerance) outside the fitted set;
/// max_slack is the largest positive cumulative excess any stage observed,
/// so the sets are empty exactly when max_slack stays at or below the check
/// tolerance.
struct KktReport {
  std::vector<int> violating_groups;
  std::vector<int> violating_variables;
  double max_slack = 0;

  bool ok() const {
    return violating_groups.empty() && violating_variables.empty();
  }
};

inline std::vector<int> active_variables(const VectorXd& beta,
                                         double threshold = 1e-6) {
  std::vector<int> out;
  for (int j = 0; j < beta.size(); ++j)
    if (std::abs(beta[j]) > threshold) out.push_back(j);
  return out;
}

inline std::vector<int> active_groups(const VectorXd& beta,
                                      const GroupStructure& G,
                                      double threshold = 1e-6) {
  std::vector<int> out;
  for (int g = 0; g < G.n_groups(); ++g) {
    bool active = false;
    for (int j : G.members[std::size_t(g)])
      if (std::abs(beta[j]) > threshold) {
        active = true;
        break;
      }
    if (active) out.push_back(g);
  }
  return out;
}

namespace detail {

// Sorts the statistics of the tested entities and runs the buffered
// cumulative-sum violation test against the weight tail that remains once
// the `skip` active entities have consumed the leading rank positions. The
// subdifferential assigns weights by solution rank, not by statistic rank,
// so the discarded entities only ever hold this tail; pairing them with
// weights at their positions in a full sort instead would hand them active
// ranks whenever an active entity's statistic sorts below an inactive
// one's, and such a check misses real violations. Returns flagged ids.
inline std::vector<int> tail_violations(const VectorXd& stats,
                                        const std::vector<int>& tested,
                                        const VectorXd& weights, int skip,
                                        double lambda, double tol,
                                        double* excess = nullptr) {
  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(tested.size());
  for (int id : tested) ranked.emplace_back(stats[id], id);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  VectorXd c(Eigen::Index(ranked.size())), phi(Eigen::Index(ranked.size()));
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    c[Eigen::Index(i)] = ranked[i].first;
    phi[Eigen::Index(i)] = lambda * weights[skip + int(i)];
  }
  std::vector<int> pos = cumsum_screen(c, phi, CumsumRule::total, tol, excess);
  std::vector<int> ids;
  ids.reserve(pos.size());
  for (int i : pos) ids.push_back(ranked[std::size_t(i)].second);
  std::sort(ids.begin(), ids.end());
  return ids;
}

// |gradient| over the zero variables, sorted nonincreasing with variable ids
// in `order`. Position i of this sort owns the budget v[s + i] (s = number
// of active variables): the active variables hold v[0..s-1] through their
// coefficient ranks regardless of how large their gradients are.
inline SortedVector zero_block_sort(const VectorXd& grad,
                                    const std::vector<char>& is_zero) {
  std::vector<std::pair<double, int>> z;
  for (int j = 0; j < grad.size(); ++j)
    if (is_zero[std::size_t(j)]) z.emplace_back(std::abs(grad[j]), j);
  std::stable_sort(z.begin(), z.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  SortedVector s;
  s.values.resize(Eigen::Index(z.size()));
  s.order.reserve(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    s.values[Eigen::Index(i)] = z[i].first;
    s.order.push_back(z[i].second);
  }
  return s;
}

// Runs the buffered cumulative-sum violation test on the subsequence of
// sorted positions selected by `keep`, pairing each kept statistic with the
// weight at its rank position in the given sort. Returns entity ids.
inline std::vector<int> subset_violations(const SortedVector& s,
                                          const std::vector<char>& keep,
                                          const VectorXd& weights, double lambda,
                                          double tol, double* excess = nullptr) {
  std::vector<int> order;
  std::vector<double> c, phi;
  for (int i = 0; i < int(s.order.size()); ++i) {
    int id = s.order[std::size_t(i)];
    if (!keep[std::size_t(id)]) continue;
    order.push_back(id);
    c.push_back(s.values[i]);
    phi.push_back(lambda * weights[i]);
  }
  VectorXd cv = Eigen::Map<VectorXd>(c.data(), Eigen::Index(c.size()));
  VectorXd pv = Eigen::Map<VectorXd>(phi.data(), Eigen::Index(phi.size()));
  std::vector<int> pos = cumsum_screen(cv, pv, CumsumRule::total, tol, excess);
  std::vector<int> ids;
  ids.reserve(pos.size());
  for (int i : pos) ids.push_back(order[std::size_t(i)]);
  std::sort(ids.begin(), ids.end());
  return ids;
}

inline void fold_slack(KktReport& report, double excess) {
  report.max_slack = std::max(report.max_slack, excess);
}

}  // namespace detail

/// KKT check for the group sorted-L1 problem: verifies that the reduced
/// gradient over the inactive groups stays inside the zero-subdifferential
/// cone spanned by the tail group weights (the active groups consume the
/// leading weights through their solution ranks). Flagged groups must join
/// the fitted set.
inline KktReport gslope_kkt_check(const VectorXd& grad, const VectorXd& beta,
                                  const GroupStructure& G, const VectorXd& w,
                                  double lambda, double tol = 1e-4,
                                  double active_threshold = 1e-6) {
  std::vector<int> act = active_groups(beta, G, active_threshold);
  std::vector<char> is_act(std::size_t(G.n_groups()), 0);
  for (int g : act) is_act[std::size_t(g)] = 1;
  std::vector<int> inactive;
  for (int g = 0; g < G.n_groups(); ++g)
    if (!is_act[std::size_t(g)]) inactive.push_back(g);
  VectorXd rg = group_reduce(grad, G, -0.5);
  KktReport report;
  double excess = 0;
  report.violating_groups = detail::tail_violations(
      rg, inactive, w, int(act.size()), lambda, tol, &excess);
  detail::fold_slack(report, excess);
  report.violating_variables = variables_of(G, report.violating_groups);
  return report;
}

/// Two-stage KKT check for the sparse-group problem. Stage one tests the
/// inactive groups against the tail group weights, on the reduced gradient
/// left after the zero variables spend their tail share of the variable
/// budget (the i-th largest zero-variable gradient may absorb at most
/// lambda*alpha*v[s+i]). Stage two tests the zero variables inside the
/// active and newly flagged groups against that same tail assignment.
inline KktReport sgs_kkt_check(const VectorXd& grad, const VectorXd& beta,
                               const GroupStructure& G, double alpha,
                               const VectorXd& v, const VectorXd& w,
                               double lambda, double tol = 1e-4,
                               double active_threshold = 1e-6) {
  require(alpha > 0 && alpha < 1, "sgs_kkt_check: alpha must be in (0,1)");
  KktReport report;

  std::vector<int> act_v = active_variables(beta, active_threshold);
  std::vector<int> act_g = active_groups(beta, G, active_threshold);
  const int s = int(act_v.size()), t = int(act_g.size());
  std::vector<char> is_zero(std::size_t(G.n_vars()), 1);
  for (int j : act_v) is_zero[std::size_t(j)] = 0;
  SortedVector zs = detail::zero_block_sort(grad, is_zero);

  // Reduced leftovers once each zero variable absorbs its tail v budget.
  VectorXd st = VectorXd::Zero(G.n_vars());
  for (int i = 0; i < int(zs.order.size()); ++i) {
    double cap = lambda * alpha * v[s + i];
    st[zs.order[std::size_t(i)]] = std::max(zs.values[i] - cap, 0.0);
  }
  std::vector<int> inactive_g;
  for (int g = 0; g < G.n_groups(); ++g) {
    bool active = std::find(act_g.begin(), act_g.end(), g) != act_g.end();
    if (!active) inactive_g.push_back(g);
  }
  VectorXd rg = group_reduce(st, G, -0.5);
  double excess = 0;
  report.violating_groups = detail::tail_violations(
      rg, inactive_g, (1 - alpha) * w, t, lambda, tol, &excess);
  detail::fold_slack(report, excess);

  // Zero variables of the groups that are (or must become) active, tested
  // against the tail v at their rank inside the zero-block sort.
  std::vector<char> test_v(std::size_t(G.n_vars()), 0);
  auto mark_zeros = [&](int g) {
    for (int j : G.members[std::size_t(g)])
      if (std::abs(beta[j]) <= active_threshold) test_v[std::size_t(j)] = 1;
  };
  for (int g : act_g) mark_zeros(g);
  for (int g : report.violating_groups) mark_zeros(g);
  VectorXd v_tail = v.tail(v.size() - s);
  std::vector<int> flagged = detail::subset_violations(
      zs, test_v, v_tail, lambda * alpha, tol, &excess);
  detail::fold_slack(report, excess);

  std::vector<int> vars = variables_of(G, report.violating_groups);
  vars.insert(vars.end(), flagged.begin(), flagged.end());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  report.violating_variables = std::move(vars);
  return report;
}

/// KKT check for plain SLOPE: zero variables tested against the tail of the
/// variable weights (the active variables hold the leading ranks).
inline KktReport slope_kkt_check(const VectorXd& grad, const VectorXd& beta,
                                 const VectorXd& v, double lambda,
                                 double tol = 1e-4,
                                 double active_threshold = 1e-6) {
  std::vector<int> zero;
  for (int j = 0; j < beta.size(); ++j)
    if (std::abs(beta[j]) <= active_threshold) zero.push_back(j);
  const int s = int(beta.size()) - int(zero.size());
  KktReport report;
  double excess = 0;
  report.violating_variables = detail::tail_violations(
      grad.cwiseAbs(), zero, v, s, lambda, tol, &excess);
  detail::fold_slack(report, excess);
  return report;
}

}  // namespace sgslope
