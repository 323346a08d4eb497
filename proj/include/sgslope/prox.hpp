#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "sgslope/common.hpp"
#include "sgslope/groups.hpp"
#include "sgslope/penalty.hpp"
#include "sgslope/sorting.hpp"

namespace sgslope {
namespace detail {

/**
 * Kernel shared by the sorted-L1 proxes:
 *
 *   minimize  sum_g q_g/2 (z_g - u_g)^2 + sum_i tw_i z_(i)   over z >= 0,
 *
 * with u >= 0, q > 0, tw nonincreasing >= 0, and z_(i) the i-th largest
 * entry. For equal q this is the classical sorted-L1 prox and a single
 * weighted PAVA pass over the u-descending order is exact. For unequal q
 * (group prox with unequal group sizes) the optimal assignment of tw to
 * coordinates need not follow the order of u, so the kernel searches over
 * orders: each candidate order fixes the pairing and the cone
 * z_{o_1} >= ... >= z_{o_m} >= 0, on which the problem is a weighted
 * isotonic regression solved exactly by PAVA. A stationary order whose
 * solution is strictly decreasing certifies the global optimum (the
 * subdifferential of the penalty is then a singleton); ties are handled by
 * extra candidate orders, and for m <= 6 all orders are enumerated.
 */

// Weighted PAVA for a fixed order. Position i carries linear cost tw[i];
// block values are (sum q u - sum tw) / sum q, clipped at zero on emit.
inline void fixed_order_pava(const VectorXd& u, const VectorXd& q,
                             const VectorXd& tw, const std::vector<int>& order,
                             VectorXd& z) {
  const int m = int(u.size());
  std::vector<int> start;
  std::vector<double> sq, sa;
  start.reserve(std::size_t(m));
  sq.reserve(std::size_t(m));
  sa.reserve(std::size_t(m));
  for (int pos = 0; pos < m; ++pos) {
    int g = order[std::size_t(pos)];
    start.push_back(pos);
    sq.push_back(q[g]);
    sa.push_back(q[g] * u[g] - tw[pos]);
    while (start.size() >= 2) {
      std::size_t t = start.size() - 1;
      if (sa[t - 1] * sq[t] >= sa[t] * sq[t - 1]) break;  // order respected
      sa[t - 1] += sa[t];
      sq[t - 1] += sq[t];
      start.pop_back();
      sq.pop_back();
      sa.pop_back();
    }
  }
  z.resize(m);
  for (std::size_t b = 0; b < start.size(); ++b) {
    int end = b + 1 < start.size() ? start[b + 1] : m;
    double val = std::max(0.0, sa[b] / sq[b]);
    for (int pos = start[b]; pos < end; ++pos) z[order[std::size_t(pos)]] = val;
  }
}

// True objective (penalty pairs tw with z sorted descending).
inline double wsp_objective(const VectorXd& u, const VectorXd& q,
                            const VectorXd& tw, const VectorXd& z) {
  double f = 0;
  for (int g = 0; g < u.size(); ++g) f += 0.5 * q[g] * (z[g] - u[g]) * (z[g] - u[g]);
  VectorXd zs = z;
  std::sort(zs.data(), zs.data() + zs.size(), std::greater<double>());
  f += zs.dot(tw);
  return f;
}

inline VectorXd weighted_sorted_prox(const VectorXd& u, const VectorXd& q,
                                     const VectorXd& tw) {
  const int m = int(u.size());
  require(q.size() == m && tw.size() == m, "weighted_sorted_prox: size mismatch");
  require(is_nonincreasing(tw), "weighted_sorted_prox: tw must be nonincreasing");
  if (m == 0) return VectorXd();

  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return u[a] > u[b]; });

  VectorXd z(m);
  if (q.maxCoeff() == q.minCoeff()) {
    fixed_order_pava(u, q, tw, order, z);
    return z;
  }

  VectorXd best_z(m), trial(m);
  double best_f = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<int>& ord) {
    fixed_order_pava(u, q, tw, ord, trial);
    double f = wsp_objective(u, q, tw, trial);
    if (f < best_f) {
      best_f = f;
      best_z = trial;
    }
  };

  if (m <= 6) {
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      consider(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best_z;
  }

  // Cone descent: solve on the cone of the current order, re-sort by the
  // solution, repeat. The objective never increases across reorders, so this
  // terminates; a strict-order fixed point is globally optimal.
  auto descend = [&](std::vector<int> ord) {
    VectorXd zc(m);
    for (int it = 0; it < 40; ++it) {
      fixed_order_pava(u, q, tw, ord, zc);
      std::vector<int> next = ord;
      std::stable_sort(next.begin(), next.end(),
                       [&](int a, int b) { return zc[a] > zc[b]; });
      double f = wsp_objective(u, q, tw, zc);
      if (f < best_f) {
        best_f = f;
        best_z = zc;
      }
      if (next == ord) break;
      ord = std::move(next);
    }
    return ord;
  };

  std::vector<int> stable = descend(order);

  // Tied blocks of the stable solution leave the tw assignment ambiguous;
  // re-sort inside each tied block by the per-coordinate drop u_g - tw/q_g
  // (mean block threshold) and descend again.
  {
    VectorXd zc(m);
    fixed_order_pava(u, q, tw, stable, zc);
    std::vector<int> repaired = stable;
    int pos = 0;
    bool changed = false;
    while (pos < m) {
      int end = pos + 1;
      while (end < m && zc[stable[std::size_t(end)]] == zc[stable[std::size_t(pos)]]) ++end;
      if (end - pos > 1) {
        double twm = 0;
        for (int i = pos; i < end; ++i) twm += tw[i];
        twm /= double(end - pos);
        std::stable_sort(repaired.begin() + pos, repaired.begin() + end,
                         [&](int a, int b) {
                           return u[a] - twm / q[a] > u[b] - twm / q[b];
                         });
        changed = true;
      }
      pos = end;
    }
    if (changed) descend(repaired);
  }

  // Independent start from the matched-drop order.
  {
    std::vector<int> drop = order;
    VectorXd tent(m);
    for (int posn = 0; posn < m; ++posn) {
      int g = order[std::size_t(posn)];
      tent[g] = u[g] - tw[posn] / q[g];
    }
    std::stable_sort(drop.begin(), drop.end(),
                     [&](int a, int b) { return tent[a] > tent[b]; });
    descend(drop);
  }

  return best_z;
}

}  // namespace detail

/// Prox of t |.|_slope with per-rank thresholds tv (nonincreasing):
/// argmin 1/2 ||b - y||^2 + sum_i tv_i |b|_(i).
inline VectorXd slope_prox(const VectorXd& y, const VectorXd& tv) {
  require(y.size() == tv.size(), "slope_prox: size mismatch");
  VectorXd u = y.cwiseAbs();
  VectorXd z = detail::weighted_sorted_prox(u, VectorXd::Ones(y.size()), tv);
  VectorXd out(y.size());
  for (int i = 0; i < y.size(); ++i) out[i] = y[i] >= 0 ? z[i] : -z[i];
  return out;
}

/// Prox of the group sorted-L1 norm with per-rank thresholds tw:
/// argmin 1/2 ||b - y||^2 + sum_i tw_i s_(i), s_g = sqrt(p_g) ||b^(g)||_2.
/// Reduces to the weighted kernel on u_g = sqrt(p_g) ||y^(g)||_2 with
/// quadratic weights 1/p_g; each group is rescaled radially. Zero groups
/// stay zero.
inline VectorXd gslope_prox(const VectorXd& y, const VectorXd& tw,
                            const GroupStructure& G) {
  require(int(y.size()) == G.n_vars(), "gslope_prox: size mismatch");
  require(int(tw.size()) == G.n_groups(), "gslope_prox: weight length mismatch");
  const int m = G.n_groups();
  VectorXd u(m), q(m);
  for (int g = 0; g < m; ++g) {
    double ps = G.penalty_size[std::size_t(g)];
    double ss = 0;
    for (int j : G.members[std::size_t(g)]) ss += y[j] * y[j];
    u[g] = std::sqrt(ps) * std::sqrt(ss);
    q[g] = 1.0 / ps;
  }
  VectorXd z = detail::weighted_sorted_prox(u, q, tw);
  VectorXd out = VectorXd::Zero(y.size());
  for (int g = 0; g < m; ++g) {
    if (u[g] == 0 || z[g] == 0) continue;
    if (G.size(g) == 1 && G.penalty_size[std::size_t(g)] == 1.0) {
      // keep true singleton groups bit-identical to slope_prox
      int j = G.members[std::size_t(g)][0];
      out[j] = y[j] >= 0 ? z[g] : -z[g];
      continue;
    }
    double scale = z[g] / u[g];
    for (int j : G.members[std::size_t(g)]) out[j] = y[j] * scale;
  }
  return out;
}

}  // namespace sgslope
