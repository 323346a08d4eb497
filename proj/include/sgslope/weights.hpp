#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "sgslope/common.hpp"
#include "sgslope/distributions.hpp"
#include "sgslope/groups.hpp"
#include "sgslope/sorting.hpp"

namespace sgslope {

/// Penalty weight pair for sparse-group models: v is the variable-level
/// sequence (length p), w the group-level sequence (length m). Both are
/// nonincreasing and nonnegative.
struct SgsWeights {
  VectorXd v, w;
};

namespace detail {

// The displayed weight formulas pair group sizes with weight entries and sum
// variable weights over per-group position blocks, but the weight sequences
// are positional. We fix a deterministic convention: groups enter in size-
// descending order (ties by id); the j-th group in that order pairs with
// w_j, and its variable positions are the j-th contiguous block of v.
struct SizeOrder {
  std::vector<int> group;   // position j -> group id
  std::vector<int> offset;  // position j -> first v position of its block
};

inline SizeOrder size_desc_order(const GroupStructure& G) {
  SizeOrder s;
  s.group.resize(std::size_t(G.n_groups()));
  std::iota(s.group.begin(), s.group.end(), 0);
  std::stable_sort(s.group.begin(), s.group.end(), [&](int a, int b) {
    return G.penalty_size[std::size_t(a)] > G.penalty_size[std::size_t(b)];
  });
  s.offset.resize(s.group.size());
  int off = 0;
  for (std::size_t j = 0; j < s.group.size(); ++j) {
    s.offset[j] = off;
    off += G.size(s.group[j]);
  }
  return s;
}

inline void check_weight_sequence(const VectorXd& w, const char* what) {
  if (!is_nonincreasing(w))
    throw numerical_error(std::string(what) + ": computed weights not nonincreasing");
}

}  // namespace detail

/// Group weights from the chi mixture: w_i solves
/// (1/m) sum_j F_chi(p_j)(sqrt(p_j) x) = 1 - q_g i / m.
inline VectorXd gslope_mean_weights(const GroupStructure& G, double q_g) {
  require(q_g > 0 && q_g < 1, "gslope_mean_weights: q_g must be in (0,1)");
  const int m = G.n_groups();
  auto mix = [&](double x) {
    double s = 0;
    for (int g = 0; g < m; ++g) {
      double pj = G.penalty_size[std::size_t(g)];
      s += chi_cdf(std::sqrt(pj) * x, pj);
    }
    return s / m;
  };
  VectorXd w(m);
  for (int i = 1; i <= m; ++i)
    w[i - 1] = inverse_cdf_positive(mix, 1.0 - q_g * i / m);
  detail::check_weight_sequence(w, "gslope_mean_weights");
  return w;
}

/// Group weights w_i = max_j p_j^{-1/2} F_chi(p_j)^{-1}(1 - q_g i / m).
inline VectorXd gslope_max_weights(const GroupStructure& G, double q_g) {
  require(q_g > 0 && q_g < 1, "gslope_max_weights: q_g must be in (0,1)");
  const int m = G.n_groups();
  std::vector<double> sizes;
  for (int g = 0; g < m; ++g) sizes.push_back(G.penalty_size[std::size_t(g)]);
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  VectorXd w(m);
  for (int i = 1; i <= m; ++i) {
    double target = 1.0 - q_g * i / m, best = 0;
    for (double pj : sizes) {
      double quant = inverse_cdf_positive(
          [&](double x) { return chi_cdf(x, pj); }, target);
      best = std::max(best, quant / std::sqrt(pj));
    }
    w[i - 1] = best;
  }
  detail::check_weight_sequence(w, "gslope_max_weights");
  return w;
}

/// Which sequence supplies the group weights of the sgs_mean scheme. The
/// simulation practice is the chi mixture above; the folded-normal mixture
/// variants implement the printed mean group formula, whose divisor is p as
/// printed (folded_mean_p) or m for symmetry with the max scheme
/// (folded_mean_m).
enum class SgsGroupScheme { chi_mixture, folded_mean_p, folded_mean_m };

namespace detail {

inline VectorXd sgs_variable_mean(const GroupStructure& G, double alpha,
                                  double q_v, const VectorXd& w_pair) {
  const int m = G.n_groups(), p = G.n_vars();
  SizeOrder ord = size_desc_order(G);
  std::vector<double> shift(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    double pj = G.penalty_size[std::size_t(ord.group[std::size_t(j)])];
    double aj = std::floor(alpha * pj);
    shift[std::size_t(j)] = (1.0 - alpha) * aj * w_pair[j] / 3.0;
  }
  auto mix = [&](double x) {
    double s = 0;
    for (int j = 0; j < m; ++j) s += folded_normal_cdf(alpha * x + shift[std::size_t(j)]);
    return s / m;
  };
  VectorXd v(p);
  for (int i = 1; i <= p; ++i)
    v[i - 1] = inverse_cdf_positive(mix, 1.0 - q_v * i / (2.0 * p));
  check_weight_sequence(v, "sgs variable weights");
  return v;
}

inline std::vector<double> block_v_sums(const GroupStructure& G, const VectorXd& v) {
  SizeOrder ord = size_desc_order(G);
  std::vector<double> sums(ord.group.size());
  for (std::size_t j = 0; j < ord.group.size(); ++j) {
    double s = 0;
    for (int k = 0; k < G.size(ord.group[j]); ++k) s += v[ord.offset[j] + k];
    sums[j] = s;
  }
  return sums;
}

}  // namespace detail

/// Default sparse-group scheme: group weights first (chi mixture unless a
/// folded-normal variant is selected), then variable weights from the
/// folded-normal mixture with the group-driven shifts.
inline SgsWeights sgs_mean_weights(const GroupStructure& G, double alpha,
                                   double q_v, double q_g,
                                   SgsGroupScheme scheme = SgsGroupScheme::chi_mixture) {
  require(alpha > 0 && alpha < 1, "sgs_mean_weights: alpha must be in (0,1)");
  require(q_v > 0 && q_v < 1, "sgs_mean_weights: q_v must be in (0,1)");
  const int m = G.n_groups(), p = G.n_vars();
  SgsWeights out;
  VectorXd w_base = gslope_mean_weights(G, q_g);
  out.v = detail::sgs_variable_mean(G, alpha, q_v, w_base);
  if (scheme == SgsGroupScheme::chi_mixture) {
    out.w = w_base;
    return out;
  }
  detail::SizeOrder ord = detail::size_desc_order(G);
  std::vector<double> vsum = detail::block_v_sums(G, out.v);
  auto mix = [&](double x) {
    double s = 0;
    for (int j = 0; j < m; ++j) {
      double pj = G.penalty_size[std::size_t(ord.group[std::size_t(j)])];
      s += folded_normal_cdf((1.0 - alpha) * pj * x + alpha * vsum[std::size_t(j)]);
    }
    return s / m;
  };
  double div = scheme == SgsGroupScheme::folded_mean_p ? double(p) : double(m);
  out.w.resize(m);
  for (int i = 1; i <= m; ++i)
    out.w[i - 1] = inverse_cdf_positive(mix, 1.0 - q_g * i / div);
  detail::check_weight_sequence(out.w, "sgs_mean_weights");
  return out;
}

/// Max variant: v_i = max_j { (1/alpha) Fbar^{-1}(1 - q_v i/(2p))
///   - (1-alpha) a_j w_j / (3 alpha) }, then
/// w_i = max_j { (Fbar^{-1}(1 - q_g i/m) - alpha sum_{k in G_j} v_k)
///   / ((1-alpha) p_j) }, both clipped at zero. The w_j feeding v are the
/// gslope max weights (group weights are computed first, as in the mean
/// scheme).
inline SgsWeights sgs_max_weights(const GroupStructure& G, double alpha,
                                  double q_v, double q_g) {
  require(alpha > 0 && alpha < 1, "sgs_max_weights: alpha must be in (0,1)");
  require(q_v > 0 && q_v < 1, "sgs_max_weights: q_v must be in (0,1)");
  const int m = G.n_groups(), p = G.n_vars();
  VectorXd w_base = gslope_max_weights(G, q_g);
  detail::SizeOrder ord = detail::size_desc_order(G);
  double min_drop = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j) {
    double pj = G.penalty_size[std::size_t(ord.group[std::size_t(j)])];
    min_drop = std::min(min_drop, std::floor(alpha * pj) * w_base[j]);
  }
  auto folded_quantile = [&](double t) {
    return inverse_cdf_positive(folded_normal_cdf, t);
  };
  SgsWeights out;
  out.v.resize(p);
  for (int i = 1; i <= p; ++i) {
    double q = folded_quantile(1.0 - q_v * i / (2.0 * p));
    out.v[i - 1] = std::max(0.0, q / alpha - (1.0 - alpha) * min_drop / (3.0 * alpha));
  }
  detail::check_weight_sequence(out.v, "sgs_max_weights v");
  std::vector<double> vsum = detail::block_v_sums(G, out.v);
  out.w.resize(m);
  for (int i = 1; i <= m; ++i) {
    double q = folded_quantile(1.0 - q_g * i / m), best = 0;
    for (int j = 0; j < m; ++j) {
      double pj = G.penalty_size[std::size_t(ord.group[std::size_t(j)])];
      best = std::max(best, (q - alpha * vsum[std::size_t(j)]) / ((1.0 - alpha) * pj));
    }
    out.w[i - 1] = std::max(0.0, best);
  }
  detail::check_weight_sequence(out.w, "sgs_max_weights w");
  return out;
}

/// OSCAR-style linear sequences: v_i = s1 + s2 (p - i), w_g = s1 + s3 (m - g)
/// with s2 = s1/p and s3 = s1/m (1-based i, g).
inline SgsWeights oscar_weights(int p, int m, double sigma1) {
  require(p >= 1 && m >= 1, "oscar_weights: p and m must be positive");
  require(sigma1 > 0, "oscar_weights: sigma1 must be positive");
  SgsWeights out;
  out.v.resize(p);
  out.w.resize(m);
  const double s2 = sigma1 / p, s3 = sigma1 / m;
  for (int i = 1; i <= p; ++i) out.v[i - 1] = sigma1 + s2 * double(p - i);
  for (int g = 1; g <= m; ++g) out.w[g - 1] = sigma1 + s3 * double(m - g);
  return out;
}

/// Classical Benjamini-Hochberg sequence for plain SLOPE:
/// v_i = PhiInv(1 - q i / (2p)).
inline VectorXd slope_bh_weights(int p, double q) {
  require(p >= 1, "slope_bh_weights: p must be positive");
  require(q > 0 && q < 1, "slope_bh_weights: q must be in (0,1)");
  VectorXd v(p);
  for (int i = 1; i <= p; ++i) v[i - 1] = normal_quantile(1.0 - q * i / (2.0 * p));
  detail::check_weight_sequence(v, "slope_bh_weights");
  return v;
}

}  // namespace sgslope
