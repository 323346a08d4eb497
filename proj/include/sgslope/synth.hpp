#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sgslope/common.hpp"
#include "sgslope/groups.hpp"
#include "sgslope/rng.hpp"
#include "sgslope/solver.hpp"

namespace sgslope {

struct SynthConfig {
  int n = 400;
  int p = 500;
  double rho = 0.6;
  int size_min = 3;
  int size_max = 25;
  double active_group_fraction = 0.15;
  double active_var_fraction = 0.30;
  double signal_sd = std::sqrt(5.0);  // N(0,5) read as variance 5
  LossKind model = LossKind::linear;
  std::uint64_t seed = 42;
};

inline void validate_synth_config(const SynthConfig& c) {
  require(c.n >= 1 && c.p >= 1, "SynthConfig: n and p must be positive");
  require(c.rho >= 0 && c.rho < 1, "SynthConfig: rho must be in [0,1)");
  require(c.size_min >= 1 && c.size_max >= c.size_min,
          "SynthConfig: invalid group size range");
  require(c.p >= c.size_min, "SynthConfig: p below the minimum group size");
  require(c.active_group_fraction >= 0 && c.active_group_fraction <= 1,
          "SynthConfig: active_group_fraction must be in [0,1]");
  require(c.active_var_fraction >= 0 && c.active_var_fraction <= 1,
          "SynthConfig: active_var_fraction must be in [0,1]");
}

struct SynthData {
  Dataset data;  // raw X and y; standardization is a separate step
  GroupStructure groups;
  VectorXd beta_true;
};

namespace detail {

// First k entries of a uniformly shuffled copy of `ids` (partial
// Fisher-Yates), returned sorted.
inline std::vector<int> sample_without_replacement(std::vector<int> ids, int k,
                                                   CounterRng& rng) {
  for (int i = 0; i < k; ++i) {
    int j = rng.uniform_int(i, int(ids.size()) - 1);
    std::swap(ids[std::size_t(i)], ids[std::size_t(j)]);
  }
  ids.resize(std::size_t(k));
  std::sort(ids.begin(), ids.end());
  return ids;
}

inline int round_at_least_one(double x) { return std::max(1, int(std::lround(x))); }

}  // namespace detail

/// Draws a grouped Gaussian design with equicorrelated columns inside each
/// group (factor construction, unit marginal variance), a group-sparse
/// signal, and the response. Every random draw consumes the counter-based
/// stream in a fixed order, so a seed pins the output bit for bit.
inline SynthData generate(const SynthConfig& cfg) {
  validate_synth_config(cfg);
  CounterRng rng(cfg.seed);

  // Group sizes uniform in [size_min, size_max] until p is covered; the last
  // group is truncated to fit exactly.
  std::vector<int> sizes;
  int total = 0;
  while (total < cfg.p) {
    int s = rng.uniform_int(cfg.size_min, cfg.size_max);
    s = std::min(s, cfg.p - total);
    sizes.push_back(s);
    total += s;
  }
  std::vector<int> assignment(std::size_t(cfg.p));
  {
    int var = 0;
    for (int g = 0; g < int(sizes.size()); ++g)
      for (int i = 0; i < sizes[std::size_t(g)]; ++i) assignment[std::size_t(var++)] = g;
  }
  GroupStructure G = make_groups(assignment);
  const int m = G.n_groups();

  MatrixXd X(cfg.n, cfg.p);
  double a = std::sqrt(cfg.rho), b = std::sqrt(1 - cfg.rho);
  int col = 0;
  for (int g = 0; g < m; ++g) {
    VectorXd z(cfg.n);
    for (int i = 0; i < cfg.n; ++i) z[i] = rng.normal();
    for (int jj = 0; jj < G.size(g); ++jj, ++col)
      for (int i = 0; i < cfg.n; ++i) X(i, col) = a * z[i] + b * rng.normal();
  }

  int n_active_groups = detail::round_at_least_one(cfg.active_group_fraction * m);
  std::vector<int> all_groups(static_cast<std::size_t>(m));
  for (int g = 0; g < m; ++g) all_groups[std::size_t(g)] = g;
  std::vector<int> active_g =
      detail::sample_without_replacement(all_groups, n_active_groups, rng);

  VectorXd beta = VectorXd::Zero(cfg.p);
  for (int g : active_g) {
    const std::vector<int>& members = G.members[std::size_t(g)];
    int n_active = detail::round_at_least_one(cfg.active_var_fraction *
                                              double(members.size()));
    std::vector<int> chosen =
        detail::sample_without_replacement(members, n_active, rng);
    for (int j : chosen) beta[j] = cfg.signal_sd * rng.normal();
  }

  VectorXd eta = X * beta;
  VectorXd y(cfg.n);
  if (cfg.model == LossKind::linear) {
    for (int i = 0; i < cfg.n; ++i) y[i] = eta[i] + rng.normal();
  } else {
    for (int i = 0; i < cfg.n; ++i) {
      double prob = detail::sigmoid(eta[i] + rng.normal());
      y[i] = rng.uniform() < prob ? 1.0 : 0.0;
    }
  }

  SynthData out;
  out.data.X = std::move(X);
  out.data.y = std::move(y);
  out.data.loss = cfg.model;
  out.data.col_center = VectorXd::Zero(cfg.p);
  out.data.col_scale = VectorXd::Ones(cfg.p);
  out.groups = std::move(G);
  out.beta_true = std::move(beta);
  return out;
}

}  // namespace sgslope
