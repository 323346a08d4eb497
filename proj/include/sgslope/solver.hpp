#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

#include "sgslope/common.hpp"
#include "sgslope/groups.hpp"
#include "sgslope/penalty.hpp"
#include "sgslope/prox.hpp"
#include "sgslope/sorting.hpp"

namespace sgslope {

using MatrixXd = Eigen::MatrixXd;

enum class LossKind { linear, logistic };

/// Prepared problem data. For the linear model with an intercept the columns
/// and response are mean-centered (the intercept is profiled out), then
/// standardization scales every non-constant column to unit l2 norm.
/// Centers and scales are kept so solutions can be mapped back to the
/// original coordinates.
struct Dataset {
  MatrixXd X;
  VectorXd y;
  LossKind loss = LossKind::linear;
  bool standardized = false;
  bool intercept = false;
  double y_mean = 0;
  VectorXd col_center;
  VectorXd col_scale;
  std::vector<int> constant_columns;

  int n() const { return int(X.rows()); }
  int p() const { return int(X.cols()); }
};

inline Dataset make_dataset(const MatrixXd& X, const VectorXd& y, LossKind loss,
                            bool standardize = true, bool intercept = false) {
  require(X.rows() == y.size(), "make_dataset: X rows and y length differ");
  require(!(intercept && loss == LossKind::logistic),
          "make_dataset: intercept is only supported for the linear model");
  if (loss == LossKind::logistic)
    for (int i = 0; i < y.size(); ++i)
      require(y[i] == 0.0 || y[i] == 1.0, "make_dataset: logistic y must be 0/1");

  Dataset d;
  d.X = X;
  d.y = y;
  d.loss = loss;
  d.standardized = standardize;
  d.intercept = intercept;
  d.col_center = VectorXd::Zero(X.cols());
  d.col_scale = VectorXd::Ones(X.cols());
  if (intercept) {
    d.col_center = X.colwise().mean();
    d.X.rowwise() -= d.col_center.transpose();
    d.y_mean = y.mean();
    d.y.array() -= d.y_mean;
  }
  if (standardize) {
    for (int j = 0; j < d.X.cols(); ++j) {
      double norm = d.X.col(j).norm();
      if (norm <= 1e-12) {
        d.constant_columns.push_back(j);
      } else {
        d.col_scale[j] = norm;
        d.X.col(j) /= norm;
      }
    }
  }
  return d;
}

namespace detail {

inline double sigmoid(double eta) {
  return eta >= 0 ? 1.0 / (1.0 + std::exp(-eta))
                  : std::exp(eta) / (1.0 + std::exp(eta));
}

inline double log1pexp(double eta) {
  return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

}  // namespace detail

/// Loss value and gradient at beta. Linear: f = l2 squared residual / 2
/// (unnormalized, so the path-start formulas apply verbatim to the gradient
/// at zero); logistic: negative Bernoulli log-likelihood.
inline double loss_and_grad(const Dataset& d, const VectorXd& beta,
                            VectorXd& grad) {
  require(beta.size() == d.X.cols(), "loss_and_grad: beta length mismatch");
  double f = 0;
  if (d.loss == LossKind::linear) {
    VectorXd r = d.X * beta - d.y;
    f = 0.5 * r.squaredNorm();
    grad = d.X.transpose() * r;
  } else {
    VectorXd eta = d.X * beta;
    VectorXd prob(eta.size());
    for (int i = 0; i < eta.size(); ++i) {
      f += detail::log1pexp(eta[i]) - d.y[i] * eta[i];
      prob[i] = detail::sigmoid(eta[i]);
    }
    grad = d.X.transpose() * (prob - d.y);
  }
  if (!std::isfinite(f) || !grad.allFinite())
    throw numerical_error("loss_and_grad: non-finite value");
  return f;
}

inline VectorXd gradient_at_zero(const Dataset& d) {
  VectorXd grad;
  loss_and_grad(d, VectorXd::Zero(d.X.cols()), grad);
  return grad;
}

/// Lipschitz estimate for the gradient: the top eigenvalue of X'X by ten
/// power iterations (quartered for the logistic curvature bound).
inline double estimate_lipschitz(const Dataset& d) {
  if (d.p() == 0) return 1.0;
  VectorXd v = VectorXd::Ones(d.p()).normalized();
  double ev = 1.0;
  for (int it = 0; it < 10; ++it) {
    VectorXd w = d.X.transpose() * (d.X * v);
    ev = w.norm();
    if (ev <= 1e-300) return 1.0;
    v = w / ev;
  }
  if (d.loss == LossKind::logistic) ev *= 0.25;
  return ev > 0 ? ev : 1.0;
}

struct SolverConfig {
  int max_iter = 5000;
  double backtrack_factor = 0.7;
  int max_backtrack = 100;
  double tol = 1e-5;
  double initial_step = 0;  // 0 means 1 / estimate_lipschitz
  int divergence_run = 50;
};

inline void validate_solver_config(const SolverConfig& c) {
  require(c.backtrack_factor > 0 && c.backtrack_factor < 1,
          "SolverConfig: backtrack_factor must be in (0,1)");
  require(c.tol > 0, "SolverConfig: tol must be positive");
  require(c.max_iter >= 1, "SolverConfig: max_iter must be >= 1");
}

struct FitResult {
  VectorXd beta;
  int iterations = 0;
  bool converged = false;
  double objective = 0;
  // Diagnostics for the accepted-step monotonicity property.
  int objective_increases = 0;
  double max_objective_jump = 0;
};

/// Three-operator-splitting fit of loss + lambda * penalty. The two
/// resolvents are the group prox (applied to the splitting state z) and the
/// variable prox (applied to the reflected gradient step); the step size
/// backtracks on the quadratic upper bound with the group-prox point fixed.
/// Pure SLOPE and pure group modes degenerate to proximal gradient because
/// the unused resolvent is the identity. Convergence is declared when the l2
/// distance between the two prox points falls below tol.
inline FitResult fit(const Dataset& d, const PenaltySpec& P,
                     const GroupStructure& G, double lambda,
                     const VectorXd& init, const SolverConfig& cfg = {}) {
  require(lambda >= 0, "fit: lambda must be nonnegative");
  validate_solver_config(cfg);
  const int p = d.p();
  if (p > 0) {
    require(G.n_vars() == p, "fit: group structure does not cover the data");
    validate_penalty(P, G);
  }
  FitResult res;
  if (p == 0) {
    res.converged = true;
    VectorXd g;
    res.objective = loss_and_grad(d, VectorXd(), g);
    return res;
  }
  require(init.size() == 0 || init.size() == p, "fit: init length mismatch");
  const double alpha = P.effective_alpha();
  const bool has_group_prox = P.kind != PenaltyKind::slope && alpha < 1;
  const bool has_var_prox = P.kind != PenaltyKind::gslope && alpha > 0;

  auto prox_group = [&](const VectorXd& u, double gamma) {
    if (!has_group_prox || lambda == 0) return u;
    return gslope_prox(u, gamma * lambda * (1 - alpha) * P.w, G);
  };
  auto prox_var = [&](const VectorXd& u, double gamma) {
    if (!has_var_prox || lambda == 0) return u;
    return slope_prox(u, gamma * lambda * alpha * P.v);
  };
  auto objective_at = [&](const VectorXd& beta, VectorXd& grad) {
    return loss_and_grad(d, beta, grad) + lambda * penalty_value(beta, P, G);
  };

  double gamma = cfg.initial_step > 0 ? cfg.initial_step
                                      : 1.0 / estimate_lipschitz(d);
  VectorXd z;
  if (init.size() == p && init.allFinite()) {
    // Warm-start state chosen so that an exact solution is a fixed point of
    // the first iteration. Single-prox modes: the prox-gradient state. Both
    // proxes: init plus the group part of the subgradient split, radial on
    // active groups and the soft-threshold remainder on zero groups.
    if (!has_group_prox) {
      z = init;
    } else if (!has_var_prox) {
      VectorXd g0;
      loss_and_grad(d, init, g0);
      z = init - gamma * g0;
    } else {
      VectorXd g0;
      loss_and_grad(d, init, g0);
      z = init;
      VectorXd st = soft_threshold_ranked(g0, lambda * alpha * P.v);
      SortedVector rs = sort_desc_with_index(group_reduce(init, G, 0.5));
      std::vector<int> rank(std::size_t(G.n_groups()));
      for (int r = 0; r < G.n_groups(); ++r)
        rank[std::size_t(rs.order[std::size_t(r)])] = r;
      for (int g = 0; g < G.n_groups(); ++g) {
        double nrm = 0;
        for (int j : G.members[std::size_t(g)]) nrm += init[j] * init[j];
        nrm = std::sqrt(nrm);
        if (nrm > 0) {
          double coef = gamma * lambda * (1 - alpha) *
                        std::sqrt(G.penalty_size[std::size_t(g)]) *
                        P.w[rank[std::size_t(g)]];
          for (int j : G.members[std::size_t(g)]) z[j] += coef * (init[j] / nrm);
        } else {
          for (int j : G.members[std::size_t(g)]) z[j] -= gamma * st[j];
        }
      }
    }
  } else {
    z = VectorXd::Zero(p);
  }

  VectorXd grad(p), scratch(p);
  double best_obj = std::numeric_limits<double>::infinity();
  VectorXd best_beta = VectorXd::Zero(p);
  double prev_obj = std::numeric_limits<double>::infinity();
  int increase_run = 0;

  for (int it = 1; it <= cfg.max_iter; ++it) {
    res.iterations = it;
    VectorXd x_g = prox_group(z, gamma);
    double f_g = loss_and_grad(d, x_g, grad);
    VectorXd x_v;
    for (int bt = 0; bt <= cfg.max_backtrack; ++bt) {
      x_v = prox_var(2 * x_g - z - gamma * grad, gamma);
      VectorXd diff = x_v - x_g;
      double f_v = loss_and_grad(d, x_v, scratch);
      if (f_v <= f_g + grad.dot(diff) + diff.squaredNorm() / (2 * gamma) + 1e-12)
        break;
      if (bt == cfg.max_backtrack)
        throw numerical_error("fit: backtracking failed to find a valid step");
      gamma *= cfg.backtrack_factor;
    }
    z += x_v - x_g;
    double residual = (x_v - x_g).norm();

    const VectorXd& beta_now = has_var_prox ? x_v : x_g;
    double obj = objective_at(beta_now, scratch);
    if (obj < best_obj) {
      best_obj = obj;
      best_beta = beta_now;
    }
    // Rises inside the line-search slack plus evaluation rounding are not
    // excursions; only count beyond that.
    if (obj > prev_obj + 1e-12 * (1.0 + std::abs(prev_obj))) {
      ++increase_run;
      res.objective_increases += 1;
      res.max_objective_jump = std::max(res.max_objective_jump, obj - prev_obj);
      if (increase_run >= cfg.divergence_run)
        throw numerical_error("fit: objective increased on " +
                              std::to_string(cfg.divergence_run) +
                              " consecutive steps");
    } else {
      increase_run = 0;
    }
    prev_obj = obj;

    if (residual <= cfg.tol) {
      res.beta = beta_now;
      res.objective = obj;
      res.converged = true;
      return res;
    }
  }
  res.beta = best_beta;
  res.objective = best_obj;
  res.converged = false;
  return res;
}

/// Solves the subproblem on the columns in E (ascending, duplicate-free) and
/// embeds the solution back with exact zeros elsewhere. The restricted
/// penalty keeps the largest weights: the first |E| entries of v and the
/// first |groups(E)| entries of w, while partial groups keep their original
/// size in the group penalty scaling.
inline FitResult fit_restricted(const Dataset& d, const PenaltySpec& P,
                                const GroupStructure& G, double lambda,
                                const std::vector<int>& E, const VectorXd& init,
                                const SolverConfig& cfg = {}) {
  const int p = d.p();
  if (E.empty()) {
    FitResult res;
    res.beta = VectorXd::Zero(p);
    VectorXd g;
    res.objective = loss_and_grad(d, res.beta, g);
    res.converged = true;
    return res;
  }
  if (int(E.size()) == p) return fit(d, P, G, lambda, init, cfg);

  Dataset sub;
  sub.X.resize(d.X.rows(), Eigen::Index(E.size()));
  for (std::size_t i = 0; i < E.size(); ++i)
    sub.X.col(Eigen::Index(i)) = d.X.col(E[i]);
  sub.y = d.y;
  sub.loss = d.loss;
  sub.standardized = d.standardized;
  sub.intercept = d.intercept;

  GroupStructure Gsub = restrict_groups(G, E);
  PenaltySpec Psub = P;
  if (P.kind != PenaltyKind::gslope) Psub.v = P.v.head(Eigen::Index(E.size()));
  if (P.kind != PenaltyKind::slope) Psub.w = P.w.head(Gsub.n_groups());
  if (Psub.v.size() > 0)
    require(is_nonincreasing(Psub.v), "fit_restricted: restricted v not sorted");
  if (Psub.w.size() > 0)
    require(is_nonincreasing(Psub.w), "fit_restricted: restricted w not sorted");

  VectorXd init_sub;
  if (init.size() == p) {
    init_sub.resize(Eigen::Index(E.size()));
    for (std::size_t i = 0; i < E.size(); ++i) init_sub[Eigen::Index(i)] = init[E[i]];
  }
  FitResult res = fit(sub, Psub, Gsub, lambda, init_sub, cfg);
  VectorXd full = VectorXd::Zero(p);
  for (std::size_t i = 0; i < E.size(); ++i) full[E[i]] = res.beta[Eigen::Index(i)];
  res.beta = std::move(full);
  return res;
}

}  // namespace sgslope
