#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "sgslope/common.hpp"
#include "sgslope/groups.hpp"
#include "sgslope/kkt.hpp"
#include "sgslope/penalty.hpp"
#include "sgslope/screening.hpp"
#include "sgslope/solver.hpp"

namespace sgslope {

enum class PathMethod { gslope, sgs, goscar, sgo, slope };

inline PenaltyKind penalty_kind_of(PathMethod m) {
  switch (m) {
    case PathMethod::gslope:
    case PathMethod::goscar: return PenaltyKind::gslope;
    case PathMethod::sgs:
    case PathMethod::sgo: return PenaltyKind::sgs;
    default: return PenaltyKind::slope;
  }
}

struct PathConfig {
  int length = 50;
  double terminal_ratio = 0.05;
  PathMethod method = PathMethod::gslope;
  bool screen = true;
  int kkt_max_rounds = 10;
  double kkt_tol = 1e-4;
  double active_threshold = 1e-6;
  CumsumRule rule = CumsumRule::total;
};

inline void validate_path_config(const PathConfig& c) {
  require(c.length >= 2, "PathConfig: length must be >= 2");
  require(c.terminal_ratio > 0 && c.terminal_ratio < 1,
          "PathConfig: terminal_ratio must be in (0,1)");
  require(c.kkt_max_rounds >= 1, "PathConfig: kkt_max_rounds must be >= 1");
}

/// Geometric lambda grid from lambda1 down to terminal_ratio * lambda1.
inline VectorXd lambda_path(double lambda1, int l, double terminal_ratio) {
  require(lambda1 > 0, "lambda_path: lambda1 must be positive");
  require(l >= 2, "lambda_path: need at least two points");
  require(terminal_ratio > 0 && terminal_ratio < 1,
          "lambda_path: terminal_ratio must be in (0,1)");
  VectorXd out(l);
  for (int k = 0; k < l; ++k)
    out[k] = lambda1 * std::pow(terminal_ratio, double(k) / double(l - 1));
  return out;
}

/// Per-point record: the active (A), strong-rule (S), fitted (E) and
/// KKT-flagged (K) sets at both group and variable level, plus solver work.
struct PathPoint {
  int k = 0;
  double lambda = 0;
  std::vector<int> A_g, S_g, E_g, K_g;
  std::vector<int> A_v, S_v, E_v, K_v;
  int iterations = 0;
  int kkt_rounds = 0;  // extra refits forced by KKT violations
  double seconds = 0;
  bool converged = false;
  bool screen_clean = true;
};

struct PathResult {
  VectorXd lambdas;
  std::vector<VectorXd> betas;
  std::vector<PathPoint> points;
  PathConfig config;
};

/// Path start for the configured penalty: the matching dual norm for the
/// single-norm penalties and the exact zero-certificate threshold for the
/// sparse-group penalty (the printed prefix-ratio formula is loose, so the
/// driver bisects the certificate instead; sgs_lambda_max stays available
/// as the literal formula).
inline double path_start(const VectorXd& grad0, const PenaltySpec& P,
                         const GroupStructure& G) {
  double a = P.effective_alpha();
  if (a == 1.0) return slope_lambda_max(grad0, P.v);
  if (a == 0.0) return gslope_lambda_max(grad0, G, P.w);
  return sgs_lambda_max_exact(grad0, G, a, P.v, P.w);
}

namespace detail {

inline std::vector<int> all_indices(int n) {
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = i;
  return out;
}

inline std::vector<int> set_union(const std::vector<int>& a,
                                  const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::vector<int> set_minus(const std::vector<int>& a,
                                  const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

inline std::vector<int> groups_of_variables(const GroupStructure& G,
                                            const std::vector<int>& vars) {
  std::vector<int> out;
  for (int j : vars) out.push_back(G.group_of[std::size_t(j)]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline KktReport kkt_dispatch(const VectorXd& grad, const VectorXd& beta,
                              const PenaltySpec& P, const GroupStructure& G,
                              double lambda, const PathConfig& cfg) {
  double a = P.effective_alpha();
  if (P.kind == PenaltyKind::slope)
    return slope_kkt_check(grad, beta, P.v, lambda, cfg.kkt_tol,
                           cfg.active_threshold);
  if (P.kind == PenaltyKind::gslope || a == 0.0)
    return gslope_kkt_check(grad, beta, G, P.w, lambda, cfg.kkt_tol,
                            cfg.active_threshold);
  if (a == 1.0)
    return slope_kkt_check(grad, beta, P.v, lambda, cfg.kkt_tol,
                           cfg.active_threshold);
  return sgs_kkt_check(grad, beta, G, a, P.v, P.w, lambda, cfg.kkt_tol,
                       cfg.active_threshold);
}

}  // namespace detail

/// Screened path per the sparse-group screening framework: the first point
/// is fitted unrestricted, then every subsequent point fits only the strong
/// set united with the previous active set, re-fitting with KKT violators
/// added until the certificate is clean. Exceeding kkt_max_rounds falls back
/// to an unrestricted fit for that point (screen_clean = false).
inline PathResult fit_path_screened(const Dataset& d, const PenaltySpec& P,
                                    const GroupStructure& G,
                                    const PathConfig& pcfg = {},
                                    const SolverConfig& scfg = {}) {
  validate_path_config(pcfg);
  require(G.n_vars() == d.p(), "fit_path: group structure does not cover data");
  validate_penalty(P, G);
  using clock = std::chrono::steady_clock;
  const int p = d.p();
  const int m = G.n_groups();
  const double alpha = P.effective_alpha();

  VectorXd grad0 = gradient_at_zero(d);
  double lambda1 = path_start(grad0, P, G);
  PathResult res;
  res.config = pcfg;
  res.lambdas = lambda_path(lambda1, pcfg.length, pcfg.terminal_ratio);

  VectorXd beta_prev = VectorXd::Zero(p);
  VectorXd grad(p);
  for (int k = 0; k < pcfg.length; ++k) {
    auto t0 = clock::now();
    double lambda = res.lambdas[k];
    PathPoint pt;
    pt.k = k + 1;
    pt.lambda = lambda;

    FitResult fr;
    if (k == 0) {
      fr = fit(d, P, G, lambda, beta_prev, scfg);
      pt.iterations = fr.iterations;
      pt.converged = fr.converged;
      pt.S_v = pt.E_v = detail::all_indices(p);
      pt.S_g = pt.E_g = detail::all_indices(m);
    } else {
      loss_and_grad(d, beta_prev, grad);
      double lam_prev = res.lambdas[k - 1];
      std::vector<int> Av_prev = active_variables(beta_prev, pcfg.active_threshold);
      std::vector<int> Ag_prev = active_groups(beta_prev, G, pcfg.active_threshold);
      if (P.kind == PenaltyKind::slope || alpha == 1.0) {
        pt.S_v = slope_screen(grad, P.v, lam_prev, lambda, pcfg.rule);
        pt.E_v = detail::set_union(pt.S_v, Av_prev);
        pt.S_g = detail::groups_of_variables(G, pt.S_v);
      } else if (P.kind == PenaltyKind::gslope || alpha == 0.0) {
        pt.S_g = gslope_screen(grad, G, P.w, lam_prev, lambda, pcfg.rule);
        pt.E_g = detail::set_union(pt.S_g, Ag_prev);
        pt.S_v = variables_of(G, pt.S_g);
        pt.E_v = variables_of(G, pt.E_g);
      } else {
        pt.S_g = sgs_group_screen(grad, G, alpha, P.v, P.w, lam_prev, lambda,
                                  pcfg.rule);
        pt.S_v = sgs_variable_screen(grad, G, alpha, P.v, lam_prev, lambda,
                                     pt.S_g, pcfg.rule);
        pt.E_v = detail::set_union(pt.S_v, Av_prev);
      }
      if (pt.E_g.empty()) pt.E_g = detail::groups_of_variables(G, pt.E_v);

      VectorXd init = beta_prev;
      bool first_check = true;
      for (int round = 0;; ++round) {
        fr = fit_restricted(d, P, G, lambda, pt.E_v, init, scfg);
        pt.iterations += fr.iterations;
        loss_and_grad(d, fr.beta, grad);
        KktReport rep = detail::kkt_dispatch(grad, fr.beta, P, G, lambda, pcfg);
        if (first_check) {
          pt.K_g = rep.violating_groups;
          pt.K_v = rep.violating_variables;
          first_check = false;
        }
        std::vector<int> actionable =
            detail::set_minus(rep.violating_variables, pt.E_v);
        if (P.kind == PenaltyKind::gslope || alpha == 0.0)
          actionable = variables_of(
              G, detail::set_minus(rep.violating_groups, pt.E_g));
        if (actionable.empty()) break;
        if (round + 1 >= pcfg.kkt_max_rounds) {
          pt.screen_clean = false;
          pt.kkt_rounds = round + 1;
          fr = fit(d, P, G, lambda, init, scfg);
          pt.iterations += fr.iterations;
          pt.E_v = detail::all_indices(p);
          pt.E_g = detail::all_indices(m);
          break;
        }
        pt.E_v = detail::set_union(pt.E_v, actionable);
        pt.E_g = detail::groups_of_variables(G, pt.E_v);
        init = fr.beta;
        pt.kkt_rounds = round + 1;
      }
      pt.converged = fr.converged;
    }

    pt.A_v = active_variables(fr.beta, pcfg.active_threshold);
    pt.A_g = active_groups(fr.beta, G, pcfg.active_threshold);
    pt.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    res.betas.push_back(fr.beta);
    res.points.push_back(std::move(pt));
    beta_prev = fr.beta;
  }
  return res;
}

/// Unscreened baseline: every point is an unrestricted warm-started fit.
inline PathResult fit_path_full(const Dataset& d, const PenaltySpec& P,
                                const GroupStructure& G,
                                const PathConfig& pcfg = {},
                                const SolverConfig& scfg = {}) {
  validate_path_config(pcfg);
  require(G.n_vars() == d.p(), "fit_path: group structure does not cover data");
  validate_penalty(P, G);
  using clock = std::chrono::steady_clock;
  const int p = d.p();
  const int m = G.n_groups();

  VectorXd grad0 = gradient_at_zero(d);
  double lambda1 = path_start(grad0, P, G);
  PathResult res;
  res.config = pcfg;
  res.config.screen = false;
  res.lambdas = lambda_path(lambda1, pcfg.length, pcfg.terminal_ratio);

  VectorXd beta_prev = VectorXd::Zero(p);
  for (int k = 0; k < pcfg.length; ++k) {
    auto t0 = clock::now();
    PathPoint pt;
    pt.k = k + 1;
    pt.lambda = res.lambdas[k];
    FitResult fr = fit(d, P, G, pt.lambda, beta_prev, scfg);
    pt.iterations = fr.iterations;
    pt.converged = fr.converged;
    pt.S_v = pt.E_v = detail::all_indices(p);
    pt.S_g = pt.E_g = detail::all_indices(m);
    pt.A_v = active_variables(fr.beta, pcfg.active_threshold);
    pt.A_g = active_groups(fr.beta, G, pcfg.active_threshold);
    pt.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    res.betas.push_back(fr.beta);
    res.points.push_back(std::move(pt));
    beta_prev = fr.beta;
  }
  return res;
}

inline PathResult fit_path(const Dataset& d, const PenaltySpec& P,
                           const GroupStructure& G, const PathConfig& pcfg = {},
                           const SolverConfig& scfg = {}) {
  return pcfg.screen ? fit_path_screened(d, P, G, pcfg, scfg)
                     : fit_path_full(d, P, G, pcfg, scfg);
}

/// Agreement metrics between a screened path `a` and a reference path `b`.
struct ComparisonReport {
  std::vector<double> distances;
  double max_distance = 0;
  int superset_failures = 0;
  double runtime_ratio = 0;
  long iterations_a = 0;
  long iterations_b = 0;
};

inline ComparisonReport compare_paths(const PathResult& a, const PathResult& b) {
  require(a.lambdas.size() == b.lambdas.size(), "compare_paths: length mismatch");
  for (int k = 0; k < a.lambdas.size(); ++k)
    require(std::abs(a.lambdas[k] - b.lambdas[k]) <=
                1e-12 * std::max(1.0, std::abs(b.lambdas[k])),
            "compare_paths: lambda grids differ");
  ComparisonReport rep;
  double sec_a = 0, sec_b = 0;
  for (std::size_t k = 0; k < a.betas.size(); ++k) {
    double dist = (a.betas[k] - b.betas[k]).norm();
    rep.distances.push_back(dist);
    rep.max_distance = std::max(rep.max_distance, dist);
    if (!std::includes(a.points[k].E_v.begin(), a.points[k].E_v.end(),
                       b.points[k].A_v.begin(), b.points[k].A_v.end()))
      rep.superset_failures += 1;
    sec_a += a.points[k].seconds;
    sec_b += b.points[k].seconds;
    rep.iterations_a += a.points[k].iterations;
    rep.iterations_b += b.points[k].iterations;
  }
  rep.runtime_ratio = sec_b > 0 ? sec_a / sec_b : 0;
  return rep;
}

}  // namespace sgslope
