// Acceptance gate: prints one pass/fail line per criterion and exits nonzero
// if any criterion fails. Tolerances are pinned next to each check.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "sgslope/sgslope.hpp"

namespace {

using namespace sgslope;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool contains_all(const std::vector<int>& super, const std::vector<int>& sub) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

struct Instance {
  Dataset d;
  GroupStructure G;
};

Instance make_instance(std::uint64_t seed, int n, int p, int smin, int smax,
                       double rho, LossKind loss = LossKind::linear) {
  SynthConfig sc;
  sc.n = n;
  sc.p = p;
  sc.size_min = smin;
  sc.size_max = smax;
  sc.rho = rho;
  sc.model = loss;
  sc.seed = seed;
  SynthData sd = generate(sc);
  Instance out{make_dataset(sd.data.X, sd.data.y, loss), GroupStructure()};
  out.G = std::move(sd.groups);
  return out;
}

PenaltySpec gslope_spec(const GroupStructure& G, double qg) {
  PenaltySpec P;
  P.kind = PenaltyKind::gslope;
  P.w = gslope_mean_weights(G, qg);
  return P;
}

PenaltySpec sgs_spec(const GroupStructure& G, double alpha, double qv, double qg) {
  PenaltySpec P;
  P.kind = PenaltyKind::sgs;
  P.alpha = alpha;
  SgsWeights sw = sgs_mean_weights(G, alpha, qv, qg);
  P.v = sw.v;
  P.w = sw.w;
  return P;
}

PenaltySpec slope_spec(int p, double qv) {
  PenaltySpec P;
  P.kind = PenaltyKind::slope;
  P.v = slope_bh_weights(p, qv);
  return P;
}

bool sgs_zero_clean(const VectorXd& grad0, const GroupStructure& G, double alpha,
                    const VectorXd& v, const VectorXd& w, double lam) {
  VectorXd st = soft_threshold_ranked(grad0, lam * alpha * v);
  return slope_subdiff_zero_check(group_reduce(st, G, -0.5),
                                  lam * (1 - alpha) * w, 0.0);
}

std::string fmt(double x) {
  std::ostringstream ss;
  ss.setf(std::ios::scientific);
  ss.precision(2);
  ss << x;
  return ss.str();
}

using Verdict = std::pair<bool, std::string>;

// Shared between criteria 1 and 2: both evaluate the same path suite.
struct SuiteStats {
  bool ran = false;
  double max_distance = 0;
  int compare_superset_failures = 0;
  int own_superset_failures = 0;
  int raw_violation_points = 0;
  int total_points = 0;
  int unconverged = 0;
  double seconds = 0;
};
SuiteStats suite;

// Criterion 1: screened and full gSLOPE / SGS paths agree per point within
// l2 <= 1e-4 on 20 synthetic instances; the whole suite stays under 2 min.
Verdict criterion1() {
  const double kDistanceTol = 1e-4;
  const double kSecondsCap = 120.0;
  auto t0 = Clock::now();
  SolverConfig scfg;
  scfg.tol = 1e-8;
  scfg.max_iter = 300000;
  PathConfig pcfg;
  pcfg.length = 20;
  pcfg.terminal_ratio = 0.1;
  for (int i = 0; i < 20; ++i) {
    Instance in = make_instance(1000 + std::uint64_t(i), 100, 200, 6, 14,
                                i % 2 ? 0.6 : 0.0);
    for (int mi = 0; mi < 2; ++mi) {
      PenaltySpec P = mi == 0 ? gslope_spec(in.G, 0.05)
                              : sgs_spec(in.G, 0.95, 0.05, 0.05);
      pcfg.method = mi == 0 ? PathMethod::gslope : PathMethod::sgs;
      PathResult screened = fit_path_screened(in.d, P, in.G, pcfg, scfg);
      PathResult full = fit_path_full(in.d, P, in.G, pcfg, scfg);
      ComparisonReport rep = compare_paths(screened, full);
      suite.max_distance = std::max(suite.max_distance, rep.max_distance);
      suite.compare_superset_failures += rep.superset_failures;
      for (const PathPoint& pt : screened.points) {
        suite.total_points += 1;
        if (!pt.K_v.empty() || !pt.K_g.empty()) suite.raw_violation_points += 1;
        if (!contains_all(pt.E_v, pt.A_v)) suite.own_superset_failures += 1;
        if (!pt.converged) suite.unconverged += 1;
      }
      for (const PathPoint& pt : full.points)
        if (!pt.converged) suite.unconverged += 1;
    }
  }
  suite.seconds = seconds_since(t0);
  suite.ran = true;
  bool ok = suite.max_distance <= kDistanceTol && suite.unconverged == 0 &&
            suite.seconds < kSecondsCap;
  return {ok, "max l2 gap " + fmt(suite.max_distance) + ", " +
                  fmt(suite.seconds) + " s"};
}

// Criterion 2: on the same suite, E superset of A everywhere after the KKT
// loop, and raw first-check violations on at most 5% of fits.
Verdict criterion2() {
  const double kViolationShareCap = 0.05;
  if (!suite.ran) return {false, "suite from criterion 1 unavailable"};
  double share = double(suite.raw_violation_points) /
                 double(std::max(1, suite.total_points));
  bool ok = suite.compare_superset_failures == 0 &&
            suite.own_superset_failures == 0 && share <= kViolationShareCap;
  return {ok, "violation share " + fmt(share) + ", superset failures " +
                  std::to_string(suite.compare_superset_failures +
                                 suite.own_superset_failures)};
}

// Criterion 3: path starts. Fits at 1.001 * lambda_1 are all-zero, the zero
// certificate fails at 0.95 * lambda_1, and gslope_lambda_max equals the
// group dual norm of the gradient at zero to 1e-12.
Verdict criterion3() {
  const double kZeroTol = 1e-6;
  const double kDualTol = 1e-12;
  SolverConfig scfg;
  scfg.tol = 1e-8;
  scfg.max_iter = 100000;
  double worst_zero = 0;
  for (int i = 0; i < 50; ++i) {
    Instance in = make_instance(2000 + std::uint64_t(i), 60, 40, 3, 6,
                                i % 2 ? 0.6 : 0.0);
    VectorXd grad0 = gradient_at_zero(in.d);

    VectorXd wg = gslope_mean_weights(in.G, 0.05);
    double lam_g = gslope_lambda_max(grad0, in.G, wg);
    if (std::abs(lam_g - gslope_dual_norm(grad0, wg, in.G)) >
        kDualTol * std::max(1.0, lam_g))
      return {false, "lambda_max vs dual norm mismatch at instance " +
                         std::to_string(i)};

    bool use_sgs = i % 2 == 1;
    PenaltySpec P = use_sgs ? sgs_spec(in.G, 0.95, 0.05, 0.05)
                            : gslope_spec(in.G, 0.05);
    double lambda1 =
        use_sgs ? sgs_lambda_max_exact(grad0, in.G, 0.95, P.v, P.w) : lam_g;

    FitResult fr = fit(in.d, P, in.G, lambda1 * 1.001, VectorXd(), scfg);
    worst_zero = std::max(worst_zero, fr.beta.cwiseAbs().maxCoeff());
    if (fr.beta.cwiseAbs().maxCoeff() > kZeroTol)
      return {false, "nonzero fit above lambda_1 at instance " +
                         std::to_string(i)};

    bool low_clean =
        use_sgs
            ? sgs_zero_clean(grad0, in.G, 0.95, P.v, P.w, 0.95 * lambda1)
            : gslope_subdiff_zero_check(grad0, VectorXd(0.95 * lambda1 * wg),
                                        in.G, 0.0);
    if (low_clean)
      return {false, "zero certificate holds below lambda_1 at instance " +
                         std::to_string(i)};
  }
  return {true, "largest |beta| above lambda_1: " + fmt(worst_zero)};
}

// Criterion 4: slope_prox and gslope_prox match the brute-force prox oracle
// within 1e-6 on 500 instances of dimension <= 4, including ties.
Verdict criterion4() {
  const double kProxTol = 1e-6;
  std::mt19937_64 gen(4001);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.2, 1.5);
  double worst = 0;
  for (int t = 0; t < 500; ++t) {
    int dim = 1 + t % 4;
    VectorXd y(dim);
    for (int k = 0; k < dim; ++k) y[k] = 2.0 * nd(gen);
    if (t % 5 == 0 && dim >= 2) y[1] = y[0];  // exact tie in the input
    VectorXd x, xo;
    if (t % 2 == 0) {
      VectorXd tv(dim);
      for (int k = 0; k < dim; ++k) tv[k] = ud(gen);
      std::sort(tv.data(), tv.data() + dim, std::greater<double>());
      if (t % 7 == 0) tv.setConstant(tv[0]);  // tied thresholds
      x = slope_prox(y, tv);
      xo = oracle::slope_prox_oracle(y, tv);
    } else {
      int m = 1 + int(gen() % std::uint64_t(dim));
      std::vector<int> assignment(static_cast<std::size_t>(dim));
      for (int k = 0; k < dim; ++k) assignment[std::size_t(k)] = k % m;
      GroupStructure G = make_groups(assignment);
      VectorXd tw(m);
      for (int g = 0; g < m; ++g) tw[g] = ud(gen);
      std::sort(tw.data(), tw.data() + m, std::greater<double>());
      if (t % 7 == 0) tw.setConstant(tw[0]);
      x = gslope_prox(y, tw, G);
      xo = oracle::gslope_prox_oracle(y, G.members, tw);
    }
    worst = std::max(worst, (x - xo).cwiseAbs().maxCoeff());
    if (worst > kProxTol)
      return {false, "prox gap " + fmt(worst) + " at instance " +
                         std::to_string(t)};
  }
  return {true, "worst prox gap " + fmt(worst)};
}

// Criterion 5: screening soundness with the exact gradient. A high-precision
// fit at lambda_next supplies the true gradient; the rules applied between
// (lambda_k, lambda_next) must keep every active group and variable.
Verdict criterion5() {
  SolverConfig scfg;
  scfg.tol = 1e-10;
  scfg.max_iter = 500000;
  for (int i = 0; i < 200; ++i) {
    Instance in = make_instance(5000 + std::uint64_t(i), 50, 18, 3, 3,
                                i % 2 ? 0.6 : 0.0);
    VectorXd grad0 = gradient_at_zero(in.d);
    int mi = i % 3;
    PenaltySpec P = mi == 0   ? gslope_spec(in.G, 0.05)
                    : mi == 1 ? sgs_spec(in.G, 0.95, 0.1, 0.1)
                              : slope_spec(in.G.n_vars(), 0.1);
    double lambda1 = path_start(grad0, P, in.G);
    double lam_k = 0.6 * lambda1, lam_n = 0.45 * lambda1;
    FitResult fr = fit(in.d, P, in.G, lam_n, VectorXd(), scfg);
    if (!fr.converged)
      return {false, "reference fit did not converge at instance " +
                         std::to_string(i)};
    VectorXd grad(in.G.n_vars());
    loss_and_grad(in.d, fr.beta, grad);
    std::vector<int> A_g = active_groups(fr.beta, in.G);
    std::vector<int> A_v = active_variables(fr.beta);
    bool ok = true;
    if (mi == 0) {
      ok = contains_all(gslope_screen(grad, in.G, P.w, lam_k, lam_n), A_g);
    } else if (mi == 1) {
      std::vector<int> S_g =
          sgs_group_screen(grad, in.G, 0.95, P.v, P.w, lam_k, lam_n);
      std::vector<int> S_v =
          sgs_variable_screen(grad, in.G, 0.95, P.v, lam_k, lam_n, S_g);
      ok = contains_all(S_g, A_g) && contains_all(S_v, A_v);
    } else {
      ok = contains_all(slope_screen(grad, P.v, lam_k, lam_n), A_v);
    }
    if (!ok)
      return {false, "screen dropped an active index at instance " +
                         std::to_string(i)};
  }
  return {true, "200 instances, zero failures"};
}

// Criterion 6: weight-sequence properties and inverse CDF round trips.
Verdict criterion6() {
  const double kRoundTripTol = 1e-8;
  const double kMaxMeanSlack = 1e-9;
  auto nonincreasing_nonneg = [](const VectorXd& s) {
    for (int i = 0; i < s.size(); ++i) {
      if (s[i] < 0) return false;
      if (i && s[i] > s[i - 1]) return false;
    }
    return true;
  };

  std::vector<GroupStructure> shapes;
  shapes.push_back(make_groups({0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3}));
  shapes.push_back(make_groups({0, 1, 1, 2, 2, 2, 3, 3, 3, 3, 4}));
  shapes.push_back(make_groups({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
  for (const GroupStructure& G : shapes) {
    for (double q : {0.05, 0.2}) {
      VectorXd mean = gslope_mean_weights(G, q);
      VectorXd mx = gslope_max_weights(G, q);
      if (!nonincreasing_nonneg(mean) || !nonincreasing_nonneg(mx))
        return {false, "gslope weights not a valid sequence"};
      for (int g = 0; g < G.n_groups(); ++g)
        if (mx[g] < mean[g] - kMaxMeanSlack)
          return {false, "gslope max below mean at position " +
                             std::to_string(g)};
    }
    for (double alpha : {0.3, 0.95}) {
      SgsWeights sm = sgs_mean_weights(G, alpha, 0.05, 0.05);
      SgsWeights sx = sgs_max_weights(G, alpha, 0.05, 0.05);
      if (!nonincreasing_nonneg(sm.v) || !nonincreasing_nonneg(sm.w) ||
          !nonincreasing_nonneg(sx.v) || !nonincreasing_nonneg(sx.w))
        return {false, "sgs weights not a valid sequence"};
    }
    if (!nonincreasing_nonneg(slope_bh_weights(G.n_vars(), 0.1)))
      return {false, "bh weights not a valid sequence"};
  }

  // OSCAR with dyadic parameters: second differences are exactly zero.
  SgsWeights osc = oscar_weights(8, 4, 1.0);
  for (int i = 0; i + 2 < osc.v.size(); ++i)
    if ((osc.v[i + 2] - osc.v[i + 1]) - (osc.v[i + 1] - osc.v[i]) != 0.0)
      return {false, "oscar v second difference nonzero"};
  for (int g = 0; g + 2 < osc.w.size(); ++g)
    if ((osc.w[g + 2] - osc.w[g + 1]) - (osc.w[g + 1] - osc.w[g]) != 0.0)
      return {false, "oscar w second difference nonzero"};

  double worst = 0;
  for (double p : {0.3, 0.9, 0.99}) {
    for (double k : {1.0, 3.5, 10.0}) {
      double x = inverse_cdf_positive([k](double t) { return chi_cdf(t, k); }, p);
      worst = std::max(worst, std::abs(chi_cdf(x, k) - p));
    }
    double xf = inverse_cdf_positive([](double t) { return folded_normal_cdf(t); }, p);
    worst = std::max(worst, std::abs(folded_normal_cdf(xf) - p));
    worst = std::max(worst, std::abs(normal_cdf(normal_quantile(p)) - p));
  }
  if (worst > kRoundTripTol)
    return {false, "inverse cdf round trip off by " + fmt(worst)};
  return {true, "round trip error " + fmt(worst)};
}

// Criterion 7: dimensionality reduction on the default synthetic problem.
// Mean card(E_v)/p <= 0.5 along the SGS path, and the bi-level variable
// screen beats the group screen's implied variable set on >= 80% of points.
Verdict criterion7() {
  const double kMeanFitShareCap = 0.5;
  const double kBilevelShare = 0.8;
  SynthConfig sc;  // defaults: n=400, p=500, rho=0.6
  SynthData sd = generate(sc);
  Dataset d = make_dataset(sd.data.X, sd.data.y, LossKind::linear);
  PenaltySpec P = sgs_spec(sd.groups, 0.95, 0.05, 0.05);
  PathConfig pcfg;
  pcfg.method = PathMethod::sgs;
  SolverConfig scfg;
  scfg.tol = 1e-6;
  scfg.max_iter = 100000;
  PathResult res = fit_path_screened(d, P, sd.groups, pcfg, scfg);
  double mean_share = 0;
  int bilevel_wins = 0;
  for (const PathPoint& pt : res.points) {
    mean_share += double(pt.E_v.size()) / double(sc.p);
    if (pt.S_v.size() < variables_of(sd.groups, pt.S_g).size()) ++bilevel_wins;
  }
  mean_share /= double(res.points.size());
  double win_share = double(bilevel_wins) / double(res.points.size());
  bool ok = mean_share <= kMeanFitShareCap && win_share >= kBilevelShare;
  return {ok, "mean |E_v|/p " + fmt(mean_share) + ", bi-level share " +
                  fmt(win_share)};
}

// Criterion 8: screened-path wall time <= 0.8x the unscreened path on a
// p=2000 linear problem with identical solver config, one warm-up excluded.
Verdict criterion8() {
  const double kRatioCap = 0.8;
  SynthConfig sc;
  sc.n = 400;
  sc.p = 2000;
  sc.rho = 0.6;
  sc.seed = 88;
  SynthData sd = generate(sc);
  Dataset d = make_dataset(sd.data.X, sd.data.y, LossKind::linear);
  PenaltySpec P = sgs_spec(sd.groups, 0.95, 0.05, 0.05);
  SolverConfig scfg;
  scfg.tol = 1e-6;
  scfg.max_iter = 50000;
  PathConfig pcfg;
  pcfg.method = PathMethod::sgs;
  pcfg.length = 20;
  pcfg.terminal_ratio = 0.1;

  PathConfig warm = pcfg;
  warm.length = 5;
  fit_path_screened(d, P, sd.groups, warm, scfg);  // warm-up, not timed

  auto t0 = Clock::now();
  fit_path_screened(d, P, sd.groups, pcfg, scfg);
  double sec_screen = seconds_since(t0);
  t0 = Clock::now();
  fit_path_full(d, P, sd.groups, pcfg, scfg);
  double sec_full = seconds_since(t0);
  double ratio = sec_screen / sec_full;
  return {ratio <= kRatioCap, "time ratio " + fmt(ratio) + " (" +
                                  fmt(sec_screen) + " s vs " + fmt(sec_full) +
                                  " s)"};
}

// Criterion 9: converged fits pass their matching KKT check at 1e-4, and
// analytic gradients match central finite differences for both losses.
Verdict criterion9() {
  const double kKktTol = 1e-4;
  const double kGradTol = 1e-6;
  SolverConfig scfg;
  scfg.tol = 1e-8;
  scfg.max_iter = 200000;
  for (std::uint64_t seed : {901, 902}) {
    for (LossKind loss : {LossKind::linear, LossKind::logistic}) {
      Instance in = make_instance(seed, 80, 18, 3, 3, 0.4, loss);
      VectorXd grad0 = gradient_at_zero(in.d);
      for (int mi = 0; mi < 3; ++mi) {
        PenaltySpec P = mi == 0   ? gslope_spec(in.G, 0.05)
                        : mi == 1 ? sgs_spec(in.G, 0.95, 0.1, 0.1)
                                  : slope_spec(in.G.n_vars(), 0.1);
        double lambda = 0.4 * path_start(grad0, P, in.G);
        FitResult fr = fit(in.d, P, in.G, lambda, VectorXd(), scfg);
        if (!fr.converged) return {false, "fit did not converge"};
        VectorXd grad(in.G.n_vars());
        loss_and_grad(in.d, fr.beta, grad);
        KktReport rep =
            mi == 0 ? gslope_kkt_check(grad, fr.beta, in.G, P.w, lambda, kKktTol)
            : mi == 1
                ? sgs_kkt_check(grad, fr.beta, in.G, 0.95, P.v, P.w, lambda,
                                kKktTol)
                : slope_kkt_check(grad, fr.beta, P.v, lambda, kKktTol);
        if (!rep.ok()) return {false, "converged fit fails its KKT check"};
      }
    }
  }

  std::mt19937_64 gen(9003);
  std::normal_distribution<double> nd;
  double worst = 0;
  for (LossKind loss : {LossKind::linear, LossKind::logistic}) {
    Instance in = make_instance(910, 40, 10, 2, 4, 0.3, loss);
    for (int t = 0; t < 5; ++t) {
      VectorXd beta(10);
      for (int k = 0; k < 10; ++k) beta[k] = 0.5 * nd(gen);
      VectorXd grad(10);
      loss_and_grad(in.d, beta, grad);
      VectorXd fd = oracle::fd_gradient(
          [&](const VectorXd& b) {
            VectorXd tmp;
            return loss_and_grad(in.d, b, tmp);
          },
          beta);
      worst = std::max(worst,
                       (grad - fd).norm() / std::max(1.0, grad.norm()));
    }
  }
  if (worst > kGradTol) return {false, "gradient mismatch " + fmt(worst)};
  return {true, "worst relative gradient error " + fmt(worst)};
}

// Criterion 10: gOSCAR and SGO run through the same drivers and satisfy the
// path-agreement, superset and path-start checks with OSCAR weights.
Verdict criterion10() {
  const double kDistanceTol = 1e-4;
  const double kZeroTol = 1e-6;
  SolverConfig scfg;
  scfg.tol = 1e-8;
  scfg.max_iter = 300000;
  PathConfig pcfg;
  pcfg.length = 15;
  pcfg.terminal_ratio = 0.1;
  double worst = 0;
  for (int i = 0; i < 4; ++i) {
    Instance in = make_instance(10000 + std::uint64_t(i), 80, 60, 3, 8,
                                i % 2 ? 0.6 : 0.0);
    VectorXd grad0 = gradient_at_zero(in.d);
    double sigma1 = std::exp(-2.0) * grad0.cwiseAbs().maxCoeff();
    SgsWeights ow = oscar_weights(in.G.n_vars(), in.G.n_groups(), sigma1);
    for (int mi = 0; mi < 2; ++mi) {
      PenaltySpec P;
      if (mi == 0) {
        P.kind = PenaltyKind::gslope;
        P.w = ow.w;
        pcfg.method = PathMethod::goscar;
      } else {
        P.kind = PenaltyKind::sgs;
        P.alpha = 0.95;
        P.v = ow.v;
        P.w = ow.w;
        pcfg.method = PathMethod::sgo;
      }
      PathResult screened = fit_path_screened(in.d, P, in.G, pcfg, scfg);
      PathResult full = fit_path_full(in.d, P, in.G, pcfg, scfg);
      ComparisonReport rep = compare_paths(screened, full);
      worst = std::max(worst, rep.max_distance);
      if (rep.max_distance > kDistanceTol || rep.superset_failures != 0)
        return {false, "path disagreement " + fmt(rep.max_distance)};
      for (const PathPoint& pt : screened.points)
        if (!contains_all(pt.E_v, pt.A_v))
          return {false, "fitted set misses an active variable"};

      double lambda1 = path_start(grad0, P, in.G);
      FitResult fr = fit(in.d, P, in.G, lambda1 * 1.001, VectorXd(), scfg);
      if (fr.beta.cwiseAbs().maxCoeff() > kZeroTol)
        return {false, "nonzero fit above the oscar lambda_1"};
      bool low_clean =
          mi == 0 ? gslope_subdiff_zero_check(
                        grad0, VectorXd(0.95 * lambda1 * ow.w), in.G, 0.0)
                  : sgs_zero_clean(grad0, in.G, 0.95, ow.v, ow.w,
                                   0.95 * lambda1);
      if (low_clean)
        return {false, "oscar zero certificate holds below lambda_1"};
    }
  }
  return {true, "max l2 gap " + fmt(worst)};
}

}  // namespace

int main() {
  std::vector<std::function<Verdict()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.first) ++failures;
    std::cout << "criterion " << (i + 1) << ": " << (v.first ? "PASS" : "FAIL");
    if (!v.second.empty()) std::cout << " (" << v.second << ")";
    std::cout << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
