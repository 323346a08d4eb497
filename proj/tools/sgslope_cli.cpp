// Command-line front end: weight generation, single fits, screened or full
// regularization paths, synthetic data, benchmark sweeps, and path
// comparison reports. Exit codes: 0 success, 1 invalid arguments, 2
// numerical failure.

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <sgslope/sgslope.hpp>

namespace {

using namespace sgslope;

int log_level() {
  const char* env = std::getenv("SLOPE_SCREEN_LOG");
  if (!env) return 0;
  std::string s(env);
  if (s == "debug") return 2;
  if (s == "info") return 1;
  return 0;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[info] " << msg << '\n';
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[debug] " << msg << '\n';
}

// Writes through `fn` either to stdout ("-") or to the named file.
template <typename Fn>
void with_output(const std::string& path, Fn fn) {
  if (path == "-") {
    fn(std::cout);
  } else {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    fn(out);
  }
}

double default_sigma1(const Dataset& d) {
  return std::exp(-2.0) * (d.X.transpose() * d.y).cwiseAbs().maxCoeff();
}

struct PenaltyOptions {
  std::string method = "gslope";
  double alpha = 0.95;
  double qv = 0.05;
  double qg = 0.05;
  std::string variant = "mean";  // mean or max FDR weights
  std::string wscheme = "chi";   // sgs group weights: chi, folded-p, folded-m
  double sigma1 = 0;             // 0 means data-driven default for OSCAR
};

void add_penalty_options(CLI::App* cmd, PenaltyOptions& o) {
  cmd->add_option("--method", o.method, "slope, gslope, sgs, goscar or sgo")
      ->check(CLI::IsMember({"slope", "gslope", "sgs", "goscar", "sgo"}))
      ->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "sparse-group mixing parameter")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--qv", o.qv, "variable FDR level")->capture_default_str();
  cmd->add_option("--qg", o.qg, "group FDR level")->capture_default_str();
  cmd->add_option("--weight-variant", o.variant, "FDR weight variant")
      ->check(CLI::IsMember({"mean", "max"}))
      ->capture_default_str();
  cmd->add_option("--wscheme", o.wscheme, "sgs group-weight scheme")
      ->check(CLI::IsMember({"chi", "folded-p", "folded-m"}))
      ->capture_default_str();
  cmd->add_option("--sigma1", o.sigma1,
                  "OSCAR base weight (default exp(-2) * max |X'y|)");
}

SgsGroupScheme parse_wscheme(const std::string& s) {
  if (s == "folded-p") return SgsGroupScheme::folded_mean_p;
  if (s == "folded-m") return SgsGroupScheme::folded_mean_m;
  return SgsGroupScheme::chi_mixture;
}

PenaltySpec build_penalty(const PenaltyOptions& o, const GroupStructure& G,
                          double sigma1_auto) {
  PathMethod method = parse_method(o.method);
  PenaltySpec P;
  P.kind = penalty_kind_of(method);
  P.alpha = o.alpha;
  double s1 = o.sigma1 > 0 ? o.sigma1 : sigma1_auto;
  switch (method) {
    case PathMethod::slope:
      P.v = slope_bh_weights(G.n_vars(), o.qv);
      break;
    case PathMethod::gslope:
      P.w = o.variant == "max" ? gslope_max_weights(G, o.qg)
                               : gslope_mean_weights(G, o.qg);
      break;
    case PathMethod::sgs: {
      SgsWeights sw = o.variant == "max"
                          ? sgs_max_weights(G, o.alpha, o.qv, o.qg)
                          : sgs_mean_weights(G, o.alpha, o.qv, o.qg,
                                             parse_wscheme(o.wscheme));
      P.v = sw.v;
      P.w = sw.w;
      break;
    }
    case PathMethod::goscar:
      P.w = oscar_weights(G.n_vars(), G.n_groups(), s1).w;
      break;
    case PathMethod::sgo: {
      SgsWeights sw = oscar_weights(G.n_vars(), G.n_groups(), s1);
      P.v = sw.v;
      P.w = sw.w;
      break;
    }
  }
  return P;
}

struct DataOptions {
  std::string x_path, y_path, groups_path;
  bool standardize = true;
  bool intercept = false;
  std::string loss = "linear";
};

void add_data_options(CLI::App* cmd, DataOptions& o) {
  cmd->add_option("--x", o.x_path, "design matrix CSV (headerless)")->required();
  cmd->add_option("--y", o.y_path, "response CSV, one value per line")->required();
  cmd->add_option("--groups", o.groups_path, "group id per variable, one per line")
      ->required();
  cmd->add_flag("--standardize,!--no-standardize", o.standardize,
                "scale columns to unit l2 norm");
  cmd->add_flag("--intercept", o.intercept, "profile out an intercept (linear)");
  cmd->add_option("--loss", o.loss, "linear or logistic")
      ->check(CLI::IsMember({"linear", "logistic"}))
      ->capture_default_str();
}

std::pair<Dataset, GroupStructure> load_data(const DataOptions& o) {
  MatrixXd X = read_matrix_csv(o.x_path);
  VectorXd y = read_vector_csv(o.y_path);
  GroupStructure G = read_groups_file(o.groups_path);
  require(G.n_vars() == int(X.cols()), "groups file does not match X columns");
  LossKind loss = o.loss == "logistic" ? LossKind::logistic : LossKind::linear;
  Dataset d = make_dataset(X, y, loss, o.standardize, o.intercept);
  if (!d.constant_columns.empty())
    log_info(std::to_string(d.constant_columns.size()) +
             " constant columns left unscaled");
  return {std::move(d), std::move(G)};
}

VectorXd original_scale(const Dataset& d, const VectorXd& beta, double& mu) {
  VectorXd orig = beta.cwiseQuotient(d.col_scale);
  mu = d.intercept ? d.y_mean - d.col_center.dot(orig) : 0.0;
  return orig;
}

GroupStructure groups_from_sizes(const std::vector<int>& sizes) {
  std::vector<int> assignment;
  for (int g = 0; g < int(sizes.size()); ++g) {
    require(sizes[std::size_t(g)] >= 1, "group sizes must be positive");
    for (int i = 0; i < sizes[std::size_t(g)]; ++i) assignment.push_back(g);
  }
  return make_groups(assignment);
}

// ---- weights -------------------------------------------------------------

struct WeightsOptions {
  std::string scheme = "gslope-mean";
  int p = 0, m = 1;
  std::vector<int> sizes;
  std::string groups_path;
  double qv = 0.05, qg = 0.05, alpha = 0.95, sigma1 = 1.0;
  std::string wscheme = "chi";
  std::string output = "-";
};

int run_weights(const WeightsOptions& o) {
  GroupStructure G;
  if (!o.groups_path.empty()) {
    G = read_groups_file(o.groups_path);
  } else if (!o.sizes.empty()) {
    G = groups_from_sizes(o.sizes);
  } else if (o.p > 0) {
    // p variables split evenly into m groups; enough for the size-free schemes.
    require(o.m >= 1 && o.m <= o.p, "need 1 <= m <= p");
    std::vector<int> assignment(std::size_t(o.p));
    for (int j = 0; j < o.p; ++j) assignment[std::size_t(j)] = j % o.m;
    G = make_groups(assignment);
  } else {
    throw config_error("weights: provide --groups, --sizes or --p");
  }

  VectorXd v, w;
  if (o.scheme == "oscar") {
    SgsWeights sw = oscar_weights(G.n_vars(), G.n_groups(), o.sigma1);
    v = sw.v;
    w = sw.w;
  } else if (o.scheme == "bh") {
    v = slope_bh_weights(G.n_vars(), o.qv);
  } else if (o.scheme == "gslope-mean") {
    w = gslope_mean_weights(G, o.qg);
  } else if (o.scheme == "gslope-max") {
    w = gslope_max_weights(G, o.qg);
  } else if (o.scheme == "sgs-mean") {
    SgsWeights sw =
        sgs_mean_weights(G, o.alpha, o.qv, o.qg, parse_wscheme(o.wscheme));
    v = sw.v;
    w = sw.w;
  } else if (o.scheme == "sgs-max") {
    SgsWeights sw = sgs_max_weights(G, o.alpha, o.qv, o.qg);
    v = sw.v;
    w = sw.w;
  } else {
    throw config_error("unknown scheme: " + o.scheme);
  }
  with_output(o.output, [&](std::ostream& out) { write_weights_csv(out, v, w); });
  return 0;
}

// ---- synth ---------------------------------------------------------------

struct SynthOptions {
  SynthConfig cfg;
  std::string model = "linear";
  std::string output = ".";
};

int run_synth(SynthOptions& o) {
  o.cfg.model = o.model == "logistic" ? LossKind::logistic : LossKind::linear;
  SynthData data = generate(o.cfg);
  std::string dir = o.output;
  if (!dir.empty() && dir.back() != '/') dir += '/';
  write_matrix_csv(dir + "X.csv", data.data.X);
  write_vector_csv(dir + "y.csv", data.data.y);
  write_groups_file(dir + "groups.txt", data.groups);
  write_vector_csv(dir + "beta_true.csv", data.beta_true);
  log_info("wrote synthetic dataset to " + dir);
  return 0;
}

// ---- fit -----------------------------------------------------------------

struct FitOptions {
  DataOptions data;
  PenaltyOptions pen;
  double lambda = 0;
  SolverConfig solver;
  std::string format = "csv";
  std::string output = "-";
};

int run_fit(const FitOptions& o) {
  auto [d, G] = load_data(o.data);
  PenaltySpec P = build_penalty(o.pen, G, default_sigma1(d));
  FitResult fr = fit(d, P, G, o.lambda, VectorXd(), o.solver);
  double mu = 0;
  VectorXd beta = original_scale(d, fr.beta, mu);
  log_info("fit: " + std::to_string(fr.iterations) + " iterations, objective " +
           std::to_string(fr.objective) +
           (fr.converged ? "" : " (not converged)"));
  if (d.intercept) log_info("intercept: " + std::to_string(mu));
  if (o.format == "json") {
    nlohmann::json j;
    j["schema"] = 1;
    j["lambda"] = o.lambda;
    j["beta"] = std::vector<double>(beta.data(), beta.data() + beta.size());
    j["intercept"] = mu;
    j["iterations"] = fr.iterations;
    j["converged"] = fr.converged;
    j["objective"] = fr.objective;
    with_output(o.output, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
  } else {
    with_output(o.output, [&](std::ostream& out) { write_vector_csv(out, beta); });
  }
  return fr.converged ? 0 : 2;
}

// ---- path ----------------------------------------------------------------

struct PathOptions {
  DataOptions data;
  PenaltyOptions pen;
  PathConfig path;
  SolverConfig solver;
  bool screen = true;
  std::string format = "csv";
  std::string output = "-";
};

int run_path(const PathOptions& o) {
  auto [d, G] = load_data(o.data);
  PenaltySpec P = build_penalty(o.pen, G, default_sigma1(d));
  PathConfig pcfg = o.path;
  pcfg.method = parse_method(o.pen.method);
  pcfg.screen = o.screen;
  PathResult r = fit_path(d, P, G, pcfg, o.solver);
  for (const PathPoint& pt : r.points)
    log_debug("k=" + std::to_string(pt.k) + " lambda=" + std::to_string(pt.lambda) +
              " |E_v|=" + std::to_string(pt.E_v.size()) +
              " |A_v|=" + std::to_string(pt.A_v.size()) +
              " iters=" + std::to_string(pt.iterations));
  long total_iters = 0;
  for (const PathPoint& pt : r.points) total_iters += pt.iterations;
  log_info("path: " + std::to_string(r.points.size()) + " points, " +
           std::to_string(total_iters) + " total iterations");
  if (o.format == "json") {
    nlohmann::json j = path_result_json(r);
    with_output(o.output, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
  } else {
    with_output(o.output, [&](std::ostream& out) { write_metrics_csv(out, r); });
  }
  return 0;
}

// ---- bench ---------------------------------------------------------------

struct BenchOptions {
  std::vector<int> ps{200, 500};
  std::vector<double> rhos{0.0, 0.6};
  int n = 400;
  int reps = 3;
  int jobs = 1;
  std::uint64_t seed = 42;
  PenaltyOptions pen;
  PathConfig path;
  SolverConfig solver;
  std::string loss = "linear";
  std::string output = "-";
};

struct BenchCell {
  double screened_s = 0, full_s = 0;
  long screened_iters = 0, full_iters = 0;
};

int run_bench(const BenchOptions& o) {
  require(o.reps >= 1, "bench: need at least one repetition");
  require(o.jobs >= 1, "bench: jobs must be positive");
  struct Case {
    int p;
    double rho;
  };
  std::vector<Case> cases;
  for (int p : o.ps)
    for (double rho : o.rhos) cases.push_back({p, rho});

  std::vector<BenchCell> cells(cases.size() * std::size_t(o.reps));
  std::atomic<std::size_t> next(0);
  std::atomic<bool> failed(false);
  std::string error_msg;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      std::size_t t = next.fetch_add(1);
      if (t >= cells.size() || failed.load()) return;
      std::size_t ci = t / std::size_t(o.reps);
      int rep = int(t % std::size_t(o.reps));
      try {
        SynthConfig sc;
        sc.n = o.n;
        sc.p = cases[ci].p;
        sc.rho = cases[ci].rho;
        sc.model = o.loss == "logistic" ? LossKind::logistic : LossKind::linear;
        sc.seed = o.seed + 1000 * ci + std::uint64_t(rep);
        SynthData sd = generate(sc);
        Dataset d = make_dataset(sd.data.X, sd.data.y, sc.model, true, false);
        PenaltySpec P = build_penalty(o.pen, sd.groups, default_sigma1(d));
        PathConfig pcfg = o.path;
        pcfg.method = parse_method(o.pen.method);
        PathResult screened = fit_path_screened(d, P, sd.groups, pcfg, o.solver);
        PathResult full = fit_path_full(d, P, sd.groups, pcfg, o.solver);
        BenchCell& cell = cells[t];
        for (const PathPoint& pt : screened.points) {
          cell.screened_s += pt.seconds;
          cell.screened_iters += pt.iterations;
        }
        for (const PathPoint& pt : full.points) {
          cell.full_s += pt.seconds;
          cell.full_iters += pt.iterations;
        }
        log_info("bench p=" + std::to_string(cases[ci].p) + " rho=" +
                 std::to_string(cases[ci].rho) + " rep=" + std::to_string(rep) +
                 " done");
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        failed.store(true);
        error_msg = e.what();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  int n_threads = std::min<int>(o.jobs, int(cells.size()));
  pool.reserve(std::size_t(n_threads));
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  if (failed.load()) throw numerical_error("bench: " + error_msg);

  with_output(o.output, [&](std::ostream& out) {
    out << std::setprecision(6);
    out << "method,loss,n,p,rho,reps,screened_mean_s,screened_se_s,"
           "full_mean_s,full_se_s,time_ratio,screened_iters_mean,"
           "full_iters_mean\n";
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
      double sm = 0, fm = 0, s2 = 0, f2 = 0, si = 0, fi = 0;
      for (int rep = 0; rep < o.reps; ++rep) {
        const BenchCell& cell = cells[ci * std::size_t(o.reps) + std::size_t(rep)];
        sm += cell.screened_s;
        fm += cell.full_s;
        si += double(cell.screened_iters);
        fi += double(cell.full_iters);
      }
      sm /= o.reps;
      fm /= o.reps;
      si /= o.reps;
      fi /= o.reps;
      for (int rep = 0; rep < o.reps; ++rep) {
        const BenchCell& cell = cells[ci * std::size_t(o.reps) + std::size_t(rep)];
        s2 += (cell.screened_s - sm) * (cell.screened_s - sm);
        f2 += (cell.full_s - fm) * (cell.full_s - fm);
      }
      double sse = o.reps > 1 ? std::sqrt(s2 / (o.reps - 1) / o.reps) : 0;
      double fse = o.reps > 1 ? std::sqrt(f2 / (o.reps - 1) / o.reps) : 0;
      out << o.pen.method << ',' << o.loss << ',' << o.n << ',' << cases[ci].p
          << ',' << cases[ci].rho << ',' << o.reps << ',' << sm << ',' << sse
          << ',' << fm << ',' << fse << ',' << (fm > 0 ? sm / fm : 0) << ','
          << si << ',' << fi << '\n';
    }
  });
  return 0;
}

// ---- compare -------------------------------------------------------------

struct CompareOptions {
  std::string a_path, b_path;
  std::string format = "json";
  std::string output = "-";
};

int run_compare(const CompareOptions& o) {
  nlohmann::json ja, jb;
  {
    std::ifstream fa(o.a_path), fb(o.b_path);
    if (!fa) throw std::runtime_error("cannot open " + o.a_path);
    if (!fb) throw std::runtime_error("cannot open " + o.b_path);
    fa >> ja;
    fb >> jb;
  }
  PathResult a = path_result_from_json(ja);
  PathResult b = path_result_from_json(jb);
  ComparisonReport rep = compare_paths(a, b);
  if (o.format == "csv") {
    with_output(o.output, [&](std::ostream& out) {
      out << std::setprecision(17);
      out << "k,distance\n";
      for (std::size_t k = 0; k < rep.distances.size(); ++k)
        out << (k + 1) << ',' << rep.distances[k] << '\n';
    });
    log_info("max distance " + std::to_string(rep.max_distance) + ", " +
             std::to_string(rep.superset_failures) + " superset failures");
  } else {
    nlohmann::json j = comparison_json(rep);
    with_output(o.output, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
  }
  return 0;
}

void add_solver_options(CLI::App* cmd, SolverConfig& s) {
  cmd->add_option("--tol", s.tol, "solver convergence tolerance")
      ->capture_default_str();
  cmd->add_option("--max-iter", s.max_iter, "solver iteration cap")
      ->capture_default_str();
}

void add_path_options(CLI::App* cmd, PathConfig& p) {
  cmd->add_option("--len", p.length, "number of path points")
      ->capture_default_str();
  cmd->add_option("--terminal", p.terminal_ratio,
                  "terminal lambda as a fraction of lambda_1")
      ->capture_default_str();
  cmd->add_option("--kkt-rounds", p.kkt_max_rounds,
                  "max KKT correction rounds per point")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sorted-penalty regression with strong screening rules"};
  app.require_subcommand(1);

  WeightsOptions wo;
  CLI::App* weights = app.add_subcommand("weights", "emit penalty weight sequences");
  weights->add_option("--scheme", wo.scheme,
                      "bh, gslope-mean, gslope-max, sgs-mean, sgs-max or oscar")
      ->check(CLI::IsMember({"bh", "gslope-mean", "gslope-max", "sgs-mean",
                             "sgs-max", "oscar"}))
      ->capture_default_str();
  weights->add_option("--p", wo.p, "number of variables");
  weights->add_option("--m", wo.m, "number of groups")->capture_default_str();
  weights->add_option("--sizes", wo.sizes, "explicit group sizes");
  weights->add_option("--groups", wo.groups_path, "group file, one id per line");
  weights->add_option("--qv", wo.qv, "variable FDR level")->capture_default_str();
  weights->add_option("--qg", wo.qg, "group FDR level")->capture_default_str();
  weights->add_option("--alpha", wo.alpha, "sparse-group mixing parameter")
      ->capture_default_str();
  weights->add_option("--sigma1", wo.sigma1, "OSCAR base weight")
      ->capture_default_str();
  weights->add_option("--wscheme", wo.wscheme, "sgs group-weight scheme")
      ->check(CLI::IsMember({"chi", "folded-p", "folded-m"}))
      ->capture_default_str();
  weights->add_option("--output", wo.output, "output file or - for stdout")
      ->capture_default_str();

  SynthOptions so;
  CLI::App* synth = app.add_subcommand("synth", "write a synthetic dataset");
  synth->add_option("--n", so.cfg.n, "observations")->capture_default_str();
  synth->add_option("--p", so.cfg.p, "variables")->capture_default_str();
  synth->add_option("--rho", so.cfg.rho, "within-group correlation")
      ->capture_default_str();
  synth->add_option("--size-min", so.cfg.size_min, "minimum group size")
      ->capture_default_str();
  synth->add_option("--size-max", so.cfg.size_max, "maximum group size")
      ->capture_default_str();
  synth->add_option("--active-groups", so.cfg.active_group_fraction,
                    "fraction of active groups")
      ->capture_default_str();
  synth->add_option("--active-vars", so.cfg.active_var_fraction,
                    "fraction of active variables per active group")
      ->capture_default_str();
  synth->add_option("--signal-sd", so.cfg.signal_sd, "signal standard deviation")
      ->capture_default_str();
  synth->add_option("--model", so.model, "linear or logistic")
      ->check(CLI::IsMember({"linear", "logistic"}))
      ->capture_default_str();
  synth->add_option("--seed", so.cfg.seed, "PRNG seed")->capture_default_str();
  synth->add_option("--output", so.output, "output directory")
      ->capture_default_str();

  FitOptions fo;
  CLI::App* fitc = app.add_subcommand("fit", "single-lambda fit");
  add_data_options(fitc, fo.data);
  add_penalty_options(fitc, fo.pen);
  add_solver_options(fitc, fo.solver);
  fitc->add_option("--lambda", fo.lambda, "penalty level")->required();
  fitc->add_option("--format", fo.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  fitc->add_option("--output", fo.output, "output file or - for stdout")
      ->capture_default_str();

  PathOptions po;
  CLI::App* path = app.add_subcommand("path", "regularization path fit");
  add_data_options(path, po.data);
  add_penalty_options(path, po.pen);
  add_solver_options(path, po.solver);
  add_path_options(path, po.path);
  path->add_flag("--screen,!--no-screen", po.screen, "use strong screening");
  path->add_option("--format", po.format, "csv metrics or json full result")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  path->add_option("--output", po.output, "output file or - for stdout")
      ->capture_default_str();

  BenchOptions bo;
  CLI::App* bench = app.add_subcommand("bench", "synthetic benchmark sweep");
  bench->add_option("--p", bo.ps, "problem sizes")->capture_default_str();
  bench->add_option("--rho", bo.rhos, "correlation levels")->capture_default_str();
  bench->add_option("--n", bo.n, "observations")->capture_default_str();
  bench->add_option("--reps", bo.reps, "repetitions per cell")
      ->capture_default_str();
  bench->add_option("--jobs", bo.jobs, "worker threads")->capture_default_str();
  bench->add_option("--seed", bo.seed, "base PRNG seed")->capture_default_str();
  bench->add_option("--loss", bo.loss, "linear or logistic")
      ->check(CLI::IsMember({"linear", "logistic"}))
      ->capture_default_str();
  add_penalty_options(bench, bo.pen);
  add_solver_options(bench, bo.solver);
  add_path_options(bench, bo.path);
  bench->add_option("--output", bo.output, "output file or - for stdout")
      ->capture_default_str();

  CompareOptions co;
  CLI::App* compare = app.add_subcommand("compare", "compare two path JSONs");
  compare->add_option("a", co.a_path, "first path JSON (screened)")->required();
  compare->add_option("b", co.b_path, "second path JSON (reference)")->required();
  compare->add_option("--format", co.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  compare->add_option("--output", co.output, "output file or - for stdout")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(weights)) return run_weights(wo);
    if (app.got_subcommand(synth)) return run_synth(so);
    if (app.got_subcommand(fitc)) return run_fit(fo);
    if (app.got_subcommand(path)) return run_path(po);
    if (app.got_subcommand(bench)) return run_bench(bo);
    if (app.got_subcommand(compare)) return run_compare(co);
    return 1;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const sgslope::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
