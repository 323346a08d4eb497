#pragma once

#include <Eigen/Dense>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgslope/common.hpp"
#include "sgslope/groups.hpp"
#include "sgslope/path.hpp"
#include "sgslope/weights.hpp"

namespace sgslope {

inline std::string method_name(PathMethod m) {
  switch (m) {
    case PathMethod::gslope: return "gslope";
    case PathMethod::sgs: return "sgs";
    case PathMethod::goscar: return "goscar";
    case PathMethod::sgo: return "sgo";
    default: return "slope";
  }
}

inline PathMethod parse_method(const std::string& s) {
  if (s == "gslope") return PathMethod::gslope;
  if (s == "sgs") return PathMethod::sgs;
  if (s == "goscar") return PathMethod::goscar;
  if (s == "sgo") return PathMethod::sgo;
  if (s == "slope") return PathMethod::slope;
  throw config_error("unknown method: " + s);
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << std::setprecision(17);
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

}  // namespace detail

/// Headerless CSV, one row per line.
inline void write_matrix_csv(std::ostream& out, const MatrixXd& M) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) out << ',';
      out << M(i, j);
    }
    out << '\n';
  }
}

inline void write_matrix_csv(const std::string& path, const MatrixXd& M) {
  std::ofstream out = detail::open_out(path);
  write_matrix_csv(out, M);
}

inline MatrixXd read_matrix_csv(const std::string& path) {
  std::ifstream in = detail::open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("bad number '" + cell + "' in " + path);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  MatrixXd M(Eigen::Index(rows.size()),
             rows.empty() ? 0 : Eigen::Index(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      M(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
  return M;
}

inline void write_vector_csv(std::ostream& out, const VectorXd& v) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << v[i] << '\n';
}

inline void write_vector_csv(const std::string& path, const VectorXd& v) {
  std::ofstream out = detail::open_out(path);
  write_vector_csv(out, v);
}

inline VectorXd read_vector_csv(const std::string& path) {
  MatrixXd M = read_matrix_csv(path);
  require(M.cols() <= 1, "expected a single-column file: " + path);
  return M.cols() == 1 ? VectorXd(M.col(0)) : VectorXd();
}

/// Group file: one 0-based group id per variable, one per line.
inline void write_groups_file(const std::string& path, const GroupStructure& G) {
  std::ofstream out = detail::open_out(path);
  for (int g : G.group_of) out << g << '\n';
}

inline GroupStructure read_groups_file(const std::string& path) {
  std::ifstream in = detail::open_in(path);
  std::vector<int> assignment;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      assignment.push_back(std::stoi(line));
    } catch (const std::exception&) {
      throw std::runtime_error("bad group id '" + line + "' in " + path);
    }
  }
  return make_groups(assignment);
}

/// Weights table with a kind column: rows (i, v_i, "v") then (g, w_g, "w").
inline void write_weights_csv(std::ostream& out, const VectorXd& v,
                              const VectorXd& w) {
  out << std::setprecision(17);
  out << "index,value,kind\n";
  for (Eigen::Index i = 0; i < v.size(); ++i) out << i << ',' << v[i] << ",v\n";
  for (Eigen::Index g = 0; g < w.size(); ++g) out << g << ',' << w[g] << ",w\n";
}

inline void write_weights_csv(const std::string& path, const VectorXd& v,
                              const VectorXd& w) {
  std::ofstream out = detail::open_out(path);
  write_weights_csv(out, v, w);
}

inline void write_metrics_csv(std::ostream& out, const PathResult& r) {
  out << std::setprecision(17);
  out << "k,lambda,card_A_g,card_S_g,card_E_g,card_K_g,"
         "card_A_v,card_S_v,card_E_v,card_K_v,iters,seconds,converged\n";
  for (const PathPoint& pt : r.points)
    out << pt.k << ',' << pt.lambda << ',' << pt.A_g.size() << ','
        << pt.S_g.size() << ',' << pt.E_g.size() << ',' << pt.K_g.size() << ','
        << pt.A_v.size() << ',' << pt.S_v.size() << ',' << pt.E_v.size() << ','
        << pt.K_v.size() << ',' << pt.iterations << ',' << pt.seconds << ','
        << (pt.converged ? 1 : 0) << '\n';
}

inline void write_metrics_csv(const std::string& path, const PathResult& r) {
  std::ofstream out = detail::open_out(path);
  write_metrics_csv(out, r);
}

/// Rebuilds the comparison-relevant parts of a PathResult from its JSON
/// serialization: lambdas, betas and the per-point E/A sets and work counts.
inline PathResult path_result_from_json(const nlohmann::json& j) {
  require(j.contains("schema") && j["schema"].get<int>() == 1,
          "path JSON: unsupported schema");
  PathResult r;
  std::vector<double> lam = j.at("lambdas").get<std::vector<double>>();
  r.lambdas = Eigen::Map<VectorXd>(lam.data(), Eigen::Index(lam.size()));
  for (const auto& row : j.at("betas")) {
    std::vector<double> b = row.get<std::vector<double>>();
    r.betas.push_back(Eigen::Map<VectorXd>(b.data(), Eigen::Index(b.size())));
  }
  for (const auto& pj : j.at("points")) {
    PathPoint pt;
    pt.k = pj.at("k").get<int>();
    pt.lambda = pj.at("lambda").get<double>();
    pt.E_v = pj.at("E_v").get<std::vector<int>>();
    pt.A_v = pj.at("A_v").get<std::vector<int>>();
    pt.iterations = pj.at("iters").get<int>();
    pt.kkt_rounds = pj.value("kkt_rounds", 0);
    pt.seconds = pj.at("seconds").get<double>();
    pt.converged = pj.at("converged").get<bool>();
    pt.screen_clean = pj.at("screen_clean").get<bool>();
    r.points.push_back(std::move(pt));
  }
  const auto& cj = j.at("config");
  r.config.method = parse_method(cj.at("method").get<std::string>());
  r.config.screen = cj.at("screen").get<bool>();
  r.config.length = cj.at("length").get<int>();
  r.config.terminal_ratio = cj.at("terminal_ratio").get<double>();
  return r;
}

inline nlohmann::json path_result_json(const PathResult& r) {
  nlohmann::json j;
  j["schema"] = 1;
  j["config"] = {{"method", method_name(r.config.method)},
                 {"screen", r.config.screen},
                 {"length", r.config.length},
                 {"terminal_ratio", r.config.terminal_ratio},
                 {"kkt_max_rounds", r.config.kkt_max_rounds},
                 {"kkt_tol", r.config.kkt_tol},
                 {"active_threshold", r.config.active_threshold}};
  j["lambdas"] = std::vector<double>(r.lambdas.data(),
                                     r.lambdas.data() + r.lambdas.size());
  nlohmann::json points = nlohmann::json::array();
  for (const PathPoint& pt : r.points) {
    points.push_back({{"k", pt.k},
                      {"lambda", pt.lambda},
                      {"card_A_g", pt.A_g.size()},
                      {"card_S_g", pt.S_g.size()},
                      {"card_E_g", pt.E_g.size()},
                      {"card_K_g", pt.K_g.size()},
                      {"card_A_v", pt.A_v.size()},
                      {"card_S_v", pt.S_v.size()},
                      {"card_E_v", pt.E_v.size()},
                      {"card_K_v", pt.K_v.size()},
                      {"E_v", pt.E_v},
                      {"A_v", pt.A_v},
                      {"iters", pt.iterations},
                      {"kkt_rounds", pt.kkt_rounds},
                      {"seconds", pt.seconds},
                      {"converged", pt.converged},
                      {"screen_clean", pt.screen_clean}});
  }
  j["points"] = std::move(points);
  nlohmann::json betas = nlohmann::json::array();
  for (const VectorXd& b : r.betas)
    betas.push_back(std::vector<double>(b.data(), b.data() + b.size()));
  j["betas"] = std::move(betas);
  return j;
}

inline nlohmann::json comparison_json(const ComparisonReport& rep) {
  nlohmann::json j;
  j["schema"] = 1;
  j["distances"] = rep.distances;
  j["max_distance"] = rep.max_distance;
  j["superset_failures"] = rep.superset_failures;
  j["runtime_ratio"] = rep.runtime_ratio;
  j["iterations_screened"] = rep.iterations_a;
  j["iterations_full"] = rep.iterations_b;
  return j;
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out = detail::open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace sgslope
