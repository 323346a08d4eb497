#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sgslope/common.hpp"

namespace sgslope {

using Eigen::VectorXd;

/// Partition of variables 0..p-1 into groups 0..m-1.
///
/// `penalty_size[g]` is the group size used inside sqrt(p_g)-style penalty
/// scalings. It equals `members[g].size()` for a structure built from an
/// assignment, but a restricted structure (a subset of variables) keeps the
/// sizes of the original groups so that restricted fits solve the same
/// penalty as the full problem.
struct GroupStructure {
  std::vector<std::vector<int>> members;  // per group, ascending variable ids
  std::vector<int> group_of;              // variable -> group id
  std::vector<double> penalty_size;
  std::vector<int> orig_group;            // group id in the parent structure

  int n_vars() const { return int(group_of.size()); }
  int n_groups() const { return int(members.size()); }
  int size(int g) const { return int(members[std::size_t(g)].size()); }
};

/// Build a GroupStructure from a per-variable group assignment. Ids need not
/// be contiguous; distinct ids are compacted to 0..m-1 in ascending order.
inline GroupStructure make_groups(const std::vector<int>& assignment) {
  require(!assignment.empty(), "groups: empty assignment");
  require(*std::min_element(assignment.begin(), assignment.end()) >= 0,
          "groups: negative group id");
  std::vector<int> ids = assignment;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  int m = int(ids.size());
  GroupStructure G;
  G.members.resize(std::size_t(m));
  G.group_of.resize(assignment.size());
  for (int i = 0; i < int(assignment.size()); ++i) {
    int id = assignment[std::size_t(i)];
    int g = int(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    G.group_of[std::size_t(i)] = g;
    G.members[std::size_t(g)].push_back(i);
  }
  G.penalty_size.resize(std::size_t(m));
  G.orig_group.resize(std::size_t(m));
  for (int g = 0; g < m; ++g) {
    G.penalty_size[std::size_t(g)] = double(G.size(g));
    G.orig_group[std::size_t(g)] = g;
  }
  return G;
}

/// Structure over the subset `vars` (sorted ascending). Variables are
/// renumbered 0..|vars|-1 in that order; groups keep their original
/// penalty_size and remember their original id.
inline GroupStructure restrict_groups(const GroupStructure& G,
                                      const std::vector<int>& vars) {
  GroupStructure R;
  R.group_of.resize(vars.size());
  std::vector<int> new_id(std::size_t(G.n_groups()), -1);
  for (int pos = 0; pos < int(vars.size()); ++pos) {
    int v = vars[std::size_t(pos)];
    require(v >= 0 && v < G.n_vars(), "restrict_groups: variable out of range");
    require(pos == 0 || vars[std::size_t(pos - 1)] < v,
            "restrict_groups: vars must be sorted and unique");
    int g = G.group_of[std::size_t(v)];
    if (new_id[std::size_t(g)] < 0) {
      new_id[std::size_t(g)] = int(R.members.size());
      R.members.emplace_back();
      R.penalty_size.push_back(G.penalty_size[std::size_t(g)]);
      R.orig_group.push_back(G.orig_group[std::size_t(g)]);
    }
    int ng = new_id[std::size_t(g)];
    R.members[std::size_t(ng)].push_back(pos);
    R.group_of[std::size_t(pos)] = ng;
  }
  return R;
}

/// Group reduction: entry g is penalty_size_g^q * ||x^(g)||_2.
inline VectorXd group_reduce(const VectorXd& x, const GroupStructure& G, double q) {
  require(int(x.size()) == G.n_vars(), "group_reduce: size mismatch");
  VectorXd out(G.n_groups());
  for (int g = 0; g < G.n_groups(); ++g) {
    double ss = 0;
    for (int j : G.members[std::size_t(g)]) ss += x[j] * x[j];
    out[g] = std::pow(G.penalty_size[std::size_t(g)], q) * std::sqrt(ss);
  }
  return out;
}

/// Variables of the given groups, sorted ascending.
inline std::vector<int> variables_of(const GroupStructure& G,
                                     const std::vector<int>& groups) {
  std::vector<int> out;
  for (int g : groups)
    out.insert(out.end(), G.members[std::size_t(g)].begin(), G.members[std::size_t(g)].end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sgslope
