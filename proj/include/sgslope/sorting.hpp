#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <vector>

namespace sgslope {

using Eigen::VectorXd;

/// Values sorted nonincreasing together with the source index of each
/// position: values[i] == x[order[i]] (or |x[order[i]]| in absolute mode).
struct SortedVector {
  VectorXd values;
  std::vector<int> order;
};

/// Stable descending sort; ties keep ascending index order.
inline SortedVector sort_desc_with_index(const VectorXd& x, bool absolute = false) {
  SortedVector s;
  s.order.resize(std::size_t(x.size()));
  std::iota(s.order.begin(), s.order.end(), 0);
  auto key = [&](int i) { return absolute ? std::abs(x[i]) : x[i]; };
  std::stable_sort(s.order.begin(), s.order.end(),
                   [&](int a, int b) { return key(a) > key(b); });
  s.values.resize(x.size());
  for (int i = 0; i < int(x.size()); ++i) s.values[i] = key(s.order[std::size_t(i)]);
  return s;
}

/// True when v is nonincreasing up to `tol` and nonnegative.
inline bool is_nonincreasing(const VectorXd& v, double tol = 1e-12) {
  for (int i = 0; i + 1 < v.size(); ++i)
    if (v[i + 1] > v[i] + tol) return false;
  return v.size() == 0 || v[v.size() - 1] >= -tol;
}

}  // namespace sgslope
