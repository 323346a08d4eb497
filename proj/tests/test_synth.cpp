#include "catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "sgslope/synth.hpp"

using namespace sgslope;

namespace {

double column_correlation(const MatrixXd& X, int a, int b) {
  VectorXd u = X.col(a).array() - X.col(a).mean();
  VectorXd v = X.col(b).array() - X.col(b).mean();
  return u.dot(v) / (u.norm() * v.norm());
}

}  // namespace

TEST_CASE("CounterRng stream properties") {
  CounterRng r(123);
  CounterRng r2(123);
  for (int i = 0; i < 100; ++i) REQUIRE(r.next_u64() == r2.next_u64());
  REQUIRE(r.counter() == 100);

  CounterRng other(124);
  bool any_diff = false;
  for (int i = 0; i < 10; ++i) any_diff |= other.next_u64() != CounterRng::mix(123, std::uint64_t(i));
  REQUIRE(any_diff);

  // Uniform draws live strictly inside (0,1).
  CounterRng u(7);
  for (int i = 0; i < 5000; ++i) {
    double x = u.uniform();
    REQUIRE(x > 0.0);
    REQUIRE(x < 1.0);
  }

  // Inclusive integer bounds are hit.
  CounterRng d(8);
  std::set<int> seen;
  for (int i = 0; i < 400; ++i) {
    int k = d.uniform_int(2, 5);
    REQUIRE(k >= 2);
    REQUIRE(k <= 5);
    seen.insert(k);
  }
  REQUIRE(seen == std::set<int>({2, 3, 4, 5}));

  // The normal transform is the inverse CDF of the same uniform stream.
  CounterRng n1(9), n2(9);
  for (int i = 0; i < 50; ++i)
    REQUIRE(n1.normal() == normal_quantile(n2.uniform()));

  // Moment sanity for the normal draws.
  CounterRng n3(10);
  double mean = 0, sq = 0;
  const int N = 5000;
  for (int i = 0; i < N; ++i) {
    double x = n3.normal();
    mean += x;
    sq += x * x;
  }
  mean /= N;
  sq = sq / N - mean * mean;
  REQUIRE(std::abs(mean) < 0.05);
  REQUIRE(sq == Catch::Approx(1.0).margin(0.08));
}

TEST_CASE("generate is seed-deterministic") {
  SynthConfig cfg;
  cfg.n = 30;
  cfg.p = 40;
  cfg.seed = 99;
  SynthData a = generate(cfg);
  SynthData b = generate(cfg);
  REQUIRE((a.data.X - b.data.X).norm() == 0.0);
  REQUIRE((a.data.y - b.data.y).norm() == 0.0);
  REQUIRE((a.beta_true - b.beta_true).norm() == 0.0);
  REQUIRE(a.groups.group_of == b.groups.group_of);

  cfg.seed = 100;
  SynthData c = generate(cfg);
  REQUIRE((a.data.X - c.data.X).norm() > 0.0);
}

TEST_CASE("generate group sizes partition p") {
  SynthConfig cfg;
  cfg.n = 5;
  cfg.p = 137;
  cfg.seed = 3;
  SynthData s = generate(cfg);
  const GroupStructure& G = s.groups;
  int total = 0;
  for (int g = 0; g < G.n_groups(); ++g) {
    int sz = G.size(g);
    total += sz;
    REQUIRE(sz <= cfg.size_max);
    // Only the final, truncated group may fall below the minimum.
    if (g + 1 < G.n_groups()) REQUIRE(sz >= cfg.size_min);
    REQUIRE(sz >= 1);
  }
  REQUIRE(total == cfg.p);
}

TEST_CASE("generate places the configured signal") {
  SynthConfig cfg;
  cfg.n = 10;
  cfg.p = 120;
  cfg.seed = 11;
  SynthData s = generate(cfg);
  const GroupStructure& G = s.groups;
  const int m = G.n_groups();

  std::vector<int> active;
  for (int g = 0; g < m; ++g) {
    int nz = 0;
    for (int j : G.members[std::size_t(g)])
      if (s.beta_true[j] != 0.0) ++nz;
    if (nz > 0) {
      active.push_back(g);
      int expect = std::max(1, int(std::lround(cfg.active_var_fraction *
                                               double(G.size(g)))));
      REQUIRE(nz == expect);
    }
  }
  REQUIRE(int(active.size()) ==
          std::max(1, int(std::lround(cfg.active_group_fraction * m))));

  // The minimum of one active group holds even at fraction zero.
  SynthConfig tiny = cfg;
  tiny.active_group_fraction = 0.0;
  SynthData t = generate(tiny);
  int nonzero_groups = 0;
  for (int g = 0; g < t.groups.n_groups(); ++g) {
    for (int j : t.groups.members[std::size_t(g)])
      if (t.beta_true[j] != 0.0) {
        ++nonzero_groups;
        break;
      }
  }
  REQUIRE(nonzero_groups == 1);
}

TEST_CASE("generate correlation structure follows rho") {
  SynthConfig cfg;
  cfg.n = 2000;
  cfg.p = 6;
  cfg.size_min = 3;
  cfg.size_max = 3;
  cfg.seed = 21;

  SECTION("independent columns at rho zero") {
    cfg.rho = 0.0;
    SynthData s = generate(cfg);
    for (int a = 0; a < 6; ++a)
      for (int b = a + 1; b < 6; ++b)
        REQUIRE(std::abs(column_correlation(s.data.X, a, b)) < 0.1);
  }

  SECTION("equicorrelated inside groups at rho 0.9") {
    cfg.rho = 0.9;
    SynthData s = generate(cfg);
    // Two groups of three: high inside, near zero across.
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        REQUIRE(column_correlation(s.data.X, a, b) ==
                Catch::Approx(0.9).margin(0.07));
    for (int a = 3; a < 6; ++a)
      for (int b = a + 1; b < 6; ++b)
        REQUIRE(column_correlation(s.data.X, a, b) ==
                Catch::Approx(0.9).margin(0.07));
    for (int a = 0; a < 3; ++a)
      for (int b = 3; b < 6; ++b)
        REQUIRE(std::abs(column_correlation(s.data.X, a, b)) < 0.1);
    // Unit marginal variance by the factor construction.
    for (int j = 0; j < 6; ++j) {
      double var = (s.data.X.col(j).array() - s.data.X.col(j).mean())
                       .matrix()
                       .squaredNorm() /
                   double(cfg.n - 1);
      REQUIRE(var == Catch::Approx(1.0).margin(0.12));
    }
  }
}

TEST_CASE("generate logistic responses") {
  SynthConfig cfg;
  cfg.n = 200;
  cfg.p = 30;
  cfg.model = LossKind::logistic;
  cfg.seed = 31;
  SynthData s = generate(cfg);
  int ones = 0;
  for (int i = 0; i < cfg.n; ++i) {
    REQUIRE((s.data.y[i] == 0.0 || s.data.y[i] == 1.0));
    ones += s.data.y[i] == 1.0;
  }
  REQUIRE(ones > 0);
  REQUIRE(ones < cfg.n);
  REQUIRE(s.data.loss == LossKind::logistic);
}

TEST_CASE("synth config validation") {
  SynthConfig bad;
  bad.p = 2;
  bad.size_min = 3;
  REQUIRE_THROWS_AS(generate(bad), std::invalid_argument);
  bad = {};
  bad.rho = 1.0;
  REQUIRE_THROWS_AS(generate(bad), std::invalid_argument);
  bad = {};
  bad.rho = -0.1;
  REQUIRE_THROWS_AS(generate(bad), std::invalid_argument);
  bad = {};
  bad.size_max = 2;
  bad.size_min = 3;
  REQUIRE_THROWS_AS(generate(bad), std::invalid_argument);
  bad = {};
  bad.active_var_fraction = 1.5;
  REQUIRE_THROWS_AS(generate(bad), std::invalid_argument);
}
