#include <gtest/gtest.h>

#include <cmath>

#include "lcx/exponential.hpp"
#include "lcx/random.hpp"
#include "oracles.hpp"

using namespace lcx;

namespace {

DirectedGraph two_cycle() { return DirectedGraph(2, {{0, 1, 1, 1}, {1, 0, 1, 1}}, 1); }

// Direct evaluation of the three-case weight from Floyd distances.
long double oracle_weight(const std::vector<std::vector<Length>>& d, int n, Vertex u, Vertex v, Length h,
                          long double alpha) {
  if (u == v) return 1;
  if (d[u][v] >= oracle::kInf || d[v][u] >= oracle::kInf) return 0;
  long double rt = static_cast<long double>(d[u][v] + d[v][u]);
  if (rt > 2.0L * h * std::log2(static_cast<long double>(n)) / alpha) return 0;
  return std::pow(2.0L, -alpha * rt / h);
}

}  // namespace

TEST(ExpWeight, TwoCycle) {
  auto g = two_cycle();
  EXPECT_EQ(exp_weight(g, 0, 0, 1, 1.0), 1.0L);
  EXPECT_EQ(exp_weight(g, 0, 1, 1, 1.0), 0.25L);
  EXPECT_EQ(exp_weight_total(g, 0, 1, 1.0), 1.25L);
  EXPECT_NEAR(static_cast<double>(mixing_factor(g, 0, 1, 1, 1.0)), 0.2, 1e-18);
  NodeWeighting A{1, 1};
  auto D = exponential_demand(g, A, 1, 1.0);
  EXPECT_NEAR(D.at(0, 1), 0.4, 1e-15);
  EXPECT_NEAR(D.at(1, 0), 0.4, 1e-15);
  // overlap: min(0.8,0.2) + min(0.2,0.8)
  EXPECT_NEAR(static_cast<double>(mixing_overlap(g, 0, 1, 1, 1.0)), 0.4, 1e-15);
  EXPECT_EQ(mixing_overlap(g, 1, 1, 1, 1.0), 1.0L);
}

TEST(ExpWeight, CutoffAndIsolated) {
  // round trip 6 > 2 h log2 n / alpha = 2
  DirectedGraph far(2, {{0, 1, 3, 1}, {1, 0, 3, 1}}, 3);
  EXPECT_EQ(exp_weight(far, 0, 1, 1, 1.0), 0.0L);
  DirectedGraph iso(3, {}, 1);
  EXPECT_EQ(exp_weight_total(iso, 2, 4, 1.0), 1.0L);
  EXPECT_EQ(mixing_factor(iso, 2, 2, 4, 1.0), 1.0L);
  EXPECT_EQ(potential(iso, {1, 2, 3}, 4, 1.0), 0.0L);
  EXPECT_TRUE(exponential_demand(iso, {0, 0, 0}, 4, 1.0).empty());
  EXPECT_TRUE(exponential_demand(two_cycle(), {0, 0}, 1, 1.0).empty());
}

TEST(ExpWeight, ParameterChecks) {
  auto g = two_cycle();
  EXPECT_THROW(exp_weight(g, 0, 1, 1, 0.5), Error);
  EXPECT_THROW(exp_weight(g, 0, 1, 1, 1.5), Error);  // log2 2 = 1
  EXPECT_THROW(exp_weight(g, 0, 1, 0, 1.0), Error);
  EXPECT_THROW(exponential_demand(g, {1}, 1, 1.0), Error);
}

TEST(ExpWeight, MatchesDirectFormula) {
  SplitMix64 rng(3);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    int n = static_cast<int>(rng.uniform(2, 9));
    auto g = random_digraph({.n = n, .seed = seed, .max_len = 4, .density = 0.2});
    Length h = rng.uniform(1, 6);
    double alpha = 1 + rng.unit() * (std::log2(n) - 1);
    ExpWeights w(g, h, alpha);
    auto d = oracle::floyd(g);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = 0; v < n; ++v)
        EXPECT_NEAR(static_cast<double>(w.weight(u, v)), static_cast<double>(oracle_weight(d, n, u, v, h, alpha)),
                    1e-15);
  }
}

TEST(ExpWeight, BasicBoundsOnRandomTriples) {
  SplitMix64 rng(11);
  int triples = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    int n = static_cast<int>(rng.uniform(2, 10));
    auto g = random_digraph({.n = n, .seed = seed, .max_len = 3, .density = 0.25});
    Length h = rng.uniform(1, 5);
    double alpha = 1 + rng.unit() * (std::log2(n) - 1);
    ExpWeights w(g, h, alpha);
    auto d = oracle::floyd(g);
    const long double inv = 1.0L / (static_cast<long double>(n) * n);
    const long double eps = 1e-15L;
    auto rt = [&](Vertex a, Vertex b) -> long double {
      if (d[a][b] >= oracle::kInf || d[b][a] >= oracle::kInf) return INFINITY;
      return static_cast<long double>(d[a][b] + d[b][a]);
    };
    for (Vertex u = 0; u < n; ++u) {
      EXPECT_GE(w.total(u), 1.0L);
      EXPECT_LE(w.total(u), static_cast<long double>(n) + eps);
    }
    for (int k = 0; k < 300; ++k, ++triples) {
      Vertex u = static_cast<Vertex>(rng.uniform(0, n - 1));
      Vertex v = static_cast<Vertex>(rng.uniform(0, n - 1));
      Vertex x = static_cast<Vertex>(rng.uniform(0, n - 1));
      long double a = alpha;
      EXPECT_GE(w.weight(u, v) + eps, std::pow(2.0L, -a * rt(u, v) / h) - inv);
      long double f = std::pow(2.0L, -a * rt(x, v) / h);
      EXPECT_LE(f * w.weight(u, v) - inv, w.weight(u, x) + eps);
      long double up = std::pow(2.0L, a * rt(x, v) / h) * (w.weight(u, v) + inv);
      EXPECT_LE(w.weight(u, x), up + eps);
    }
  }
  EXPECT_EQ(triples, 12000);
}

TEST(ExpDemand, SymmetricAndCutoff) {
  SplitMix64 rng(5);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    int n = static_cast<int>(rng.uniform(2, 9));
    auto g = random_digraph({.n = n, .seed = seed, .max_len = 3, .density = 0.3});
    NodeWeighting A(n);
    for (auto& a : A) a = Rational(rng.uniform(0, 5), rng.uniform(1, 3));
    Length h = rng.uniform(1, 4);
    auto D = exponential_demand(g, A, h, 1.0);
    EXPECT_TRUE(is_symmetric(D));
    auto d = oracle::floyd(g);
    for (const auto& [k, x] : D.entries()) {
      auto [u, v] = k;
      EXPECT_LE(static_cast<long double>(d[u][v] + d[v][u]), 2.0L * h * std::log2(static_cast<long double>(n)));
    }
  }
}

TEST(Potential, BoundsAndMonotoneUnderCuts) {
  SplitMix64 rng(8);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    int n = static_cast<int>(rng.uniform(2, 9));
    auto g = random_digraph({.n = n, .seed = seed, .max_len = 2, .density = 0.3});
    NodeWeighting A(n);
    for (auto& a : A) a = rng.uniform(0, 4);
    Length h = rng.uniform(1, 4);
    long double p = potential(g, A, h, 1.0);
    EXPECT_GE(p, 0.0L);
    EXPECT_LE(p, to_long_double(weight_size(A)) * std::log(static_cast<long double>(n)) + 1e-12L);
    MovingCut c = zero_cut(g, h);
    for (auto& x : c.edge) x = rng.uniform(0, h);
    EXPECT_LE(potential(apply_cut(g, c), A, h, 1.0), p + 1e-15L);
  }
}

TEST(Potential, CompleteGraphUpperBound) {
  for (int n : {2, 4, 7}) {
    std::vector<Arc> es;
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = 0; b < n; ++b)
        if (a != b) es.push_back({a, b, 1, 1});
    DirectedGraph g(n, es, 1);
    NodeWeighting A(n, Rational(1));
    EXPECT_LE(potential(g, A, 8, 1.0), n * std::log(static_cast<long double>(n)));
  }
}

TEST(MixingOverlap, LowerBoundForClosePairs) {
  SplitMix64 rng(21);
  int close = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    int n = static_cast<int>(rng.uniform(2, 10));
    auto g = random_digraph({.n = n, .seed = seed, .max_len = 3, .density = 0.25});
    Length h = rng.uniform(1, 5);
    double alpha = 1 + rng.unit() * (std::log2(n) - 1);
    ExpWeights w(g, h, alpha);
    const long double bound = std::pow(2.0L, -8.0L * alpha);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = 0; v < n; ++v) {
        Length rt = w.round_trip(u, v);
        if (!reachable(rt) || rt > 2 * h) continue;
        ++close;
        EXPECT_GE(w.overlap(u, v), bound);
      }
  }
  EXPECT_GT(close, 200);
}
