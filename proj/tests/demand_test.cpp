#include <gtest/gtest.h>

#include "lcx/demand.hpp"
#include "lcx/random.hpp"
#include "oracles.hpp"

using namespace lcx;

namespace {

Demand random_demand(int n, SplitMix64& rng, int pairs) {
  Demand d;
  for (int k = 0; k < pairs; ++k) {
    Vertex u = static_cast<Vertex>(rng.uniform(0, n - 1));
    Vertex v = static_cast<Vertex>(rng.uniform(0, n - 1));
    d.add(u, v, Rational(rng.uniform(1, 9), rng.uniform(1, 4)));
  }
  return d;
}

}  // namespace

TEST(Demand, DiagonalIgnoredAndTotals) {
  Demand d;
  d.add(1, 1, 5);
  d.add(0, 1, Rational(1, 2));
  d.add(0, 1, Rational(1, 3));
  d.add(2, 0, 2);
  EXPECT_EQ(d.support_size(), 2u);
  EXPECT_EQ(d.at(0, 1), Rational(5, 6));
  EXPECT_EQ(d.total(), Rational(17, 6));
  EXPECT_EQ(d.out_sum(0), Rational(5, 6));
  EXPECT_EQ(d.in_sum(0), 2);
  EXPECT_THROW(d.add(0, 1, -1), Error);
}

TEST(HLength, Basics) {
  DirectedGraph g(3, {{0, 1, 2, 1}, {1, 2, 2, 1}}, 2);
  EXPECT_TRUE(is_h_length(Demand{}, g, 0));
  Demand d;
  d.add(0, 2, 1);
  EXPECT_TRUE(is_h_length(d, g, 4));
  EXPECT_FALSE(is_h_length(d, g, 3));
}

TEST(HLength, MatchesFloyd) {
  SplitMix64 rng(7);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto g = random_vertexcap({.n = 8, .seed = seed, .max_len = 4, .density = 0.15});
    auto fw = oracle::floyd(g);
    auto d = random_demand(8, rng, 4);
    for (Length h : {3, 6, 9, 14}) {
      bool want = true;
      for (const auto& [k, x] : d.entries()) want = want && fw[k.first][k.second] <= h;
      EXPECT_EQ(is_h_length(d, g, h), want);
    }
  }
}

TEST(Respecting, Basics) {
  NodeWeighting A{1, 2, 0};
  EXPECT_TRUE(is_respecting(Demand{}, A));
  Demand d;
  d.add(0, 1, 2);
  EXPECT_FALSE(is_respecting(d, A));
  Demand e;
  e.add(0, 1, 1);
  e.add(2, 1, 0);
  EXPECT_TRUE(is_respecting(e, A));
}

TEST(Respecting, MatchesMarginals) {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto d = random_demand(5, rng, 6);
    NodeWeighting A(5);
    for (auto& a : A) a = Rational(rng.uniform(0, 30), 3);
    bool want = true;
    for (Vertex v = 0; v < 5; ++v) {
      Rational out = 0, in = 0;
      for (const auto& [k, x] : d.entries()) {
        if (k.first == v) out += x;
        if (k.second == v) in += x;
      }
      want = want && out <= A[v] && in <= A[v];
    }
    EXPECT_EQ(is_respecting(d, A), want);
  }
}

TEST(Symmetrize, Basics) {
  EXPECT_TRUE(symmetrize(Demand{}).empty());
  Demand s;
  s.add(0, 1, 3);
  s.add(1, 0, 3);
  EXPECT_EQ(symmetrize(s), s);
  Demand d;
  d.add(0, 1, 2);
  auto t = symmetrize(d);
  EXPECT_EQ(t.at(0, 1), 2);
  EXPECT_EQ(t.at(1, 0), 2);
  EXPECT_TRUE(is_symmetric(t));
  SplitMix64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto r = random_demand(6, rng, 8);
    auto q = symmetrize(r);
    EXPECT_TRUE(is_symmetric(q));
    for (const auto& [k, x] : r.entries()) EXPECT_GE(q.at(k.first, k.second), x);
  }
}

TEST(Separation, Basics) {
  DirectedGraph g(2, {{0, 1, 1, 1}, {1, 0, 1, 1}}, 1);
  Demand d;
  d.add(0, 1, 3);
  d.add(1, 0, 1);
  EXPECT_EQ(separation(zero_cut(g, 2), d, g, 1), 0);
  MovingCut full{2, {2, 2}, {}};
  // lengths become 3 > h = 2
  EXPECT_EQ(separation(full, d, g, 2), 4);
  // boundary: length exactly h is not separated
  EXPECT_EQ(separation(full, d, g, 3), 0);
}

TEST(Sparsity, Basics) {
  DirectedGraph g(2, {{0, 1, 1, 1}}, 1);
  Demand d;
  d.add(0, 1, 4);
  MovingCut c{1, {1}, {}};
  EXPECT_EQ(sparsity(c, d, g, 1), Rational(1, 4));
  Demand d2;
  d2.add(0, 1, 8);
  EXPECT_EQ(sparsity(c, d2, g, 1), Rational(1, 8));
  try {
    sparsity(zero_cut(g, 1), d, g, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::undefined_sparsity);
  }
}

TEST(Sparsity, MatchesDefinitionOnRandomInstances) {
  SplitMix64 rng(11);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto g = random_vertexcap({.n = 7, .seed = seed, .max_len = 3, .density = 0.2});
    const std::int64_t H = 4;
    MovingCut c = zero_cut(g, H);
    for (auto& x : c.edge) x = rng.uniform(0, H);
    for (auto& x : c.vertex) x = rng.uniform(0, H);
    auto d = random_demand(7, rng, 6);
    // oracle: rebuild G - C by hand, Floyd, sum
    std::vector<VertexAttr<std::int64_t>> vs = g.vertices();
    std::vector<UEdge<std::int64_t>> es = g.edges();
    Rational size = 0;
    for (Vertex v = 0; v < g.n(); ++v) {
      vs[v].length += c.vertex[v];
      size += Rational(g.vertex(v).capacity * c.vertex[v], H);
    }
    for (EdgeId e = 0; e < g.m(); ++e) {
      es[e].length += c.edge[e];
      size += Rational(g.edge(e).capacity * c.edge[e], H);
    }
    auto fw = oracle::floyd(VertexCapGraph(vs, es, 100));
    for (Length h : {4, 8, 12}) {
      Rational sep = 0;
      for (const auto& [k, x] : d.entries())
        if (fw[k.first][k.second] > h) sep += x;
      EXPECT_EQ(separation(c, d, g, h), sep);
      if (sep > 0) {
        EXPECT_EQ(sparsity(c, d, g, h), size / sep);
      }
    }
    // monotone in the cut and in h
    MovingCut bigger = c;
    for (auto& x : bigger.edge) x = std::min(H, x + 1);
    EXPECT_GE(separation(bigger, d, g, 6), separation(c, d, g, 6));
    EXPECT_GE(separation(c, d, g, 5), separation(c, d, g, 6));
  }
}

TEST(PathFlow, MetricsAndRoundTrip) {
  VertexCapGraph g({{1, 2}, {1, 1}, {2, 4}}, {{0, 1, 1, 2}, {1, 2, 3, 1}, {0, 2, 1, 3}}, 4);
  PathFlow f;
  f.add(Path{{0, 1, 2}, {0, 1}}, Rational(1, 2));
  f.add(Path{{0, 2}, {2}}, 1);
  EXPECT_EQ(flow_value(f), Rational(3, 2));
  // vertex 0 carries 3/2 against capacity 2; vertex 1 carries 1/2 of 1; edge 1 1/2 of 1
  EXPECT_EQ(congestion(f, g), Rational(3, 4));
  EXPECT_EQ(flow_length(f, g), 1 + 1 + 1 + 3 + 2);
  EXPECT_EQ(flow_step(f), 2u);
  auto d = routed_demand(f);
  EXPECT_EQ(d.at(0, 2), Rational(3, 2));
  // the flow itself routes its demand
  EXPECT_EQ(routed_demand(f), d);
  PathFlow f2 = f;
  for (auto& p : f2.paths) p.value *= 2;
  EXPECT_LE(congestion(f2, g), congestion(f, g) + congestion(f, g));
}
