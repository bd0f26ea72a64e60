#include <gtest/gtest.h>

#include "lcx/cover.hpp"
#include "lcx/random.hpp"
#include "oracles.hpp"

using namespace lcx;

namespace {

// Independent invariant check from Floyd distances.
template <class G>
void expect_cover_invariants(const G& g, const NeighborhoodCover& c) {
  auto d = oracle::floyd(g);
  const int n = g.n();
  for (const auto& cl : c.clusterings) {
    std::vector<int> seen(n, 0);
    for (const auto& S : cl)
      for (Vertex v : S) EXPECT_EQ(seen[v]++, 0);
    for (const auto& S : cl)
      for (Vertex a : S)
        for (Vertex b : S) EXPECT_LE(d[a][b], (2 * c.k - 1) * c.h_cov);
  }
  for (Vertex v = 0; v < n; ++v) {
    bool ok = false;
    for (const auto& cl : c.clusterings)
      for (const auto& S : cl) {
        bool all = true;
        for (Vertex u = 0; u < n; ++u)
          if (d[v][u] <= c.h_cov && !std::binary_search(S.begin(), S.end(), u)) all = false;
        ok = ok || all;
      }
    bool empty_ball = true;
    for (Vertex u = 0; u < n; ++u) empty_ball = empty_ball && d[v][u] > c.h_cov;
    EXPECT_TRUE(ok || empty_ball) << "vertex " << v;
  }
}

}  // namespace

TEST(Cover, SingleVertex) {
  auto g = path_graph({.n = 1});
  auto c = build_cover(g, 1, 2);
  ASSERT_EQ(c.width(), 1);
  ASSERT_EQ(c.clusterings[0].size(), 1u);
  EXPECT_EQ(c.clusterings[0][0], Cluster{0});
}

TEST(Cover, PathGraph) {
  auto g = path_graph({.n = 5});
  for (Length h : {1, 2, 3, 5}) {
    auto c = build_cover(g, h, 2);
    EXPECT_EQ(c.h_diam, 3 * h);
    expect_cover_invariants(g, c);
    EXPECT_TRUE(verify_cover(g, c).ok());
  }
}

TEST(Cover, RandomGraphsHoldInvariants) {
  int max_width = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    int n = 2 + static_cast<int>(seed % 11);
    auto g = random_vertexcap({.n = n, .seed = seed, .max_len = 3, .density = 0.2});
    for (int k : {2, 3, 4}) {
      Length h = 1 + static_cast<Length>(seed % 5);
      auto c = build_cover(g, h, k);
      expect_cover_invariants(g, c);
      max_width = std::max(max_width, verify_cover(g, c).width);
    }
  }
  EXPECT_LE(max_width, 12);
}

TEST(Cover, LongVerticesAreTriviallyCovered) {
  VertexCapGraph g({{5, 1}, {1, 1}, {1, 1}}, {{0, 1, 1, 1}, {1, 2, 1, 1}}, 5);
  auto c = build_cover(g, 2, 2);
  expect_cover_invariants(g, c);
  for (const auto& cl : c.clusterings)
    for (const auto& S : cl) EXPECT_FALSE(S.size() == 1 && S[0] == 0);
}

TEST(Cover, VerifierNamesCounterexamples) {
  auto g = path_graph({.n = 5});
  NeighborhoodCover bad{3, 2, 9, {{{0, 1, 2}}}};
  auto r = verify_cover(g, bad);
  EXPECT_FALSE(r.covering);
  ASSERT_TRUE(r.uncovered.has_value());
  EXPECT_EQ(*r.uncovered, 2);  // ball(2,3) = {1,2,3}
  NeighborhoodCover wide{1, 2, 3, {{{0, 1, 2, 3, 4}}}};
  auto w = verify_cover(g, wide);
  EXPECT_TRUE(w.covering);
  EXPECT_FALSE(w.diameter);
  ASSERT_TRUE(w.far_pair.has_value());
  auto d = oracle::floyd(g);
  EXPECT_GT(d[w.far_pair->first][w.far_pair->second], 3);
  NeighborhoodCover overlap{1, 2, 3, {{{0, 1}, {1, 2}}}};
  EXPECT_FALSE(verify_cover(g, overlap).disjoint);
}

TEST(Cover, Errors) {
  auto g = path_graph({.n = 4});
  EXPECT_THROW(build_cover(g, 1, 1), Error);
  EXPECT_THROW(build_cover(g, 0, 2), Error);
  auto p5 = path_graph({.n = 5});
  EXPECT_GE(build_cover(p5, 3, 2).width(), 2);
  try {
    build_cover(p5, 3, 2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::width_ceiling);
  }
}
