#include <gtest/gtest.h>

#include <cmath>

#include "lcx/concurrent_flow.hpp"
#include "lcx/decomposition.hpp"
#include "lcx/random.hpp"
#include "oracles.hpp"

using namespace lcx;

namespace {

DirectedGraph complete_unit(int n) {
  std::vector<Arc> es;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = 0; b < n; ++b)
      if (a != b) es.push_back({a, b, 1, 1});
  return DirectedGraph(n, es, 1);
}

NodeWeighting ones(int n) { return NodeWeighting(n, Rational(1)); }

NodeWeighting vertex_caps(const VertexCapGraph& g) {
  NodeWeighting A(g.n());
  for (Vertex v = 0; v < g.n(); ++v) A[v] = g.vertex(v).capacity;
  return A;
}

// smallest s with s * alpha > 4 log2 n and h*s even
Length legal_s(int n, Length h, double alpha = 1.0) {
  Length s = 1;
  while (!(s * alpha > 4 * std::log2(static_cast<double>(std::max(n, 1)))) || (h * s) % 2 != 0) ++s;
  return s;
}

}  // namespace

TEST(Decompose, CompleteGraphNeedsNoCut) {
  auto g = complete_unit(5);
  auto seq = decompose_directed(g, ones(5), {.h = 2, .s = legal_s(5, 2), .phi = 0.001});
  EXPECT_TRUE(seq.steps.empty());
  EXPECT_TRUE(seq.combined.is_zero());
  EXPECT_EQ(seq.certificate.kind, "exponential-demand-routable");
  EXPECT_LE(seq.certificate.congestion, seq.certificate.gamma);
}

TEST(Decompose, DumbbellIsCutWithinBounds) {
  auto g = dumbbell({.n = 8});
  auto seq = decompose_directed(g, ones(8), {.h = 2, .s = legal_s(8, 2), .phi = 0.03});
  ASSERT_FALSE(seq.steps.empty());
  auto chk = check_sequence(g, seq);
  EXPECT_TRUE(chk.ok()) << (chk.failures.empty() ? "" : chk.failures[0]);
  // recompute the size bound independently
  long double bound = std::pow(2.0L, 10) * 0.03L * std::log(8.0L) * 8;
  Rational total = 0;
  for (const auto& st : seq.steps) total += cut_size(g, st.cut);
  EXPECT_EQ(total, seq.total_size);
  EXPECT_LE(to_long_double(total), bound);
  for (const auto& st : seq.steps)
    EXPECT_GE(st.potential_before - st.potential_mid,
              std::pow(2.0L, -10) / 0.03L * to_long_double(st.size) - 1e-6L);
  // the combined cut is clamped at H and still lengthens only
  for (auto x : seq.combined.edge) EXPECT_LE(x, seq.H);
}

TEST(Decompose, RandomSweepSatisfiesAllInequalities) {
  int cut_runs = 0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    int n = 4 + static_cast<int>(seed % 4);
    auto g = random_digraph({.n = n, .seed = seed, .max_len = 2, .max_cap = 2, .density = 0.15});
    NodeWeighting A(n);
    SplitMix64 rng(seed);
    for (auto& a : A) a = rng.uniform(0, 3);
    auto seq = decompose_directed(g, A, {.h = 2, .s = legal_s(n, 2), .phi = 0.05});
    auto chk = check_sequence(g, seq);
    EXPECT_TRUE(chk.ok()) << "seed " << seed;
    if (!seq.steps.empty()) ++cut_runs;
  }
  EXPECT_GT(cut_runs, 0);
}

TEST(Decompose, ParameterValidation) {
  auto g = dumbbell({.n = 8});
  EXPECT_THROW(decompose_directed(g, ones(8), {.h = 1, .s = 13, .phi = 0.1}), Error);  // odd h*s
  EXPECT_THROW(decompose_directed(g, ones(8), {.h = 2, .s = 12, .phi = 0.1}), Error);  // s too small
  EXPECT_THROW(decompose_directed(g, ones(8), {.h = 2, .s = 13, .phi = 1.5}), Error);
  EXPECT_THROW(decompose_directed(g, ones(7), {.h = 2, .s = 13, .phi = 0.1}), Error);
  try {
    decompose_directed(g, ones(8), {.h = 2, .s = 13, .phi = 0.1, .max_iters = 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::non_convergence);
  }
}

TEST(DecomposeLinked, ZeroLinkReproducesUnlinkedRun) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto g = seed == 0 ? dumbbell({.n = 8}) : random_digraph({.n = 6, .seed = seed, .max_len = 2, .density = 0.2});
    DecompParams p{.h = 2, .s = legal_s(g.n(), 2), .phi = 0.05};
    auto a = decompose_directed(g, ones(g.n()), p);
    auto b = decompose_linked(g, ones(g.n()), p, 0);
    ASSERT_EQ(a.steps.size(), b.steps.size());
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
      EXPECT_EQ(a.steps[i].cut.edge, b.steps[i].cut.edge);
      EXPECT_EQ(a.steps[i].potential_before, b.steps[i].potential_before);
      EXPECT_EQ(a.steps[i].potential_after, b.steps[i].potential_after);
    }
    EXPECT_EQ(a.combined.edge, b.combined.edge);
    EXPECT_EQ(a.total_size, b.total_size);
    EXPECT_EQ(a.final_A, b.final_A);
  }
}

TEST(DecomposeLinked, MaximalLinkKeepsBounds) {
  auto g = dumbbell({.n = 8});
  const double phi = 0.03;
  Rational ell = max_link_parameter(8, phi, 1.0);
  EXPECT_LE(to_long_double(ell), std::pow(2.0L, -12) / (phi * std::log(8.0L)));
  auto seq = decompose_linked(g, ones(8), {.h = 2, .s = 13, .phi = phi}, ell);
  ASSERT_FALSE(seq.steps.empty());
  auto chk = check_sequence(g, seq);
  EXPECT_TRUE(chk.ok()) << (chk.failures.empty() ? "" : chk.failures[0]);
  EXPECT_LE(to_long_double(seq.total_size), std::pow(2.0L, 11) * phi * std::log(8.0L) * 8);
  // weighting grew by ell * deg_C after every cut
  NodeWeighting A = ones(8);
  for (const auto& st : seq.steps) {
    auto deg = cut_degree(g, st.cut);
    for (int v = 0; v < 8; ++v) A[v] += ell * deg[v];
    EXPECT_GE(st.potential_before - st.potential_after,
              std::pow(2.0L, -11) / phi * to_long_double(st.size) - 1e-6L);
  }
  EXPECT_EQ(A, seq.final_A);
  EXPECT_THROW(decompose_linked(g, ones(8), {.h = 2, .s = 13, .phi = phi}, ell * 2), Error);
}

TEST(DecomposeVertex, ExpandingInputHasEmptyCut) {
  std::vector<VertexAttr<std::int64_t>> vs(3, {1, 5});
  VertexCapGraph g(vs, {{0, 1, 1, 5}, {1, 2, 1, 5}, {0, 2, 1, 5}}, 5);
  auto r = decompose_vertex(g, vertex_caps(g), {.h = 2, .s = legal_s(9, 2), .phi = 0.001});
  EXPECT_TRUE(r.cut.is_zero());
  EXPECT_EQ(r.cut_size, 0);
}

TEST(DecomposeVertex, StarOfCliquesCutsTheHub) {
  auto g = star_of_cliques({.n = 7, .seed = 1, .max_len = 1, .cliques = 2, .hub_cap = 1, .clique_cap = 100});
  auto r = decompose_vertex(g, vertex_caps(g), {.h = 2, .s = 20, .phi = 0.01});
  ASSERT_FALSE(r.cut.is_zero());
  EXPECT_GT(r.cut.vertex[0], 0);
  const auto& ec = r.reduction.graph;
  EXPECT_TRUE(is_normalized(r.ec.combined, r.reduction.map));
  for (const auto& st : r.ec.steps) EXPECT_TRUE(is_normalized(st.cut, r.reduction.map));
  auto chk = check_sequence(ec, r.ec);
  EXPECT_TRUE(chk.ok()) << (chk.failures.empty() ? "" : chk.failures[0]);
  // each vertex/edge value appears at least twice in the reduced cut
  EXPECT_LE(2 * r.cut_size, cut_size(ec, r.ec.combined));
  EXPECT_LE(to_long_double(r.ec.total_size), r.size_bound);
  // distances in G_vc - C_vc agree with the mids of G_ec - C_ec
  auto dv = oracle::floyd(apply_cut(g, r.cut));
  auto de = oracle::floyd(apply_cut(ec, r.ec.combined));
  for (Vertex u = 0; u < g.n(); ++u)
    for (Vertex v = 0; v < g.n(); ++v) {
      if (u != v) {
        EXPECT_EQ(dv[u][v], de[r.reduction.map.mid(u)][r.reduction.map.mid(v)]);
      }
    }
}

// Single-pair h-length demands in the final graph route at length h*s within
// the certificate congestion times the exponential-demand loss factor.
TEST(Decompose, CertificateAgreesWithSinglePairSweep) {
  int pairs = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    int n = 3 + static_cast<int>(seed % 4);
    auto g = seed % 3 == 0 ? complete_unit(n)
                           : random_digraph({.n = n, .seed = seed, .max_len = 2, .max_cap = 3, .density = 0.3});
    NodeWeighting A = ones(n);
    const Length h = 2;
    auto seq = decompose_directed(g, A, {.h = h, .s = legal_s(n, h), .phi = 0.02});
    auto gf = apply_cut(g, seq.combined);
    auto d = oracle::floyd(gf);
    const double bound = seq.certificate.loss_factor * seq.certificate.congestion_full;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) {
        if (d[u][v] > h || d[v][u] > h) continue;
        Demand D;
        Rational x = std::min(A[u], A[v]);
        D.add(u, v, x);
        D.add(v, u, x);
        ++pairs;
        EXPECT_LE(min_congestion(gf, D, seq.H), bound + 1e-9) << "seed " << seed << " pair " << u << "," << v;
      }
  }
  EXPECT_GT(pairs, 10);
}
