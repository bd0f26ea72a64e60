#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "lcx/demand.hpp"
#include "lcx/graph.hpp"

namespace lcx {

// SplitMix64 (Steele, Lea, Flood 2014). Fixed so instances are reproducible
// from the seed alone.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi], rejection sampling to avoid modulo bias.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw Error(ErrorKind::precondition, "empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool coin(double p) { return unit() < p; }

  template <class T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[uniform(0, static_cast<std::int64_t>(i) - 1)]);
  }

 private:
  std::uint64_t state_;
};

struct GenParams {
  int n = 6;
  std::uint64_t seed = 0;
  std::int64_t max_len = 3;
  std::int64_t max_cap = 3;
  double density = 0.3;  // extra-edge probability for random kinds
  int cliques = 2;       // star-of-cliques / clique-chain
  std::int64_t hub_cap = 1;
  std::int64_t clique_cap = 100000;
};

// Strongly connected: a random Hamiltonian cycle plus random extra arcs.
inline DirectedGraph random_digraph(const GenParams& p) {
  SplitMix64 rng(p.seed);
  std::vector<Arc> es;
  std::vector<Vertex> order(p.n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  auto arc = [&](Vertex a, Vertex b) { es.push_back({a, b, rng.uniform(1, p.max_len), rng.uniform(1, p.max_cap)}); };
  if (p.n >= 2)
    for (int i = 0; i < p.n; ++i) arc(order[i], order[(i + 1) % p.n]);
  for (Vertex a = 0; a < p.n; ++a)
    for (Vertex b = 0; b < p.n; ++b)
      if (a != b && rng.coin(p.density)) arc(a, b);
  return DirectedGraph(p.n, std::move(es), std::max(p.max_len, p.max_cap));
}

// Connected: a random spanning tree plus random extra edges.
inline VertexCapGraph random_vertexcap(const GenParams& p) {
  SplitMix64 rng(p.seed);
  std::vector<VertexAttr<std::int64_t>> vs(p.n);
  for (auto& v : vs) v = {rng.uniform(1, p.max_len), rng.uniform(1, p.max_cap)};
  std::vector<UEdge<std::int64_t>> es;
  auto edge = [&](Vertex a, Vertex b) { es.push_back({a, b, rng.uniform(1, p.max_len), rng.uniform(1, p.max_cap)}); };
  for (Vertex v = 1; v < p.n; ++v) edge(static_cast<Vertex>(rng.uniform(0, v - 1)), v);
  for (Vertex a = 0; a < p.n; ++a)
    for (Vertex b = a + 1; b < p.n; ++b)
      if (rng.coin(p.density)) edge(a, b);
  return VertexCapGraph(std::move(vs), std::move(es), std::max(p.max_len, p.max_cap));
}

inline void add_biclique(std::vector<Arc>& es, Vertex first, int size) {
  for (Vertex a = first; a < first + size; ++a)
    for (Vertex b = first; b < first + size; ++b)
      if (a != b) es.push_back({a, b, 1, 1});
}

// Two bidirected unit cliques on n/2 vertices joined by one bidirected bridge.
inline DirectedGraph dumbbell(const GenParams& p) {
  if (p.n < 4 || p.n % 2 != 0) throw Error(ErrorKind::precondition, "dumbbell needs an even n >= 4");
  int k = p.n / 2;
  std::vector<Arc> es;
  add_biclique(es, 0, k);
  add_biclique(es, k, k);
  es.push_back({k - 1, k, 1, 1});
  es.push_back({k, k - 1, 1, 1});
  return DirectedGraph(p.n, std::move(es), 1);
}

// `cliques` bidirected unit cliques in a row, consecutive ones joined by one bridge.
inline DirectedGraph clique_chain(const GenParams& p) {
  if (p.cliques < 1 || p.n % p.cliques != 0 || p.n / p.cliques < 2)
    throw Error(ErrorKind::precondition, "clique-chain needs n divisible by cliques, clique size >= 2");
  int k = p.n / p.cliques;
  std::vector<Arc> es;
  for (int c = 0; c < p.cliques; ++c) add_biclique(es, c * k, k);
  for (int c = 0; c + 1 < p.cliques; ++c) {
    es.push_back({c * k + k - 1, (c + 1) * k, 1, 1});
    es.push_back({(c + 1) * k, c * k + k - 1, 1, 1});
  }
  return DirectedGraph(p.n, std::move(es), 1);
}

inline VertexCapGraph path_graph(const GenParams& p) {
  if (p.n < 1) throw Error(ErrorKind::precondition, "path needs n >= 1");
  std::vector<VertexAttr<std::int64_t>> vs(p.n, {1, 1});
  std::vector<UEdge<std::int64_t>> es;
  for (Vertex v = 0; v + 1 < p.n; ++v) es.push_back({v, v + 1, 1, 1});
  return VertexCapGraph(std::move(vs), std::move(es), 1);
}

// Hub 0 with capacity hub_cap, attached to the first vertex of each of
// `cliques` cliques over the remaining n-1 vertices. Clique vertices get
// capacity clique_cap, so the hub is the sparse vertex cut. Lengths random.
inline VertexCapGraph star_of_cliques(const GenParams& p) {
  if (p.cliques < 1 || (p.n - 1) % p.cliques != 0 || (p.n - 1) / p.cliques < 1)
    throw Error(ErrorKind::precondition, "star-of-cliques needs (n-1) divisible by cliques");
  SplitMix64 rng(p.seed);
  int k = (p.n - 1) / p.cliques;
  std::vector<VertexAttr<std::int64_t>> vs(p.n);
  vs[0] = {rng.uniform(1, p.max_len), p.hub_cap};
  for (Vertex v = 1; v < p.n; ++v) vs[v] = {rng.uniform(1, p.max_len), p.clique_cap};
  std::vector<UEdge<std::int64_t>> es;
  for (int c = 0; c < p.cliques; ++c) {
    Vertex first = 1 + c * k;
    es.push_back({0, first, rng.uniform(1, p.max_len), p.clique_cap});
    for (Vertex a = first; a < first + k; ++a)
      for (Vertex b = a + 1; b < first + k; ++b) es.push_back({a, b, rng.uniform(1, p.max_len), p.clique_cap});
  }
  return VertexCapGraph(std::move(vs), std::move(es), std::max({p.max_len, p.hub_cap, p.clique_cap}));
}

// Random simple paths of length <= h with distinct endpoints, scaled so the
// flow has congestion exactly min(1, natural congestion).
inline PathFlow random_feasible_flow(const VertexCapGraph& g, Length h, int paths, std::uint64_t seed) {
  std::vector<Path> all;
  std::vector<char> on(g.n(), 0);
  Path cur;
  auto dfs = [&](auto&& self, Vertex x, Length len) -> void {
    if (cur.verts.size() >= 2) all.push_back(cur);
    for (EdgeId e : g.incident(x)) {
      Vertex y = g.other(e, x);
      Length nl = len + g.edge(e).length + g.vertex(y).length;
      if (on[y] || nl > h) continue;
      on[y] = 1;
      cur.verts.push_back(y);
      cur.edges.push_back(e);
      self(self, y, nl);
      cur.verts.pop_back();
      cur.edges.pop_back();
      on[y] = 0;
    }
  };
  for (Vertex u = 0; u < g.n(); ++u) {
    if (g.vertex(u).length > h) continue;
    cur = Path{{u}, {}};
    on[u] = 1;
    dfs(dfs, u, g.vertex(u).length);
    on[u] = 0;
  }
  PathFlow f;
  if (all.empty()) return f;
  SplitMix64 rng(seed);
  for (int k = 0; k < paths; ++k)
    f.add(all[rng.uniform(0, static_cast<std::int64_t>(all.size()) - 1)], Rational(rng.uniform(1, 12), rng.uniform(1, 4)));
  Rational c = congestion(f, g);
  if (c > 1)
    for (auto& fp : f.paths) fp.value /= c;
  return f;
}

}  // namespace lcx
