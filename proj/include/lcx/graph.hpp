#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "lcx/rational.hpp"

namespace lcx {

using Vertex = std::int32_t;
using EdgeId = std::int32_t;
using Length = std::int64_t;

inline constexpr Length kUnreachable = std::numeric_limits<Length>::max();

inline bool reachable(Length d) { return d != kUnreachable; }

struct Arc {
  Vertex tail = 0;
  Vertex head = 0;
  Length length = 1;
  std::int64_t capacity = 1;
};

class DirectedGraph {
 public:
  DirectedGraph() = default;
  DirectedGraph(int n, std::vector<Arc> edges, std::int64_t N) : n_(n), N_(N), edges_(std::move(edges)) {
    if (n_ < 0) throw Error(ErrorKind::structural, "negative vertex count");
    if (N_ < 1) throw Error(ErrorKind::structural, "N must be positive");
    out_.assign(n_, {});
    in_.assign(n_, {});
    for (EdgeId e = 0; e < m(); ++e) {
      const Arc& a = edges_[e];
      if (a.tail < 0 || a.tail >= n_ || a.head < 0 || a.head >= n_)
        throw Error(ErrorKind::structural, "edge " + std::to_string(e) + " endpoint out of range");
      if (a.tail == a.head) throw Error(ErrorKind::structural, "self-loop at edge " + std::to_string(e));
      if (a.length < 1 || a.length > N_ || a.capacity < 1 || a.capacity > N_)
        throw Error(ErrorKind::structural, "edge " + std::to_string(e) + " length/capacity outside [1, N]");
      out_[a.tail].push_back(e);
      in_[a.head].push_back(e);
    }
  }

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  std::int64_t N() const { return N_; }
  const Arc& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<Arc>& edges() const { return edges_; }
  const std::vector<EdgeId>& out_edges(Vertex v) const { return out_.at(v); }
  const std::vector<EdgeId>& in_edges(Vertex v) const { return in_.at(v); }

 private:
  int n_ = 0;
  std::int64_t N_ = 1;
  std::vector<Arc> edges_;
  std::vector<std::vector<EdgeId>> out_, in_;
};

template <class Cap>
struct VertexAttr {
  Length length = 1;
  Cap capacity = 1;
};

template <class Cap>
struct UEdge {
  Vertex u = 0;
  Vertex v = 0;
  Length length = 1;
  Cap capacity = 1;
};

// Undirected graph with lengths and capacities on vertices and edges.
// Cap = int64 for input graphs; Rational for the shortcut graph G' whose star
// capacities come from node-weightings.
template <class Cap>
class BasicVertexCapGraph {
 public:
  BasicVertexCapGraph() = default;
  BasicVertexCapGraph(std::vector<VertexAttr<Cap>> vertices, std::vector<UEdge<Cap>> edges, std::int64_t N)
      : N_(N), vertices_(std::move(vertices)), edges_(std::move(edges)) {
    if (N_ < 1) throw Error(ErrorKind::structural, "N must be positive");
    const bool bounded = std::is_integral_v<Cap>;
    inc_.assign(vertices_.size(), {});
    for (Vertex v = 0; v < n(); ++v) {
      const auto& a = vertices_[v];
      if (a.length < 1 || !(a.capacity > 0) || (bounded && (a.length > N_ || a.capacity > N_)))
        throw Error(ErrorKind::structural, "vertex " + std::to_string(v) + " length/capacity outside [1, N]");
    }
    for (EdgeId e = 0; e < m(); ++e) {
      const auto& a = edges_[e];
      if (a.u < 0 || a.u >= n() || a.v < 0 || a.v >= n())
        throw Error(ErrorKind::structural, "edge " + std::to_string(e) + " endpoint out of range");
      if (a.u == a.v) throw Error(ErrorKind::structural, "self-loop at edge " + std::to_string(e));
      if (a.length < 1 || !(a.capacity > 0) || (bounded && (a.length > N_ || a.capacity > N_)))
        throw Error(ErrorKind::structural, "edge " + std::to_string(e) + " length/capacity outside [1, N]");
      inc_[a.u].push_back(e);
      inc_[a.v].push_back(e);
    }
  }

  int n() const { return static_cast<int>(vertices_.size()); }
  int m() const { return static_cast<int>(edges_.size()); }
  std::int64_t N() const { return N_; }
  const VertexAttr<Cap>& vertex(Vertex v) const { return vertices_.at(v); }
  const std::vector<VertexAttr<Cap>>& vertices() const { return vertices_; }
  const UEdge<Cap>& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<UEdge<Cap>>& edges() const { return edges_; }
  const std::vector<EdgeId>& incident(Vertex v) const { return inc_.at(v); }
  Vertex other(EdgeId e, Vertex v) const {
    const auto& a = edges_.at(e);
    return a.u == v ? a.v : a.u;
  }

 private:
  std::int64_t N_ = 1;
  std::vector<VertexAttr<Cap>> vertices_;
  std::vector<UEdge<Cap>> edges_;
  std::vector<std::vector<EdgeId>> inc_;
};

using VertexCapGraph = BasicVertexCapGraph<std::int64_t>;

using NodeWeighting = std::vector<Rational>;

inline Rational weight_size(const NodeWeighting& A) {
  Rational s = 0;
  for (const auto& a : A) s += a;
  return s;
}

inline std::vector<Vertex> support(const NodeWeighting& A) {
  std::vector<Vertex> s;
  for (Vertex v = 0; v < static_cast<Vertex>(A.size()); ++v)
    if (A[v] > 0) s.push_back(v);
  return s;
}

// ---------------------------------------------------------------- moving cuts

struct MovingCut {
  std::int64_t H = 1;
  std::vector<std::int64_t> edge;    // numerators in [0, H]
  std::vector<std::int64_t> vertex;  // empty for directed hosts

  bool is_zero() const {
    return std::all_of(edge.begin(), edge.end(), [](auto x) { return x == 0; }) &&
           std::all_of(vertex.begin(), vertex.end(), [](auto x) { return x == 0; });
  }
  Rational edge_value(EdgeId e) const { return Rational(edge.at(e), H); }
  Rational vertex_value(Vertex v) const { return Rational(vertex.at(v), H); }
};

inline MovingCut zero_cut(const DirectedGraph& g, std::int64_t H) {
  return MovingCut{H, std::vector<std::int64_t>(g.m(), 0), {}};
}

template <class Cap>
MovingCut zero_cut(const BasicVertexCapGraph<Cap>& g, std::int64_t H) {
  return MovingCut{H, std::vector<std::int64_t>(g.m(), 0), std::vector<std::int64_t>(g.n(), 0)};
}

namespace detail {
inline void check_numerators(const std::vector<std::int64_t>& xs, std::int64_t H, const char* what) {
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] < 0 || xs[i] > H)
      throw Error(ErrorKind::structural, std::string(what) + " numerator " + std::to_string(i) + " outside [0, H]");
}
}  // namespace detail

inline void validate_cut(const DirectedGraph& g, const MovingCut& c) {
  if (c.H < 1) throw Error(ErrorKind::structural, "cut denominator must be positive");
  if (static_cast<int>(c.edge.size()) != g.m() || !c.vertex.empty())
    throw Error(ErrorKind::structural, "cut does not match directed graph ids");
  detail::check_numerators(c.edge, c.H, "edge");
}

template <class Cap>
void validate_cut(const BasicVertexCapGraph<Cap>& g, const MovingCut& c) {
  if (c.H < 1) throw Error(ErrorKind::structural, "cut denominator must be positive");
  if (static_cast<int>(c.edge.size()) != g.m() || static_cast<int>(c.vertex.size()) != g.n())
    throw Error(ErrorKind::structural, "cut does not match vertex-capacitated graph ids");
  detail::check_numerators(c.edge, c.H, "edge");
  detail::check_numerators(c.vertex, c.H, "vertex");
}

// G - C: lengths raised by the numerators. N grows so the invariant still holds.
inline DirectedGraph apply_cut(const DirectedGraph& g, const MovingCut& c) {
  validate_cut(g, c);
  std::vector<Arc> es = g.edges();
  std::int64_t N = g.N();
  for (EdgeId e = 0; e < g.m(); ++e) {
    es[e].length += c.edge[e];
    N = std::max(N, es[e].length);
  }
  return DirectedGraph(g.n(), std::move(es), N);
}

template <class Cap>
BasicVertexCapGraph<Cap> apply_cut(const BasicVertexCapGraph<Cap>& g, const MovingCut& c) {
  validate_cut(g, c);
  auto vs = g.vertices();
  auto es = g.edges();
  std::int64_t N = g.N();
  for (Vertex v = 0; v < g.n(); ++v) {
    vs[v].length += c.vertex[v];
    N = std::max(N, vs[v].length);
  }
  for (EdgeId e = 0; e < g.m(); ++e) {
    es[e].length += c.edge[e];
    N = std::max(N, es[e].length);
  }
  return BasicVertexCapGraph<Cap>(std::move(vs), std::move(es), N);
}

// Numerators added and capped at H.
inline MovingCut clamp_add(const MovingCut& a, const MovingCut& b) {
  if (a.H != b.H || a.edge.size() != b.edge.size() || a.vertex.size() != b.vertex.size())
    throw Error(ErrorKind::structural, "cuts with different shape or denominator");
  MovingCut c = a;
  for (std::size_t i = 0; i < c.edge.size(); ++i) c.edge[i] = std::min(a.H, a.edge[i] + b.edge[i]);
  for (std::size_t i = 0; i < c.vertex.size(); ++i) c.vertex[i] = std::min(a.H, a.vertex[i] + b.vertex[i]);
  return c;
}

// Same cut values over a denominator that is a multiple of the current one.
inline MovingCut rescale_cut(const MovingCut& c, std::int64_t H) {
  if (H < c.H || H % c.H != 0) throw Error(ErrorKind::precondition, "new denominator must be a multiple of the old");
  MovingCut r = c;
  const std::int64_t f = H / c.H;
  r.H = H;
  for (auto& x : r.edge) x *= f;
  for (auto& x : r.vertex) x *= f;
  return r;
}

// |C| = sum_e u(e)C(e) (+ sum_v u(v)C(v))
inline Rational cut_size(const DirectedGraph& g, const MovingCut& c) {
  validate_cut(g, c);
  BigInt s = 0;
  for (EdgeId e = 0; e < g.m(); ++e) s += BigInt(g.edge(e).capacity) * c.edge[e];
  return Rational(s, BigInt(c.H));
}

template <class Cap>
Rational cut_size(const BasicVertexCapGraph<Cap>& g, const MovingCut& c) {
  validate_cut(g, c);
  Rational s = 0;
  for (EdgeId e = 0; e < g.m(); ++e) s += Rational(g.edge(e).capacity) * c.edge[e];
  for (Vertex v = 0; v < g.n(); ++v) s += Rational(g.vertex(v).capacity) * c.vertex[v];
  return s / c.H;
}

// deg_C(v) = sum of u(e)C(e) over incident edges (+ u(v)C(v) for vertex cuts).
inline NodeWeighting cut_degree(const DirectedGraph& g, const MovingCut& c) {
  validate_cut(g, c);
  NodeWeighting d(g.n(), Rational(0));
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (c.edge[e] == 0) continue;
    Rational x(g.edge(e).capacity * c.edge[e], c.H);
    d[g.edge(e).tail] += x;
    d[g.edge(e).head] += x;
  }
  return d;
}

template <class Cap>
NodeWeighting cut_degree(const BasicVertexCapGraph<Cap>& g, const MovingCut& c) {
  validate_cut(g, c);
  NodeWeighting d(g.n(), Rational(0));
  for (Vertex v = 0; v < g.n(); ++v)
    if (c.vertex[v] != 0) d[v] += Rational(g.vertex(v).capacity) * Rational(c.vertex[v], c.H);
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (c.edge[e] == 0) continue;
    Rational x = Rational(g.edge(e).capacity) * Rational(c.edge[e], c.H);
    d[g.edge(e).u] += x;
    d[g.edge(e).v] += x;
  }
  return d;
}

// ------------------------------------------------------------------ distances

struct ShortestPathTree {
  std::vector<Length> dist;
  std::vector<Vertex> pred;       // -1 at the source and unreachable vertices
  std::vector<EdgeId> pred_edge;  // -1 likewise
};

namespace detail {

// Dijkstra over an abstract adjacency; relax(x, f) must call f(y, edge, weight).
template <class Relax>
ShortestPathTree dijkstra(int n, Vertex src, Length src_dist, Relax relax) {
  ShortestPathTree t{std::vector<Length>(n, kUnreachable), std::vector<Vertex>(n, -1), std::vector<EdgeId>(n, -1)};
  using Item = std::pair<Length, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  t.dist[src] = src_dist;
  pq.push({src_dist, src});
  while (!pq.empty()) {
    auto [d, x] = pq.top();
    pq.pop();
    if (d != t.dist[x]) continue;
    relax(x, [&](Vertex y, EdgeId e, Length w) {
      Length nd = d + w;
      if (nd < t.dist[y]) {
        t.dist[y] = nd;
        t.pred[y] = x;
        t.pred_edge[y] = e;
        pq.push({nd, y});
      } else if (nd == t.dist[y] && y != src && (x < t.pred[y] || (x == t.pred[y] && e < t.pred_edge[y]))) {
        t.pred[y] = x;
        t.pred_edge[y] = e;
      }
    });
  }
  return t;
}

}  // namespace detail

inline void check_vertex(int n, Vertex v) {
  if (v < 0 || v >= n) throw Error(ErrorKind::structural, "vertex " + std::to_string(v) + " out of range");
}

// Distances from src along out-edges (or along in-edges toward src when reverse).
inline ShortestPathTree shortest_paths(const DirectedGraph& g, Vertex src, bool reverse = false) {
  check_vertex(g.n(), src);
  return detail::dijkstra(g.n(), src, 0, [&](Vertex x, auto&& f) {
    if (!reverse) {
      for (EdgeId e : g.out_edges(x)) f(g.edge(e).head, e, g.edge(e).length);
    } else {
      for (EdgeId e : g.in_edges(x)) f(g.edge(e).tail, e, g.edge(e).length);
    }
  });
}

// Vertex lengths count, endpoints included: dist(src, src) = l(src).
template <class Cap>
ShortestPathTree shortest_paths(const BasicVertexCapGraph<Cap>& g, Vertex src, bool = false) {
  check_vertex(g.n(), src);
  return detail::dijkstra(g.n(), src, g.vertex(src).length, [&](Vertex x, auto&& f) {
    for (EdgeId e : g.incident(x)) {
      Vertex y = g.other(e, x);
      f(y, e, g.edge(e).length + g.vertex(y).length);
    }
  });
}

template <class G>
Length dist(const G& g, Vertex u, Vertex v) {
  check_vertex(g.n(), v);
  return shortest_paths(g, u).dist[v];
}

inline Length round_trip_dist(const DirectedGraph& g, Vertex u, Vertex v) {
  Length a = dist(g, u, v), b = dist(g, v, u);
  if (!reachable(a) || !reachable(b)) return kUnreachable;
  return a + b;
}

template <class G>
std::vector<std::vector<Length>> all_pairs_dist(const G& g) {
  std::vector<std::vector<Length>> d(g.n());
  for (Vertex v = 0; v < g.n(); ++v) d[v] = shortest_paths(g, v).dist;
  return d;
}

template <class G>
std::vector<Vertex> ball(const G& g, Vertex v, Length r) {
  if (r < 0) throw Error(ErrorKind::precondition, "negative radius");
  auto t = shortest_paths(g, v);
  std::vector<Vertex> out;
  for (Vertex w = 0; w < g.n(); ++w)
    if (t.dist[w] <= r) out.push_back(w);
  return out;
}

// ---------------------------------------------------------------------- paths

// Edge ids are kept next to the vertices because parallel edges are allowed.
struct Path {
  std::vector<Vertex> verts;
  std::vector<EdgeId> edges;

  bool operator==(const Path&) const = default;
  auto operator<=>(const Path&) const = default;
};

inline void validate_path(const DirectedGraph& g, const Path& p) {
  if (p.verts.empty() || p.edges.size() + 1 != p.verts.size())
    throw Error(ErrorKind::structural, "malformed path");
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    EdgeId e = p.edges[i];
    if (e < 0 || e >= g.m()) throw Error(ErrorKind::structural, "path edge out of range");
    if (g.edge(e).tail != p.verts[i] || g.edge(e).head != p.verts[i + 1])
      throw Error(ErrorKind::structural, "path edge does not match its vertices");
  }
}

template <class Cap>
void validate_path(const BasicVertexCapGraph<Cap>& g, const Path& p) {
  if (p.verts.empty() || p.edges.size() + 1 != p.verts.size())
    throw Error(ErrorKind::structural, "malformed path");
  for (Vertex v : p.verts) check_vertex(g.n(), v);
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    EdgeId e = p.edges[i];
    if (e < 0 || e >= g.m()) throw Error(ErrorKind::structural, "path edge out of range");
    const auto& a = g.edge(e);
    bool ok = (a.u == p.verts[i] && a.v == p.verts[i + 1]) || (a.v == p.verts[i] && a.u == p.verts[i + 1]);
    if (!ok) throw Error(ErrorKind::structural, "path edge does not match its vertices");
  }
}

inline Length path_length(const DirectedGraph& g, const Path& p) {
  validate_path(g, p);
  Length s = 0;
  for (EdgeId e : p.edges) s += g.edge(e).length;
  return s;
}

template <class Cap>
Length path_length(const BasicVertexCapGraph<Cap>& g, const Path& p) {
  validate_path(g, p);
  Length s = 0;
  for (Vertex v : p.verts) s += g.vertex(v).length;
  for (EdgeId e : p.edges) s += g.edge(e).length;
  return s;
}

inline bool is_simple(const Path& p) {
  std::vector<Vertex> vs = p.verts;
  std::sort(vs.begin(), vs.end());
  return std::adjacent_find(vs.begin(), vs.end()) == vs.end();
}

// Removes cycles: whenever a vertex repeats, the closed detour between its visits is cut out.
inline Path loop_erase(const Path& p) {
  Path out;
  for (std::size_t i = 0; i < p.verts.size(); ++i) {
    Vertex v = p.verts[i];
    auto it = std::find(out.verts.begin(), out.verts.end(), v);
    if (it != out.verts.end()) {
      auto k = static_cast<std::size_t>(it - out.verts.begin());
      out.verts.resize(k + 1);
      out.edges.resize(k);
    } else {
      if (i > 0) out.edges.push_back(p.edges[i - 1]);
      out.verts.push_back(v);
    }
  }
  return out;
}

template <class G>
Path shortest_path(const G& g, Vertex u, Vertex v) {
  auto t = shortest_paths(g, u);
  check_vertex(g.n(), v);
  if (!reachable(t.dist[v])) throw Error(ErrorKind::precondition, "target unreachable");
  Path p;
  for (Vertex x = v; x != u; x = t.pred[x]) {
    p.verts.push_back(x);
    p.edges.push_back(t.pred_edge[x]);
  }
  p.verts.push_back(u);
  std::reverse(p.verts.begin(), p.verts.end());
  std::reverse(p.edges.begin(), p.edges.end());
  return p;
}

}  // namespace lcx
