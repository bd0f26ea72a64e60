#pragma once

#include <array>
#include <vector>

#include "lcx/demand.hpp"

namespace lcx {

// Vertex v of the vertex-capacitated graph becomes v_in = 3v, v_mid = 3v+1,
// v_out = 3v+2. Inner edges of v are 3v (in->mid), 3v+1 (mid->out),
// 3v+2 (in->out). Undirected edge e = {a, b} becomes 3n+2e (a_out->b_in) and
// 3n+2e+1 (b_out->a_in).
struct ReductionMap {
  int n = 0;  // original vertex count
  int m = 0;  // original edge count
  std::vector<Vertex> original_u, original_v;  // endpoints of original edges

  Vertex in(Vertex v) const { return 3 * v; }
  Vertex mid(Vertex v) const { return 3 * v + 1; }
  Vertex out(Vertex v) const { return 3 * v + 2; }
  std::array<EdgeId, 3> inner(Vertex v) const { return {3 * v, 3 * v + 1, 3 * v + 2}; }
  // Outer edge leaving `from` for original edge e.
  EdgeId outer(EdgeId e, Vertex from) const { return 3 * n + 2 * e + (from == original_u[e] ? 0 : 1); }
  std::array<EdgeId, 2> outer_pair(EdgeId e) const { return {3 * n + 2 * e, 3 * n + 2 * e + 1}; }

  // Inverse lookups on the reduced graph.
  Vertex owner(Vertex x) const { return x / 3; }
  int role(Vertex x) const { return x % 3; }  // 0 in, 1 mid, 2 out
  bool is_inner(EdgeId e) const { return e < 3 * n; }
  EdgeId original_edge(EdgeId e) const { return (e - 3 * n) / 2; }
};

struct Reduction {
  DirectedGraph graph;
  NodeWeighting weights;
  ReductionMap map;
};

inline Reduction reduce(const VertexCapGraph& g, const NodeWeighting& A = {}) {
  if (!A.empty() && static_cast<int>(A.size()) != g.n())
    throw Error(ErrorKind::structural, "node-weighting size does not match graph");
  ReductionMap map;
  map.n = g.n();
  map.m = g.m();
  std::vector<Arc> es;
  es.reserve(3 * g.n() + 2 * g.m());
  for (Vertex v = 0; v < g.n(); ++v) {
    const auto& a = g.vertex(v);
    es.push_back({map.in(v), map.mid(v), a.length, a.capacity});
    es.push_back({map.mid(v), map.out(v), a.length, a.capacity});
    es.push_back({map.in(v), map.out(v), a.length, a.capacity});
  }
  for (EdgeId e = 0; e < g.m(); ++e) {
    const auto& a = g.edge(e);
    map.original_u.push_back(a.u);
    map.original_v.push_back(a.v);
    es.push_back({map.out(a.u), map.in(a.v), a.length, a.capacity});
    es.push_back({map.out(a.v), map.in(a.u), a.length, a.capacity});
  }
  NodeWeighting Aec(3 * g.n(), Rational(0));
  for (Vertex v = 0; v < static_cast<Vertex>(A.size()); ++v) Aec[map.mid(v)] = A[v];
  return {DirectedGraph(3 * g.n(), std::move(es), g.N()), std::move(Aec), std::move(map)};
}

template <class T>
BasicDemand<T> push_demand(const BasicDemand<T>& d, const ReductionMap& map) {
  BasicDemand<T> r;
  for (const auto& [k, x] : d.entries()) r.add(map.mid(k.first), map.mid(k.second), x);
  return r;
}

inline void check_ec_cut(const MovingCut& c, const ReductionMap& map) {
  if (static_cast<int>(c.edge.size()) != 3 * map.n + 2 * map.m || !c.vertex.empty())
    throw Error(ErrorKind::structural, "cut is not defined on the reduced graph");
}

inline bool is_normalized(const MovingCut& c, const ReductionMap& map) {
  check_ec_cut(c, map);
  for (Vertex v = 0; v < map.n; ++v) {
    auto in = map.inner(v);
    if (c.edge[in[0]] != c.edge[in[1]] || c.edge[in[1]] != c.edge[in[2]]) return false;
  }
  for (EdgeId e = 0; e < map.m; ++e) {
    auto p = map.outer_pair(e);
    if (c.edge[p[0]] != c.edge[p[1]]) return false;
  }
  return true;
}

inline MovingCut normalize_cut(const MovingCut& c, const ReductionMap& map) {
  check_ec_cut(c, map);
  MovingCut r = c;
  for (Vertex v = 0; v < map.n; ++v) {
    auto in = map.inner(v);
    auto x = std::max({c.edge[in[0]], c.edge[in[1]], c.edge[in[2]]});
    for (EdgeId e : in) r.edge[e] = x;
  }
  for (EdgeId e = 0; e < map.m; ++e) {
    auto p = map.outer_pair(e);
    auto x = std::max(c.edge[p[0]], c.edge[p[1]]);
    r.edge[p[0]] = r.edge[p[1]] = x;
  }
  return r;
}

inline MovingCut pull_cut(const MovingCut& c, const ReductionMap& map) {
  if (!is_normalized(c, map)) throw Error(ErrorKind::precondition, "pull_cut needs a normalized cut");
  MovingCut r{c.H, std::vector<std::int64_t>(map.m), std::vector<std::int64_t>(map.n)};
  for (Vertex v = 0; v < map.n; ++v) r.vertex[v] = c.edge[map.inner(v)[0]];
  for (EdgeId e = 0; e < map.m; ++e) r.edge[e] = c.edge[map.outer_pair(e)[0]];
  return r;
}

inline MovingCut push_cut(const MovingCut& c, const ReductionMap& map) {
  if (static_cast<int>(c.vertex.size()) != map.n || static_cast<int>(c.edge.size()) != map.m)
    throw Error(ErrorKind::structural, "cut is not defined on the original graph");
  MovingCut r{c.H, std::vector<std::int64_t>(3 * map.n + 2 * map.m), {}};
  for (Vertex v = 0; v < map.n; ++v)
    for (EdgeId e : map.inner(v)) r.edge[e] = c.vertex[v];
  for (EdgeId e = 0; e < map.m; ++e)
    for (EdgeId x : map.outer_pair(e)) r.edge[x] = c.edge[e];
  return r;
}

// vc path x0..xk becomes x0_mid, x0_out, x1_in, x1_out, ..., xk_in, xk_mid.
inline Path push_path(const Path& p, const ReductionMap& map) {
  if (p.verts.empty() || p.edges.size() + 1 != p.verts.size()) throw Error(ErrorKind::structural, "malformed path");
  Path r;
  const std::size_t k = p.verts.size() - 1;
  r.verts.push_back(map.mid(p.verts[0]));
  if (k == 0) return r;
  for (std::size_t i = 0; i <= k; ++i) {
    Vertex x = p.verts[i];
    if (i == 0) {
      r.edges.push_back(map.inner(x)[1]);
      r.verts.push_back(map.out(x));
    } else {
      EdgeId e = p.edges[i - 1];
      if (e < 0 || e >= map.m) throw Error(ErrorKind::structural, "path edge out of range");
      Vertex prev = p.verts[i - 1];
      bool fits = (map.original_u[e] == prev && map.original_v[e] == x) || (map.original_v[e] == prev && map.original_u[e] == x);
      if (!fits) throw Error(ErrorKind::structural, "path edge does not match its vertices");
      r.edges.push_back(map.outer(e, prev));
      r.verts.push_back(map.in(x));
      if (i == k) {
        r.edges.push_back(map.inner(x)[0]);
        r.verts.push_back(map.mid(x));
      } else {
        r.edges.push_back(map.inner(x)[2]);
        r.verts.push_back(map.out(x));
      }
    }
  }
  return r;
}

// Inverse of push_path. Accepts any legal gadget traversal: a path starts at
// some mid vertex, passes each intermediate gadget in->out directly or via mid,
// and ends at a mid vertex.
inline Path pull_path(const Path& p, const ReductionMap& map) {
  auto bad = [](const char* why) { return Error(ErrorKind::structural, std::string("path does not respect gadget structure: ") + why); };
  if (p.verts.empty() || p.edges.size() + 1 != p.verts.size()) throw bad("malformed");
  if (map.role(p.verts.front()) != 1 || map.role(p.verts.back()) != 1) throw bad("endpoints must be mid vertices");
  Path r;
  r.verts.push_back(map.owner(p.verts[0]));
  std::size_t i = 0;
  const std::size_t k = p.verts.size() - 1;
  if (k == 0) return r;
  // leave the first gadget: mid -> out
  if (p.edges[0] != map.inner(map.owner(p.verts[0]))[1]) throw bad("first step must be mid->out");
  i = 1;
  while (i < k) {
    // at some x_out, take an outer edge
    EdgeId e = p.edges[i];
    if (map.is_inner(e)) throw bad("expected an outer edge");
    EdgeId orig = map.original_edge(e);
    Vertex from = map.owner(p.verts[i]);
    Vertex to = map.owner(p.verts[i + 1]);
    if (map.outer(orig, from) != e || map.role(p.verts[i + 1]) != 0) throw bad("outer edge mismatch");
    r.edges.push_back(orig);
    r.verts.push_back(to);
    ++i;  // at to_in
    auto in = map.inner(to);
    if (i + 1 <= k && p.edges[i] == in[0]) {
      ++i;  // at to_mid
      if (i == k) break;
      if (p.edges[i] != in[1]) throw bad("mid must continue to out");
      ++i;
    } else if (i + 1 <= k && p.edges[i] == in[2]) {
      ++i;
    } else {
      throw bad("gadget entered but not traversed");
    }
  }
  return r;
}

template <class T>
BasicPathFlow<T> push_flow(const BasicPathFlow<T>& f, const ReductionMap& map) {
  BasicPathFlow<T> r;
  for (const auto& fp : f.paths) r.add(push_path(fp.path, map), fp.value);
  return r;
}

template <class T>
BasicPathFlow<T> pull_flow(const BasicPathFlow<T>& f, const ReductionMap& map) {
  BasicPathFlow<T> r;
  for (const auto& fp : f.paths) r.add(pull_path(fp.path, map), fp.value);
  return r;
}

}  // namespace lcx
