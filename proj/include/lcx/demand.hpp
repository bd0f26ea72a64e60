#pragma once

#include <map>
#include <type_traits>
#include <utility>
#include <vector>

#include "lcx/graph.hpp"

namespace lcx {

template <class T>
T from_rational(const Rational& r) {
  if constexpr (std::is_same_v<T, Rational>) {
    return r;
  } else {
    return r.convert_to<T>();
  }
}

inline Rational to_rational(const Rational& r) { return r; }
inline Rational to_rational(double x) { return exact_rational(x); }

// Sparse nonnegative map over ordered pairs; diagonal entries never stored.
template <class T>
class BasicDemand {
 public:
  using Pair = std::pair<Vertex, Vertex>;

  void add(Vertex u, Vertex v, const T& x) {
    if (x < 0) throw Error(ErrorKind::precondition, "negative demand");
    if (u == v || x == 0) return;
    entries_[{u, v}] += x;
  }
  void set(Vertex u, Vertex v, const T& x) {
    if (x < 0) throw Error(ErrorKind::precondition, "negative demand");
    if (u == v || x == 0) {
      entries_.erase({u, v});
      return;
    }
    entries_[{u, v}] = x;
  }
  T at(Vertex u, Vertex v) const {
    auto it = entries_.find({u, v});
    return it == entries_.end() ? T(0) : it->second;
  }
  const std::map<Pair, T>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }

  T total() const {
    T s = 0;
    for (const auto& [k, x] : entries_) s += x;
    return s;
  }
  T out_sum(Vertex v) const {
    T s = 0;
    for (const auto& [k, x] : entries_)
      if (k.first == v) s += x;
    return s;
  }
  T in_sum(Vertex v) const {
    T s = 0;
    for (const auto& [k, x] : entries_)
      if (k.second == v) s += x;
    return s;
  }
  Vertex max_vertex() const {
    Vertex m = -1;
    for (const auto& [k, x] : entries_) m = std::max({m, k.first, k.second});
    return m;
  }

  bool operator==(const BasicDemand&) const = default;

 private:
  std::map<Pair, T> entries_;
};

using Demand = BasicDemand<Rational>;
using RealDemand = BasicDemand<double>;

inline RealDemand to_real(const Demand& d) {
  RealDemand r;
  for (const auto& [k, x] : d.entries()) r.add(k.first, k.second, to_double(x));
  return r;
}

inline Demand to_exact(const RealDemand& d) {
  Demand r;
  for (const auto& [k, x] : d.entries()) r.add(k.first, k.second, exact_rational(x));
  return r;
}

template <class T, class G>
void check_hosted(const BasicDemand<T>& d, const G& g) {
  if (d.max_vertex() >= g.n()) throw Error(ErrorKind::structural, "demand vertex outside host graph");
  for (const auto& [k, x] : d.entries())
    if (k.first < 0 || k.second < 0) throw Error(ErrorKind::structural, "negative vertex id in demand");
}

// Groups support pairs by source so each source needs one Dijkstra run.
template <class T>
std::map<Vertex, std::vector<std::pair<Vertex, T>>> by_source(const BasicDemand<T>& d) {
  std::map<Vertex, std::vector<std::pair<Vertex, T>>> m;
  for (const auto& [k, x] : d.entries()) m[k.first].push_back({k.second, x});
  return m;
}

template <class T, class G>
bool is_h_length(const BasicDemand<T>& d, const G& g, Length h) {
  check_hosted(d, g);
  for (const auto& [s, row] : by_source(d)) {
    auto t = shortest_paths(g, s);
    for (const auto& [v, x] : row)
      if (t.dist[v] > h) return false;
  }
  return true;
}

template <class T>
bool is_respecting(const BasicDemand<T>& d, const NodeWeighting& A) {
  std::vector<T> out(A.size(), T(0)), in(A.size(), T(0));
  for (const auto& [k, x] : d.entries()) {
    if (k.first >= static_cast<Vertex>(A.size()) || k.second >= static_cast<Vertex>(A.size())) return false;
    out[k.first] += x;
    in[k.second] += x;
  }
  for (std::size_t v = 0; v < A.size(); ++v) {
    T a = from_rational<T>(A[v]);
    if (out[v] > a || in[v] > a) return false;
  }
  return true;
}

template <class T>
bool is_symmetric(const BasicDemand<T>& d) {
  for (const auto& [k, x] : d.entries())
    if (d.at(k.second, k.first) != x) return false;
  return true;
}

template <class T>
BasicDemand<T> symmetrize(const BasicDemand<T>& d) {
  BasicDemand<T> r;
  for (const auto& [k, x] : d.entries()) {
    T y = std::max(x, d.at(k.second, k.first));
    r.set(k.first, k.second, y);
    r.set(k.second, k.first, y);
  }
  return r;
}

// sep_h(C, D): demand between pairs that are more than h apart in G - C.
template <class T, class G>
T separation(const MovingCut& c, const BasicDemand<T>& d, const G& g, Length h) {
  check_hosted(d, g);
  G gc = apply_cut(g, c);
  T s = 0;
  for (const auto& [src, row] : by_source(d)) {
    auto t = shortest_paths(gc, src);
    for (const auto& [v, x] : row)
      if (t.dist[v] > h) s += x;
  }
  return s;
}

template <class T, class G>
T sparsity(const MovingCut& c, const BasicDemand<T>& d, const G& g, Length h) {
  T sep = separation(c, d, g, h);
  if (sep == 0) throw Error(ErrorKind::undefined_sparsity, "cut separates no demand");
  return from_rational<T>(cut_size(g, c)) / sep;
}

// -------------------------------------------------------------------- flows

template <class T>
struct FlowPath {
  Path path;
  T value = 0;
};

template <class T>
struct BasicPathFlow {
  std::vector<FlowPath<T>> paths;

  void add(Path p, const T& x) {
    if (x < 0) throw Error(ErrorKind::precondition, "negative flow value");
    if (x == 0) return;
    paths.push_back({std::move(p), x});
  }
  bool empty() const { return paths.empty(); }
};

using PathFlow = BasicPathFlow<Rational>;
using RealPathFlow = BasicPathFlow<double>;

template <class T>
T flow_value(const BasicPathFlow<T>& f) {
  T s = 0;
  for (const auto& p : f.paths) s += p.value;
  return s;
}

template <class T>
BasicDemand<T> routed_demand(const BasicPathFlow<T>& f) {
  BasicDemand<T> d;
  for (const auto& p : f.paths) d.add(p.path.verts.front(), p.path.verts.back(), p.value);
  return d;
}

template <class T>
struct Loads {
  std::vector<T> vertex;
  std::vector<T> edge;
};

// Raw per-element loads; a walk visiting an element twice loads it twice.
template <class T, class G>
Loads<T> flow_loads(const BasicPathFlow<T>& f, const G& g) {
  Loads<T> l{std::vector<T>(g.n(), T(0)), std::vector<T>(g.m(), T(0))};
  for (const auto& fp : f.paths) {
    validate_path(g, fp.path);
    for (Vertex v : fp.path.verts) l.vertex[v] += fp.value;
    for (EdgeId e : fp.path.edges) l.edge[e] += fp.value;
  }
  return l;
}

template <class T>
T congestion(const BasicPathFlow<T>& f, const DirectedGraph& g) {
  auto l = flow_loads(f, g);
  T c = 0;
  for (EdgeId e = 0; e < g.m(); ++e) c = std::max(c, T(l.edge[e] / T(g.edge(e).capacity)));
  return c;
}

// Vertex-capacitated hosts count vertices as well as edges.
template <class T, class Cap>
T congestion(const BasicPathFlow<T>& f, const BasicVertexCapGraph<Cap>& g) {
  auto l = flow_loads(f, g);
  T c = 0;
  for (Vertex v = 0; v < g.n(); ++v) c = std::max(c, T(l.vertex[v] / from_rational<T>(Rational(g.vertex(v).capacity))));
  for (EdgeId e = 0; e < g.m(); ++e) c = std::max(c, T(l.edge[e] / from_rational<T>(Rational(g.edge(e).capacity))));
  return c;
}

template <class T, class G>
Length flow_length(const BasicPathFlow<T>& f, const G& g) {
  Length m = 0;
  for (const auto& p : f.paths) m = std::max(m, path_length(g, p.path));
  return m;
}

template <class T>
std::size_t flow_step(const BasicPathFlow<T>& f) {
  std::size_t m = 0;
  for (const auto& p : f.paths) m = std::max(m, p.path.edges.size());
  return m;
}

}  // namespace lcx
