#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "lcx/concurrent_flow.hpp"
#include "lcx/cover.hpp"
#include "lcx/decomposition.hpp"

namespace lcx {

using ShortcutGraph = BasicVertexCapGraph<Rational>;

struct ShortcutParams {
  double epsilon = 1.0 / 18;  // s = 1/epsilon, rounded to the nearest integer
  Length h = 8;
  double alpha = 1.0;
  std::optional<double> phi = {};  // default: shortcut_default_phi
  std::optional<int> k = {};  // cover parameter; default: largest k with 4(2k-1) <= s
  int level_ceiling = 16;
  int max_iters = 1000;
  std::optional<int> width_ceiling = {};
  std::size_t path_cap = path_cap_from_env();
};

struct StarGraph {
  int level = 0;
  int scale = 1;  // j, 1-based
  int clustering = 0;
  int cluster = 0;
  Vertex center = 0;              // id in G', >= n
  std::vector<Vertex> leaves;     // supp(A_i) inside the cluster, sorted
  std::vector<EdgeId> edges;      // edges[k] joins leaves[k] to the center
  Length h_star = 1;              // leaf edge length
  Rational center_capacity = 0;
  std::vector<Rational> leaf_capacity;

  EdgeId edge_to(Vertex v) const {
    auto it = std::lower_bound(leaves.begin(), leaves.end(), v);
    if (it == leaves.end() || *it != v) throw Error(ErrorKind::internal, "vertex is not a leaf of this star");
    return edges[static_cast<std::size_t>(it - leaves.begin())];
  }
};

struct ScaleLevel {
  int j = 1;
  Length h_j = 2, h_cov = 8, h_diam = 8;
  VertexDecomposition decomposition;
  MovingCut cut;             // C_{i+1,j}, denominator h_diam * s
  VertexCapGraph cut_graph;  // G - C_{i+1,j}
  NeighborhoodCover cover;
  std::vector<int> stars;
  std::vector<std::vector<int>> star_index;  // [clustering][cluster] -> star id or -1
};

struct HierarchyLevel {
  NodeWeighting A;
  std::vector<ScaleLevel> scales;
};

struct ShortcutHierarchy {
  VertexCapGraph g;
  Length h = 2, s = 1;
  double alpha = 1, phi = 0;
  int k = 2;
  int scales = 1;  // ceil(log2 h)
  std::vector<HierarchyLevel> levels;
  NodeWeighting final_A;  // A_{d+1}
  std::vector<StarGraph> stars;
  ShortcutGraph gprime;
  int width = 0;  // largest cover width

  int d() const { return static_cast<int>(levels.size()) - 1; }
  int n() const { return g.n(); }
  std::size_t shortcut_size() const { return static_cast<std::size_t>(gprime.m() - g.m()); }
  const ScaleLevel& at(int i, int j) const { return levels.at(i).scales.at(j - 1); }

  // Smallest j with 2^j >= len.
  int scale_for(Length len) const {
    for (int j = 1; j <= scales; ++j)
      if ((Length(1) << j) >= len) return j;
    throw Error(ErrorKind::precondition, "path length " + std::to_string(len) + " above the largest scale");
  }

  // Lowest (clustering, cluster) whose star holds both u and v, or -1.
  int star_of(int i, int j, Vertex u, Vertex v) const {
    const auto& sc = at(i, j);
    for (std::size_t c = 0; c < sc.cover.clusterings.size(); ++c)
      for (std::size_t q = 0; q < sc.cover.clusterings[c].size(); ++q) {
        const auto& S = sc.cover.clusterings[c][q];
        if (!std::binary_search(S.begin(), S.end(), u) || !std::binary_search(S.begin(), S.end(), v)) continue;
        int id = sc.star_index[c][q];
        if (id < 0) continue;
        const auto& L = stars[id].leaves;
        if (std::binary_search(L.begin(), L.end(), u) && std::binary_search(L.begin(), L.end(), v)) return id;
      }
    return -1;
  }

  std::vector<UEdge<Rational>> shortcut_edges() const {
    return {gprime.edges().begin() + g.m(), gprime.edges().end()};
  }
};

namespace detail {

inline Length resolve_s(double epsilon) {
  if (!(epsilon > 0) || epsilon > 1) throw Error(ErrorKind::precondition, "epsilon must lie in (0, 1]");
  return std::max<Length>(1, std::llround(1.0 / epsilon));
}

inline int ceil_log2(Length h) {
  int j = 0;
  while ((Length(1) << j) < h) ++j;
  return j;
}

// Cut slack of the vertex decomposition: |C| <= kappa phi |A|.
inline long double vertex_kappa(int n, double alpha) {
  return 9 * pow2(8 * static_cast<long double>(alpha) + 2) * std::log(3.0L * n);
}

}  // namespace detail

// 1/(n^eps kappa), further divided by 8 s^2 ceil(log2 h) so that
// |A_{i+1}| <= 8 s^2 sum_j |C_{i+1,j}| <= |A_i| / n^eps.
inline double shortcut_default_phi(int n, Length s, Length h, double alpha) {
  long double k = detail::vertex_kappa(n, alpha);
  long double ne = std::pow(static_cast<long double>(n), 1.0L / static_cast<long double>(s));
  return static_cast<double>(1.0L / (ne * k * 8 * s * s * std::max(1, detail::ceil_log2(h))));
}

inline int shortcut_default_k(Length s) { return std::max<int>(2, static_cast<int>((s / 4 + 1) / 2)); }

inline ShortcutHierarchy build_shortcut(const VertexCapGraph& g, const ShortcutParams& p) {
  if (g.n() < 1) throw Error(ErrorKind::precondition, "graph has no vertices");
  if (p.h < 2) throw Error(ErrorKind::precondition, "h must be at least 2");
  ShortcutHierarchy H;
  H.g = g;
  H.h = p.h;
  H.s = detail::resolve_s(p.epsilon);
  H.alpha = p.alpha;
  H.scales = detail::ceil_log2(p.h);
  H.phi = p.phi ? *p.phi : shortcut_default_phi(g.n(), H.s, p.h, p.alpha);
  H.k = p.k ? *p.k : shortcut_default_k(H.s);
  if (H.k < 2) throw Error(ErrorKind::precondition, "cover parameter k must be at least 2");
  if (4 * (2 * H.k - 1) > H.s)
    throw Error(ErrorKind::precondition, "s too small: clusters must have diameter at most 2 h_j s, need 4(2k-1) <= s");
  const int n = g.n();

  std::vector<VertexAttr<Rational>> vs;
  for (const auto& a : g.vertices()) vs.push_back({a.length, Rational(a.capacity)});
  std::vector<UEdge<Rational>> es;
  for (const auto& e : g.edges()) es.push_back({e.u, e.v, e.length, Rational(e.capacity)});
  std::int64_t N = g.N();

  NodeWeighting A(n);
  for (Vertex v = 0; v < n; ++v) A[v] = g.vertex(v).capacity;
  const Rational s2 = Rational(4 * H.s * H.s);
  while (weight_size(A) > 0) {
    const int i = static_cast<int>(H.levels.size());
    if (i >= p.level_ceiling)
      throw Error(ErrorKind::level_ceiling, "hierarchy still has |A| = " + weight_size(A).str() + " after " +
                                                std::to_string(i) + " levels");
    HierarchyLevel lvl;
    lvl.A = A;
    NodeWeighting next(n, Rational(0));
    for (int j = 1; j <= H.scales; ++j) {
      ScaleLevel sc;
      sc.j = j;
      sc.h_j = Length(1) << j;
      sc.h_cov = 4 * sc.h_j;
      sc.h_diam = sc.h_cov * H.s;
      sc.decomposition =
          decompose_vertex(g, A, {.h = sc.h_diam, .s = H.s, .phi = H.phi, .alpha = H.alpha, .max_iters = p.max_iters,
                                  .path_cap = p.path_cap});
      sc.cut = sc.decomposition.cut;
      sc.cut_graph = apply_cut(g, sc.cut);
      sc.cover = build_cover(sc.cut_graph, sc.h_cov, H.k, p.width_ceiling);
      H.width = std::max(H.width, sc.cover.width());
      const Length h_star = sc.h_j * H.s;
      N = std::max(N, h_star);
      for (std::size_t c = 0; c < sc.cover.clusterings.size(); ++c) {
        sc.star_index.emplace_back();
        for (std::size_t q = 0; q < sc.cover.clusterings[c].size(); ++q) {
          const auto& S = sc.cover.clusterings[c][q];
          StarGraph st{i, j, static_cast<int>(c), static_cast<int>(q), 0, {}, {}, h_star, 0, {}};
          for (Vertex v : S) {
            st.center_capacity += A[v];
            if (A[v] > 0) st.leaves.push_back(v);
          }
          if (st.leaves.empty()) {
            sc.star_index.back().push_back(-1);
            continue;
          }
          st.center = static_cast<Vertex>(vs.size());
          vs.push_back({1, st.center_capacity});
          for (Vertex v : st.leaves) {
            st.edges.push_back(static_cast<EdgeId>(es.size()));
            st.leaf_capacity.push_back(A[v]);
            es.push_back({v, st.center, h_star, A[v]});
          }
          sc.star_index.back().push_back(static_cast<int>(H.stars.size()));
          sc.stars.push_back(static_cast<int>(H.stars.size()));
          H.stars.push_back(std::move(st));
        }
      }
      auto deg = cut_degree(g, sc.cut);
      for (Vertex v = 0; v < n; ++v) next[v] += s2 * deg[v];
      lvl.scales.push_back(std::move(sc));
    }
    H.levels.push_back(std::move(lvl));
    A = std::move(next);
  }
  H.final_A = A;
  H.gprime = ShortcutGraph(std::move(vs), std::move(es), N);
  return H;
}

// ---------------------------------------------------------------- checks

struct HierarchyReport {
  bool weights_exact = true;  // A_{i+1} = 4 s^2 sum_j deg C_{i+1,j}
  bool terminated = true;     // |A_{d+1}| = 0
  bool size_ok = true;        // |E'| <= (d+1) ceil(log2 h) width n
  bool covers_ok = true;
  bool stars_ok = true;
  std::size_t size = 0;
  std::size_t size_bound = 0;
  std::vector<std::string> failures;
  bool ok() const { return weights_exact && terminated && size_ok && covers_ok && stars_ok; }
};

inline HierarchyReport check_hierarchy(const ShortcutHierarchy& H) {
  HierarchyReport r;
  const int n = H.n();
  auto fail = [&](bool& flag, std::string why) {
    flag = false;
    r.failures.push_back(std::move(why));
  };
  for (int i = 0; i <= H.d(); ++i) {
    NodeWeighting want(n, Rational(0));
    for (int j = 1; j <= H.scales; ++j) {
      const auto& sc = H.at(i, j);
      if (sc.cut.H != sc.h_diam * H.s) fail(r.weights_exact, "cut denominator differs from h_diam s");
      auto deg = cut_degree(H.g, sc.cut);
      for (Vertex v = 0; v < n; ++v) want[v] += Rational(4 * H.s * H.s) * deg[v];
      auto rep = verify_cover(sc.cut_graph, sc.cover);
      if (!rep.ok()) fail(r.covers_ok, "cover (" + std::to_string(i) + "," + std::to_string(j) + "): " + rep.failures[0]);
      for (int id : sc.stars) {
        const auto& st = H.stars[id];
        if (st.edges.size() != st.leaves.size()) fail(r.stars_ok, "star edge count differs from leaf count");
        Rational cap = 0;
        for (Vertex v : sc.cover.clusterings[st.clustering][st.cluster]) cap += H.levels[i].A[v];
        if (H.gprime.vertex(st.center).capacity != cap || H.gprime.vertex(st.center).length != 1)
          fail(r.stars_ok, "star center attributes wrong");
        for (std::size_t q = 0; q < st.leaves.size(); ++q) {
          const auto& e = H.gprime.edge(st.edges[q]);
          if (H.levels[i].A[st.leaves[q]] <= 0 || e.capacity != H.levels[i].A[st.leaves[q]] ||
              e.length != sc.h_j * H.s || H.gprime.other(st.edges[q], st.center) != st.leaves[q])
            fail(r.stars_ok, "star leaf edge wrong");
        }
      }
    }
    const NodeWeighting& got = i < H.d() ? H.levels[i + 1].A : H.final_A;
    if (got != want) fail(r.weights_exact, "A_" + std::to_string(i + 1) + " differs from 4 s^2 sum_j deg C");
  }
  if (weight_size(H.final_A) != 0) fail(r.terminated, "final weighting is not zero");
  r.size = H.shortcut_size();
  r.size_bound = static_cast<std::size_t>(H.d() + 1) * H.scales * H.width * n;
  if (r.size > r.size_bound) fail(r.size_ok, "|E'| above (d+1) ceil(log2 h) width n");
  return r;
}

// ---------------------------------------------------------------- star routing

struct StarRouting {
  PathFlow flow;
  Rational congestion = 0;
  std::size_t step = 0;
  Length hop_length = 0;  // longest route minus its two endpoint lengths
};

namespace detail {

inline Path star_hop(const ShortcutHierarchy& H, int star, Vertex u, Vertex v) {
  const auto& st = H.stars.at(star);
  return Path{{u, st.center, v}, {st.edge_to(u), st.edge_to(v)}};
}

}  // namespace detail

// Routes each pair over the star of the lowest cluster holding both ends.
// Leaf edges are undirected, so the weighting must bound out + in demand.
inline StarRouting star_route(const ShortcutHierarchy& H, int i, int j, const Demand& D) {
  const auto& sc = H.at(i, j);
  const auto& A = H.levels.at(i).A;
  const int n = H.n();
  check_hosted(D, H.g);
  std::vector<Rational> load(n, Rational(0));
  for (const auto& [k, x] : D.entries()) {
    if (k.first == k.second) throw Error(ErrorKind::precondition, "star demand pair with equal endpoints");
    load[k.first] += x;
    load[k.second] += x;
  }
  for (Vertex v = 0; v < n; ++v)
    if (load[v] > A[v] || load[v] > Rational(H.g.vertex(v).capacity))
      throw Error(ErrorKind::precondition, "star demand at vertex " + std::to_string(v) + " exceeds A_i or u(v)");
  StarRouting r;
  for (const auto& [src, row] : by_source(D)) {
    auto t = shortest_paths(sc.cut_graph, src);
    for (const auto& [dst, x] : row) {
      if (t.dist[dst] > sc.h_cov)
        throw Error(ErrorKind::precondition, "star demand pair farther than h_cov in G - C");
      int star = H.star_of(i, j, src, dst);
      if (star < 0) throw Error(ErrorKind::internal, "no cluster holds a covered pair");
      r.flow.add(detail::star_hop(H, star, src, dst), x);
    }
  }
  r.congestion = congestion(r.flow, H.gprime);
  r.step = flow_step(r.flow);
  for (const auto& fp : r.flow.paths) {
    Length len = path_length(H.gprime, fp.path) - H.g.vertex(fp.path.verts.front()).length -
                 H.g.vertex(fp.path.verts.back()).length;
    r.hop_length = std::max(r.hop_length, len);
  }
  if (r.congestion > 1) throw Error(ErrorKind::internal, "star routing congestion above 1");
  if (!r.flow.empty() && (r.step != 2 || r.hop_length > 2 * sc.h_j * H.s + 1))
    throw Error(ErrorKind::internal, "star routing step or length off");
  return r;
}

// ---------------------------------------------------------------- forward map

struct ForwardLevelStats {
  int level = 0;
  int items = 0;
  int deferred = 0;  // whole path handed down
  int split = 0;     // three-phase
  int base = 0;      // single star hop at level 0
  int star_routes = 0;
};

struct ForwardResult {
  PathFlow flow;                 // in G'
  std::vector<int> source;       // input path index of each output path
  std::vector<ForwardLevelStats> stats;  // top level first
};

namespace detail {

struct FwdPair {
  int a = 0, b = 0;  // positions on the item's path
  Rational t;
  int child1 = -1, child3 = -1;
  int star = -1;
};

struct FwdItem {
  Path p;
  Rational value;
  int level = 0;
  Length leng = 0;
  int scale = 1;
  enum Kind { base, defer, split } kind = base;
  int child = -1;
  int star = -1;
  std::vector<FwdPair> pairs;
};

inline Path join(const Path& a, const Path& b) {
  if (a.verts.back() != b.verts.front()) throw Error(ErrorKind::internal, "path pieces do not meet");
  Path r = a;
  r.verts.insert(r.verts.end(), b.verts.begin() + 1, b.verts.end());
  r.edges.insert(r.edges.end(), b.edges.begin(), b.edges.end());
  return r;
}

inline Path sub_path(const Path& p, std::size_t a, std::size_t b) {
  Path r;
  r.verts.assign(p.verts.begin() + a, p.verts.begin() + b + 1);
  r.edges.assign(p.edges.begin() + a, p.edges.begin() + b);
  return r;
}

// Sum of cut values over the vertices and edges of p.
inline Rational cut_on_path(const MovingCut& c, const Path& p) {
  std::int64_t s = 0;
  for (Vertex v : p.verts) s += c.vertex[v];
  for (EdgeId e : p.edges) s += c.edge[e];
  return Rational(s, c.H);
}

using Routing = std::vector<FlowPath<Rational>>;  // fractions summing to 1

}  // namespace detail

inline ForwardResult forward_map(const PathFlow& F, const ShortcutHierarchy& H) {
  using detail::FwdItem;
  const Rational s2 = Rational(4 * H.s * H.s);
  for (const auto& fp : F.paths) {
    validate_path(H.g, fp.path);
    if (!is_simple(fp.path)) throw Error(ErrorKind::precondition, "flow paths must be simple");
    if (fp.path.verts.size() < 2) throw Error(ErrorKind::precondition, "flow path with equal endpoints");
    if (path_length(H.g, fp.path) > H.h) throw Error(ErrorKind::precondition, "flow path longer than h");
  }
  if (congestion(F, H.g) > 1) throw Error(ErrorKind::precondition, "flow is not feasible");

  std::vector<FwdItem> items;
  auto make = [&](Path p, Rational value, int level) {
    FwdItem it;
    it.leng = path_length(H.g, p);
    it.scale = H.scale_for(it.leng);
    it.p = std::move(p);
    it.value = std::move(value);
    it.level = level;
    items.push_back(std::move(it));
    return static_cast<int>(items.size()) - 1;
  };
  std::vector<int> current;
  for (const auto& fp : F.paths) current.push_back(make(fp.path, fp.value, H.d()));
  const std::size_t tops = current.size();

  ForwardResult res;
  for (int i = H.d(); i >= 0; --i) {
    ForwardLevelStats st;
    st.level = i;
    std::map<int, Demand> hat;
    std::vector<int> next;
    for (int idx : current) {
      ++st.items;
      // entry invariant: the path fits its cover radius in G - C_{i+1,j}
      {
        const auto& sc = H.at(i, items[idx].scale);
        if (path_length(sc.cut_graph, items[idx].p) > sc.h_cov)
          throw Error(ErrorKind::internal, "level " + std::to_string(i) + " path longer than h_cov in G - C");
      }
      if (i == 0) {
        auto& it = items[idx];
        it.kind = FwdItem::base;
        Vertex u = it.p.verts.front(), v = it.p.verts.back();
        hat[it.scale].add(u, v, it.value);
        it.star = H.star_of(0, it.scale, u, v);
        ++st.base;
        continue;
      }
      const auto& prev = H.levels[i - 1].scales;  // C_{i,j'}
      Rational total = 0;
      for (const auto& sc : prev) total += detail::cut_on_path(sc.cut, items[idx].p);
      if (s2 * total <= 3) {
        items[idx].kind = FwdItem::defer;
        Path p = items[idx].p;
        Rational val = items[idx].value;
        int c = make(std::move(p), std::move(val), i - 1);
        items[idx].child = c;
        next.push_back(c);
        ++st.deferred;
        continue;
      }
      ++st.split;
      const Path P = items[idx].p;
      const Rational F_P = items[idx].value;
      const std::size_t last = P.verts.size() - 1;
      std::vector<Rational> x(last + 1, Rational(0));
      for (std::size_t k = 0; k <= last; ++k) {
        std::int64_t num = 0;
        Rational acc = 0;
        for (const auto& sc : prev) {
          num = sc.cut.vertex[P.verts[k]];
          if (k > 0) num += sc.cut.edge[P.edges[k - 1]];
          if (k < last) num += sc.cut.edge[P.edges[k]];
          acc += Rational(num, sc.cut.H);
        }
        x[k] = s2 * acc;
      }
      std::size_t kL = last + 1, kR = 0;
      {
        Rational pre = 0;
        for (std::size_t k = 0; k <= last && kL > last; ++k)
          if ((pre += x[k]) >= 1) kL = k;
        Rational suf = 0;
        bool found = false;
        for (std::size_t k = last + 1; k-- > 0 && !found;)
          if ((suf += x[k]) >= 1) {
            kR = k;
            found = true;
          }
        if (kL > last || !found || kL > kR)
          throw Error(ErrorKind::internal, "left and right budget sets do not overlap");
      }
      // unit loads: left greedy from the start, right greedy from the end
      std::vector<std::pair<std::size_t, Rational>> Lx, Rx;
      {
        Rational rem = 1;
        for (std::size_t k = 0; k <= kL && rem > 0; ++k) {
          Rational y = std::min(rem, x[k]);
          if (y > 0) Lx.push_back({k, y});
          rem -= y;
        }
        rem = 1;
        for (std::size_t k = last + 1; k-- > kR && rem > 0;) {
          Rational y = std::min(rem, x[k]);
          if (y > 0) Rx.push_back({k, y});
          rem -= y;
        }
        std::reverse(Rx.begin(), Rx.end());
      }
      std::map<std::size_t, int> child1, child3;
      for (const auto& [k, y] : Lx)
        if (k >= 2) {
          int c = make(detail::sub_path(P, 0, k - 1), F_P * y, i - 1);
          child1[k] = c;
          next.push_back(c);
        }
      for (const auto& [k, y] : Rx)
        if (k + 2 <= last) {
          int c = make(detail::sub_path(P, k + 1, last), F_P * y, i - 1);
          child3[k] = c;
          next.push_back(c);
        }
      // northwest-corner transport between the two unit distributions
      std::vector<detail::FwdPair> pairs;
      {
        std::size_t a = 0, b = 0;
        Rational ra = Lx[0].second, rb = Rx[0].second;
        while (a < Lx.size() && b < Rx.size()) {
          Rational t = std::min(ra, rb);
          detail::FwdPair pr;
          pr.a = static_cast<int>(Lx[a].first);
          pr.b = static_cast<int>(Rx[b].first);
          pr.t = t;
          if (child1.count(Lx[a].first)) pr.child1 = child1[Lx[a].first];
          if (child3.count(Rx[b].first)) pr.child3 = child3[Rx[b].first];
          if (pr.a != pr.b) {
            Vertex u = P.verts[pr.a], v = P.verts[pr.b];
            hat[items[idx].scale].add(u, v, F_P * t);
            pr.star = H.star_of(i, items[idx].scale, u, v);
          }
          pairs.push_back(std::move(pr));
          ra -= t;
          rb -= t;
          if (ra == 0 && ++a < Lx.size()) ra = Lx[a].second;
          if (rb == 0 && ++b < Rx.size()) rb = Rx[b].second;
        }
      }
      items[idx].kind = FwdItem::split;
      items[idx].pairs = std::move(pairs);
    }
    // Star demands of this level: cover-radius length, weighting-respecting.
    for (const auto& [j, D] : hat) {
      star_route(H, i, j, D);
      ++st.star_routes;
    }
    res.stats.push_back(st);
    current = std::move(next);
  }
  if (!current.empty()) throw Error(ErrorKind::internal, "items left below level 0");

  // Resolve bottom-up; children always sit at higher indices.
  std::vector<detail::Routing> route(items.size());
  for (std::size_t idx = items.size(); idx-- > 0;) {
    auto& it = items[idx];
    detail::Routing r;
    if (it.kind == FwdItem::base) {
      if (it.star < 0) throw Error(ErrorKind::internal, "no star for a level-0 path");
      r.push_back({detail::star_hop(H, it.star, it.p.verts.front(), it.p.verts.back()), Rational(1)});
    } else if (it.kind == FwdItem::defer) {
      r = route[it.child];
    } else {
      const Path& P = it.p;
      const std::size_t last = P.verts.size() - 1;
      for (const auto& pr : it.pairs) {
        detail::Routing r1, r3;
        if (pr.a == 0) {
          r1.push_back({Path{{P.verts[0]}, {}}, Rational(1)});
        } else if (pr.a == 1) {
          r1.push_back({Path{{P.verts[0], P.verts[1]}, {P.edges[0]}}, Rational(1)});
        } else {
          Path stitch{{P.verts[pr.a - 1], P.verts[pr.a]}, {P.edges[pr.a - 1]}};
          for (const auto& fp : route[pr.child1]) r1.push_back({detail::join(fp.path, stitch), fp.value});
        }
        if (pr.b == static_cast<int>(last)) {
          r3.push_back({Path{{P.verts[last]}, {}}, Rational(1)});
        } else if (pr.b + 1 == static_cast<int>(last)) {
          r3.push_back({Path{{P.verts[pr.b], P.verts[last]}, {P.edges[pr.b]}}, Rational(1)});
        } else {
          Path stitch{{P.verts[pr.b], P.verts[pr.b + 1]}, {P.edges[pr.b]}};
          for (const auto& fp : route[pr.child3]) r3.push_back({detail::join(stitch, fp.path), fp.value});
        }
        Path hop{{P.verts[pr.a]}, {}};
        if (pr.a != pr.b) {
          if (pr.star < 0) throw Error(ErrorKind::internal, "no star for a split pair");
          hop = detail::star_hop(H, pr.star, P.verts[pr.a], P.verts[pr.b]);
        }
        for (const auto& p1 : r1)
          for (const auto& p3 : r3)
            r.push_back({detail::join(detail::join(p1.path, hop), p3.path), pr.t * p1.value * p3.value});
      }
    }
    const std::size_t step_cap = 6 * (std::size_t(1) << (it.level + 1)) - 4;
    const Length len_cap = 20 * (it.level + 1) * H.s * H.s * it.leng;
    for (const auto& fp : r) {
      if (fp.path.verts.front() != it.p.verts.front() || fp.path.verts.back() != it.p.verts.back())
        throw Error(ErrorKind::internal, "routing endpoints drifted");
      if (fp.path.edges.size() > step_cap)
        throw Error(ErrorKind::internal, "level " + std::to_string(it.level) + " routing exceeds its step bound");
      if (path_length(H.gprime, fp.path) > len_cap)
        throw Error(ErrorKind::internal, "level " + std::to_string(it.level) + " routing exceeds its length bound");
    }
    route[idx] = std::move(r);
  }
  for (std::size_t t = 0; t < tops; ++t)
    for (const auto& fp : route[t]) {
      Rational val = items[t].value * fp.value;
      if (val == 0) continue;
      res.flow.add(loop_erase(fp.path), val);
      res.source.push_back(static_cast<int>(t));
    }
  return res;
}

struct ForwardReport {
  bool demand_ok = true;
  bool congestion_ok = true;
  bool step_ok = true;
  bool length_ok = true;
  Rational congestion = 0;
  std::size_t max_step = 0;
  std::size_t step_bound = 0;
  double worst_length_ratio = 0;  // max over output paths of leng / leng(source)
  std::vector<std::string> failures;
  bool ok() const { return demand_ok && congestion_ok && step_ok && length_ok; }
};

inline ForwardReport check_forward(const PathFlow& F, const ForwardResult& R, const ShortcutHierarchy& H) {
  ForwardReport r;
  const int d = H.d();
  auto want = routed_demand(F), got = routed_demand(R.flow);
  if (want.entries() != got.entries()) {
    r.demand_ok = false;
    r.failures.push_back("forward demand differs from input demand");
  }
  r.congestion = congestion(R.flow, H.gprime);
  if (r.congestion > 1) {
    r.congestion_ok = false;
    r.failures.push_back("forward congestion above 1");
  }
  r.step_bound = 6 * (std::size_t(1) << (d + 1)) - 4;
  for (std::size_t q = 0; q < R.flow.paths.size(); ++q) {
    const auto& p = R.flow.paths[q].path;
    r.max_step = std::max(r.max_step, p.edges.size());
    Length src = path_length(H.g, F.paths.at(R.source.at(q)).path);
    Length len = path_length(H.gprime, p);
    r.worst_length_ratio = std::max(r.worst_length_ratio, static_cast<double>(len) / static_cast<double>(src));
    if (len > 20 * (d + 1) * H.s * H.s * src && r.length_ok) {
      r.length_ok = false;
      r.failures.push_back("forward path longer than 20(d+1)s^2 times its source");
    }
  }
  if (r.max_step > r.step_bound) {
    r.step_ok = false;
    r.failures.push_back("forward step above 6*2^(d+1)-4");
  }
  return r;
}

// ---------------------------------------------------------------- backward map

struct SegmentReroute {
  int level = 0;
  int scale = 1;
  Demand demand;
  Length length_bound = 0;    // 2 h_j s + 1, at most h_diam s
  double lp_congestion = 0;   // in G - C_{i+1,j}
  Length max_length = 0;      // longest rerouted path, measured in G
  bool respecting = true;     // max(out, in) <= width * A_i
  bool h_length = true;       // h_diam-length in G - C_{i+1,j}
};

struct BackwardResult {
  PathFlow flow;  // in G
  std::vector<int> source;
  std::vector<SegmentReroute> segments;
  Rational congestion = 0;
};

inline BackwardResult backward_map(const PathFlow& Fp, const ShortcutHierarchy& H) {
  const int n = H.n();
  const auto& gp = H.gprime;
  for (const auto& fp : Fp.paths) {
    validate_path(gp, fp.path);
    if (fp.path.verts.front() >= n || fp.path.verts.back() >= n)
      throw Error(ErrorKind::precondition, "flow endpoints must be original vertices");
  }
  if (congestion(Fp, gp) > 1) throw Error(ErrorKind::precondition, "flow is not feasible in G'");
  auto star_at = [&](Vertex c) -> const StarGraph& { return H.stars.at(c - n); };

  // collect star segment demands per (i, j)
  std::map<std::pair<int, int>, Demand> seg;
  for (const auto& fp : Fp.paths)
    for (std::size_t k = 1; k + 1 < fp.path.verts.size(); ++k) {
      Vertex c = fp.path.verts[k];
      if (c < n) continue;
      const auto& st = star_at(c);
      Vertex a = fp.path.verts[k - 1], b = fp.path.verts[k + 1];
      if (a != b) seg[{st.level, st.scale}].add(a, b, fp.value);
    }

  BackwardResult res;
  std::map<std::tuple<int, int, Vertex, Vertex>, detail::Routing> reroute;
  for (const auto& [key, D] : seg) {
    const auto [i, j] = key;
    const auto& sc = H.at(i, j);
    SegmentReroute sr;
    sr.level = i;
    sr.scale = j;
    sr.demand = D;
    sr.length_bound = std::min(2 * sc.h_j * H.s + 1, sc.h_diam * H.s);
    const auto& A = H.levels[i].A;
    for (Vertex v = 0; v < n; ++v)
      if (D.out_sum(v) > Rational(H.width) * A[v] || D.in_sum(v) > Rational(H.width) * A[v]) sr.respecting = false;
    sr.h_length = is_h_length(D, sc.cut_graph, sc.h_diam);
    auto sol = solve_concurrent_flow(sc.cut_graph, D, sr.length_bound);
    if (sol.lp.status != LpSolution::Status::optimal || !(sol.lp.z > 0))
      throw Error(ErrorKind::not_routable, "star segment demand does not route within " +
                                               std::to_string(sr.length_bound) + " in G - C");
    sr.lp_congestion = sol.lp.congestion();
    for (std::size_t q = 0; q < sol.lp.commodities.size(); ++q) {
      const auto& com = sol.lp.commodities[q];
      Vertex a = sol.reduction.map.owner(com.s), b = sol.reduction.map.owner(com.t);
      Rational sum = 0;
      for (double f : sol.lp.path_flow[q])
        if (f > 0) sum += exact_rational(f);
      auto& out = reroute[{i, j, a, b}];
      for (std::size_t k = 0; k < sol.lp.paths[q].size(); ++k) {
        double f = sol.lp.path_flow[q][k];
        if (!(f > 0)) continue;
        Path p = pull_path(sol.lp.paths[q][k], sol.reduction.map);
        Length len = path_length(H.g, p);
        sr.max_length = std::max(sr.max_length, len);
        if (len > sr.length_bound) throw Error(ErrorKind::internal, "rerouted segment longer than its bound");
        out.push_back({std::move(p), exact_rational(f) / sum});
      }
    }
    res.segments.push_back(std::move(sr));
  }

  for (std::size_t t = 0; t < Fp.paths.size(); ++t) {
    const auto& P = Fp.paths[t].path;
    const Length len_p = path_length(gp, P);
    detail::Routing acc{{Path{{P.verts[0]}, {}}, Rational(1)}};
    for (std::size_t k = 1; k < P.verts.size(); ++k) {
      Vertex v = P.verts[k];
      if (v >= n) continue;
      Vertex prev = P.verts[k - 1];
      if (prev < n) {
        Path e{{prev, v}, {P.edges[k - 1]}};
        for (auto& fp : acc) fp.path = detail::join(fp.path, e);
        continue;
      }
      const auto& st = star_at(prev);
      Vertex a = P.verts[k - 2];
      if (a == v) continue;  // leaf-center-leaf back to the same vertex
      const auto& opts = reroute.at({st.level, st.scale, a, v});
      detail::Routing nxt;
      for (const auto& fp : acc)
        for (const auto& o : opts) nxt.push_back({detail::join(fp.path, o.path), fp.value * o.value});
      acc = std::move(nxt);
    }
    for (auto& fp : acc) {
      Path p = loop_erase(fp.path);
      if (path_length(H.g, p) > len_p) throw Error(ErrorKind::internal, "backward path longer than its source");
      Rational val = Fp.paths[t].value * fp.value;
      if (val == 0) continue;
      res.flow.add(std::move(p), val);
      res.source.push_back(static_cast<int>(t));
    }
  }
  res.congestion = congestion(res.flow, H.g);
  return res;
}

}  // namespace lcx
