#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lcx/graph.hpp"

namespace lcx {

using Cluster = std::vector<Vertex>;     // sorted vertex ids
using Clustering = std::vector<Cluster>;  // pairwise disjoint

struct NeighborhoodCover {
  Length h_cov = 1;
  int k = 2;
  Length h_diam = 1;  // (2k-1) h_cov
  std::vector<Clustering> clusterings;

  int width() const { return static_cast<int>(clusterings.size()); }
};

struct CoverReport {
  bool covering = true;
  bool diameter = true;
  bool disjoint = true;
  bool width_ok = true;
  int width = 0;                 // max clusters containing one vertex
  Length max_diameter = 0;
  std::optional<Vertex> uncovered;                     // first vertex whose ball fits nowhere
  std::optional<std::pair<Vertex, Vertex>> far_pair;  // first pair over the diameter bound
  std::vector<std::string> failures;
  bool ok() const { return covering && diameter && disjoint && width_ok; }
};

namespace detail {

inline bool sorted_subset(const std::vector<Vertex>& a, const Cluster& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace detail

template <class Cap>
CoverReport verify_cover(const BasicVertexCapGraph<Cap>& g, const NeighborhoodCover& cov,
                         std::optional<int> width_ceiling = std::nullopt) {
  CoverReport r;
  const int n = g.n();
  auto d = all_pairs_dist(g);
  std::vector<int> count(n, 0);
  for (std::size_t i = 0; i < cov.clusterings.size(); ++i) {
    std::vector<char> seen(n, 0);
    for (const auto& S : cov.clusterings[i]) {
      for (Vertex v : S) {
        if (v < 0 || v >= n) throw Error(ErrorKind::structural, "cluster vertex outside graph");
        if (seen[v]) {
          r.disjoint = false;
          r.failures.push_back("clustering " + std::to_string(i) + " repeats vertex " + std::to_string(v));
        }
        seen[v] = 1;
        ++count[v];
      }
      for (Vertex a : S)
        for (Vertex b : S) {
          Length x = d[a][b];
          if (reachable(x)) r.max_diameter = std::max(r.max_diameter, x);
          if (!reachable(x) || x > cov.h_diam) {
            if (r.diameter) r.far_pair = {a, b};
            if (r.diameter)
              r.failures.push_back("pair " + std::to_string(a) + "," + std::to_string(b) + " exceeds diameter");
            r.diameter = false;
          }
        }
    }
  }
  for (int c : count) r.width = std::max(r.width, c);
  if (width_ceiling && r.width > *width_ceiling) {
    r.width_ok = false;
    r.failures.push_back("width " + std::to_string(r.width) + " above ceiling");
  }
  for (Vertex v = 0; v < n && r.covering; ++v) {
    std::vector<Vertex> ball;
    for (Vertex u = 0; u < n; ++u)
      if (d[v][u] <= cov.h_cov) ball.push_back(u);
    if (ball.empty()) continue;
    bool found = false;
    for (const auto& cl : cov.clusterings) {
      for (const auto& S : cl)
        if (detail::sorted_subset(ball, S)) {
          found = true;
          break;
        }
      if (found) break;
    }
    if (!found) {
      r.covering = false;
      r.uncovered = v;
      r.failures.push_back("ball of vertex " + std::to_string(v) + " lies in no cluster");
    }
  }
  return r;
}

// Layered ball carving. Each layer is one clustering; a center c (smallest
// uncovered id still eligible in the layer) carves the available vertices
// within radius (t+1) h_cov of itself, measured without c's own length,
// where t in [0, k-2] is the first radius with at most a rho-fold growth in
// eligible uncovered vertices. Diameter is then at most (2k-1) h_cov.
template <class Cap>
NeighborhoodCover build_cover(const BasicVertexCapGraph<Cap>& g, Length h_cov, int k,
                              std::optional<int> width_ceiling = std::nullopt) {
  if (h_cov < 1) throw Error(ErrorKind::precondition, "covering radius must be positive");
  if (k < 2) throw Error(ErrorKind::precondition, "cover needs k >= 2 for a diameter bound of (2k-1) h_cov");
  NeighborhoodCover cov{h_cov, k, (2 * k - 1) * h_cov, {}};
  const int n = g.n();
  auto d = all_pairs_dist(g);
  auto dd = [&](Vertex c, Vertex w) { return reachable(d[c][w]) ? d[c][w] - g.vertex(c).length : kUnreachable; };
  const double rho = std::pow(static_cast<double>(std::max(n, 2)), 1.0 / (k - 1));

  std::vector<std::vector<Vertex>> ball(n);
  std::vector<char> todo(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex u = 0; u < n; ++u)
      if (d[v][u] <= h_cov) ball[v].push_back(u);
    todo[v] = !ball[v].empty();  // an empty ball is covered by anything
  }
  auto remaining = [&] { return std::count(todo.begin(), todo.end(), 1); };

  while (remaining() > 0) {
    if (width_ceiling && cov.width() >= *width_ceiling)
      throw Error(ErrorKind::width_ceiling, "cover width would exceed ceiling " + std::to_string(*width_ceiling));
    Clustering layer;
    std::vector<char> avail(n, 1);
    std::vector<char> live = todo;
    for (;;) {
      Vertex c = -1;
      for (Vertex v = 0; v < n && c < 0; ++v)
        if (live[v]) c = v;
      if (c < 0) break;
      auto eligible_within = [&](Length r) {
        long cnt = 0;
        for (Vertex u = 0; u < n; ++u)
          if (live[u] && dd(c, u) <= r) ++cnt;
        return cnt;
      };
      int t = 0;
      while (t < k - 2 &&
             static_cast<double>(eligible_within((t + 2) * h_cov)) > rho * static_cast<double>(eligible_within(t * h_cov)))
        ++t;
      const Length R = (t + 1) * h_cov;
      Cluster S;
      std::vector<char> in(n, 0);
      for (Vertex w = 0; w < n; ++w)
        if (avail[w] && dd(c, w) <= R) {
          S.push_back(w);
          in[w] = 1;
          avail[w] = 0;
        }
      bool center_done = false;
      for (Vertex u = 0; u < n; ++u) {
        if (!live[u]) continue;
        bool inside = true, touches = false;
        for (Vertex w : ball[u]) {
          inside = inside && in[w];
          touches = touches || in[w];
        }
        if (inside) {
          todo[u] = 0;
          live[u] = 0;
          if (u == c) center_done = true;
        } else if (touches) {
          live[u] = 0;  // its ball can no longer fit in this layer
        }
      }
      if (!center_done) throw Error(ErrorKind::internal, "carved cluster misses its center's ball");
      layer.push_back(std::move(S));
    }
    cov.clusterings.push_back(std::move(layer));
  }
  auto rep = verify_cover(g, cov, width_ceiling);
  if (!rep.ok()) throw Error(ErrorKind::internal, "cover failed verification: " + rep.failures.front());
  return cov;
}

}  // namespace lcx
