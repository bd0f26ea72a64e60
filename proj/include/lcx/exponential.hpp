#pragma once

#include <cmath>
#include <vector>

#include "lcx/demand.hpp"

namespace lcx {

inline void check_alpha(int n, double alpha) {
  if (!(alpha >= 1.0)) throw Error(ErrorKind::precondition, "alpha must be at least 1");
  if (n >= 2 && alpha > std::log2(static_cast<double>(n)) + 1e-12)
    throw Error(ErrorKind::precondition, "alpha must be at most log2 n");
}

// All exponential weights of one graph at one (h, alpha). Weights are kept in
// long double; round-trip distances are exact integers.
class ExpWeights {
 public:
  ExpWeights(const DirectedGraph& g, Length h, double alpha) : n_(g.n()), h_(h), alpha_(alpha) {
    if (h < 1) throw Error(ErrorKind::precondition, "h must be positive");
    check_alpha(n_, alpha);
    auto d = all_pairs_dist(g);
    rt_.assign(n_, std::vector<Length>(n_, kUnreachable));
    w_.assign(n_, std::vector<long double>(n_, 0.0L));
    total_.assign(n_, 0.0L);
    const long double log2n = n_ >= 2 ? std::log2(static_cast<long double>(n_)) : 0.0L;
    const long double cutoff = 2.0L * static_cast<long double>(h) * log2n;  // compared against alpha * rt
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex v = 0; v < n_; ++v) {
        if (reachable(d[u][v]) && reachable(d[v][u])) rt_[u][v] = d[u][v] + d[v][u];
        if (u == v) {
          w_[u][v] = 1.0L;
        } else if (reachable(rt_[u][v]) &&
                   static_cast<long double>(alpha) * static_cast<long double>(rt_[u][v]) <= cutoff) {
          w_[u][v] = std::exp2(-static_cast<long double>(alpha) * static_cast<long double>(rt_[u][v]) /
                               static_cast<long double>(h));
        }
      }
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex b = 0; b < n_; ++b) total_[u] += w_[u][b];
  }

  int n() const { return n_; }
  Length h() const { return h_; }
  double alpha() const { return alpha_; }
  Length round_trip(Vertex u, Vertex v) const { return rt_.at(u).at(v); }
  long double weight(Vertex u, Vertex v) const { return w_.at(u).at(v); }
  long double total(Vertex u) const { return total_.at(u); }
  long double mixing(Vertex u, Vertex v) const { return w_.at(u).at(v) / total_.at(u); }

  long double overlap(Vertex u, Vertex v) const {
    long double s = 0;
    for (Vertex b = 0; b < n_; ++b) s += std::min(mixing(u, b), mixing(v, b));
    return s;
  }

  // D(u,v) = A(u) M(u,v) + A(v) M(v,u)
  RealDemand demand(const NodeWeighting& A) const {
    if (static_cast<int>(A.size()) != n_) throw Error(ErrorKind::structural, "node-weighting size does not match graph");
    std::vector<long double> a(n_);
    for (Vertex v = 0; v < n_; ++v) a[v] = to_long_double(A[v]);
    RealDemand D;
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex v = 0; v < n_; ++v) {
        if (u == v) continue;
        long double x = a[u] * mixing(u, v) + a[v] * mixing(v, u);
        if (x > 0) D.add(u, v, static_cast<double>(x));
      }
    return D;
  }

  long double potential(const NodeWeighting& A) const {
    if (static_cast<int>(A.size()) != n_) throw Error(ErrorKind::structural, "node-weighting size does not match graph");
    long double p = 0;
    for (Vertex u = 0; u < n_; ++u)
      if (A[u] != 0) p += to_long_double(A[u]) * std::log(total_[u]);
    return p;
  }

 private:
  int n_;
  Length h_;
  double alpha_;
  std::vector<std::vector<Length>> rt_;
  std::vector<std::vector<long double>> w_;
  std::vector<long double> total_;
};

inline long double exp_weight(const DirectedGraph& g, Vertex u, Vertex v, Length h, double alpha) {
  return ExpWeights(g, h, alpha).weight(u, v);
}

inline long double exp_weight_total(const DirectedGraph& g, Vertex u, Length h, double alpha) {
  return ExpWeights(g, h, alpha).total(u);
}

inline long double mixing_factor(const DirectedGraph& g, Vertex u, Vertex v, Length h, double alpha) {
  return ExpWeights(g, h, alpha).mixing(u, v);
}

inline long double mixing_overlap(const DirectedGraph& g, Vertex u, Vertex v, Length h, double alpha) {
  return ExpWeights(g, h, alpha).overlap(u, v);
}

inline RealDemand exponential_demand(const DirectedGraph& g, const NodeWeighting& A, Length h, double alpha) {
  return ExpWeights(g, h, alpha).demand(A);
}

inline long double potential(const DirectedGraph& g, const NodeWeighting& A, Length h, double alpha) {
  return ExpWeights(g, h, alpha).potential(A);
}

}  // namespace lcx
