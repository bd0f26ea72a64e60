#pragma once

#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lcx/lp.hpp"
#include "lcx/reduction.hpp"

namespace lcx {

inline constexpr std::size_t kDefaultPathCap = 20000;

// LCX_PATH_CAP overrides the default ceiling on enumerated paths.
inline std::size_t path_cap_from_env() {
  if (const char* s = std::getenv("LCX_PATH_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultPathCap;
}

namespace detail {

inline void enumerate_paths_into(const DirectedGraph& g, Vertex s, Vertex t, Length h, std::size_t cap,
                                 const std::vector<Length>& to_t, std::vector<Path>& out) {
  if (!reachable(to_t[s]) || to_t[s] > h) return;
  if (s == t) {
    out.push_back(Path{{s}, {}});
    return;
  }
  std::vector<char> on(g.n(), 0);
  Path cur{{s}, {}};
  on[s] = 1;
  auto dfs = [&](auto&& self, Vertex x, Length len) -> void {
    for (EdgeId e : g.out_edges(x)) {
      Vertex y = g.edge(e).head;
      if (on[y]) continue;
      Length nl = len + g.edge(e).length;
      if (!reachable(to_t[y]) || nl + to_t[y] > h) continue;
      cur.verts.push_back(y);
      cur.edges.push_back(e);
      if (y == t) {
        if (out.size() >= cap)
          throw Error(ErrorKind::path_explosion,
                      "more than " + std::to_string(cap) + " h-length paths (set LCX_PATH_CAP to raise the ceiling)");
        out.push_back(cur);
      } else {
        on[y] = 1;
        self(self, y, nl);
        on[y] = 0;
      }
      cur.verts.pop_back();
      cur.edges.pop_back();
    }
  };
  dfs(dfs, s, 0);
}

}  // namespace detail

// All simple s->t paths of length <= h, in DFS order over edge ids.
inline std::vector<Path> enumerate_h_paths(const DirectedGraph& g, Vertex s, Vertex t, Length h,
                                           std::size_t cap = path_cap_from_env()) {
  check_vertex(g.n(), s);
  check_vertex(g.n(), t);
  std::vector<Path> out;
  auto to_t = shortest_paths(g, t, true).dist;
  detail::enumerate_paths_into(g, s, t, h, cap, to_t, out);
  return out;
}

struct Commodity {
  Vertex s = 0;
  Vertex t = 0;
  double d = 0;
};

struct LpSolution {
  enum class Status { optimal, no_path, empty_demand };
  Status status = Status::optimal;
  Length h = 0;
  double z = 0;
  std::vector<Commodity> commodities;
  std::vector<std::vector<Path>> paths;        // per commodity
  std::vector<std::vector<double>> path_flow;  // f_i(p), routes z*d_i per commodity
  std::vector<double> edge_length;             // dual l_e
  std::vector<double> credit;                  // dual c_i
  double objective = 0;                        // L = sum u_e l_e
  long iterations = 0;
  std::size_t path_count = 0;

  double congestion() const {
    if (status == Status::empty_demand) return 0.0;
    if (z <= 0) return std::numeric_limits<double>::infinity();
    return 1.0 / z;
  }

  // Paths carrying f/z: routes the demand itself with congestion 1/z.
  RealPathFlow routing() const {
    RealPathFlow f;
    if (z <= 0 || status != Status::optimal) return f;
    for (std::size_t i = 0; i < paths.size(); ++i)
      for (std::size_t k = 0; k < paths[i].size(); ++k)
        if (path_flow[i][k] > 0) f.add(paths[i][k], path_flow[i][k] / z);
    return f;
  }
};

struct LpCheck {
  double primal_violation = 0;  // worst violation of primal rows, relative to max(1, rhs)
  double dual_violation = 0;    // worst absolute violation of dual rows
  double gap = 0;               // |z - L|
  bool ok(double z) const { return primal_violation <= 1e-9 && dual_violation <= 1e-9 && gap <= 1e-7 * std::max(1.0, z); }
};

inline LpCheck check_solution(const DirectedGraph& g, const LpSolution& sol) {
  LpCheck c;
  if (sol.status == LpSolution::Status::empty_demand) return c;
  std::vector<double> load(g.m(), 0.0);
  for (std::size_t i = 0; i < sol.paths.size(); ++i) {
    double tot = 0;
    for (std::size_t k = 0; k < sol.paths[i].size(); ++k) {
      double f = sol.path_flow[i][k];
      c.primal_violation = std::max(c.primal_violation, -f);
      tot += f;
      for (EdgeId e : sol.paths[i][k].edges) load[e] += f;
      double len = 0;
      for (EdgeId e : sol.paths[i][k].edges) len += sol.edge_length[e];
      c.dual_violation = std::max(c.dual_violation, sol.credit[i] - len);
    }
    const double want = sol.z * sol.commodities[i].d;
    c.primal_violation = std::max(c.primal_violation, (want - tot) / std::max(1.0, want));
  }
  double dc = 0;
  for (std::size_t i = 0; i < sol.commodities.size(); ++i) dc += sol.commodities[i].d * sol.credit[i];
  c.dual_violation = std::max(c.dual_violation, 1.0 - dc);
  for (EdgeId e = 0; e < g.m(); ++e) {
    const double u = static_cast<double>(g.edge(e).capacity);
    c.primal_violation = std::max(c.primal_violation, (load[e] - u) / u);
    c.dual_violation = std::max(c.dual_violation, -sol.edge_length[e]);
  }
  c.gap = std::abs(sol.z - sol.objective);
  return c;
}

// The h-length concurrent flow LP over enumerated paths, with a certified
// primal/dual pair. Rows: one per commodity (scaled by 1/d_i) and one per
// edge used by some path (scaled by 1/u_e).
template <class T>
LpSolution solve_concurrent_flow(const DirectedGraph& g, const BasicDemand<T>& D, Length h,
                                 std::size_t cap = path_cap_from_env()) {
  check_hosted(D, g);
  LpSolution sol;
  sol.h = h;
  sol.edge_length.assign(g.m(), 0.0);
  for (const auto& [k, x] : D.entries()) sol.commodities.push_back({k.first, k.second, static_cast<double>(x)});
  const std::size_t K = sol.commodities.size();
  sol.credit.assign(K, 0.0);
  sol.paths.resize(K);
  sol.path_flow.resize(K);
  if (K == 0) {
    sol.status = LpSolution::Status::empty_demand;
    sol.z = std::numeric_limits<double>::infinity();
    return sol;
  }

  std::map<Vertex, std::vector<Length>> to_target;
  std::size_t total = 0;
  for (std::size_t i = 0; i < K; ++i) {
    const auto& cm = sol.commodities[i];
    auto it = to_target.find(cm.t);
    if (it == to_target.end()) it = to_target.emplace(cm.t, shortest_paths(g, cm.t, true).dist).first;
    detail::enumerate_paths_into(g, cm.s, cm.t, h, cap - total, it->second, sol.paths[i]);
    total += sol.paths[i].size();
  }
  sol.path_count = total;
  for (std::size_t i = 0; i < K; ++i) sol.path_flow[i].assign(sol.paths[i].size(), 0.0);

  for (std::size_t i = 0; i < K; ++i) {
    if (sol.paths[i].empty()) {
      sol.status = LpSolution::Status::no_path;
      sol.z = 0;
      sol.credit[i] = 1.0 / sol.commodities[i].d;
      sol.objective = 0;
      return sol;
    }
  }

  std::vector<int> edge_row(g.m(), -1);
  int rows = static_cast<int>(K);
  for (const auto& ps : sol.paths)
    for (const auto& p : ps)
      for (EdgeId e : p.edges)
        if (edge_row[e] < 0) edge_row[e] = rows++;

  LpProblem lp;
  lp.rows = rows;
  lp.b.assign(rows, 0.0);
  for (EdgeId e = 0; e < g.m(); ++e)
    if (edge_row[e] >= 0) lp.b[edge_row[e]] = 1.0;
  // z: z - sum_p f_p / d_i <= 0 on each commodity row
  SparseColumn zc;
  for (std::size_t i = 0; i < K; ++i) {
    zc.rows.push_back(static_cast<int>(i));
    zc.vals.push_back(1.0);
  }
  lp.cols.push_back(zc);
  lp.c.push_back(1.0);
  for (std::size_t i = 0; i < K; ++i) {
    for (const auto& p : sol.paths[i]) {
      SparseColumn col;
      col.rows.push_back(static_cast<int>(i));
      col.vals.push_back(-1.0 / sol.commodities[i].d);
      for (EdgeId e : p.edges) {
        col.rows.push_back(edge_row[e]);
        col.vals.push_back(1.0 / static_cast<double>(g.edge(e).capacity));
      }
      lp.cols.push_back(std::move(col));
      lp.c.push_back(0.0);
    }
  }

  LpResult r = solve_lp(lp);
  sol.iterations = r.iterations;

  // Primal clean-up: rescale to remove capacity overshoot, then take z as
  // the exact minimum ratio so primal feasibility holds by construction.
  std::size_t col = 1;
  std::vector<double> load(g.m(), 0.0);
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t k = 0; k < sol.paths[i].size(); ++k, ++col) {
      sol.path_flow[i][k] = std::max(0.0, r.x[col]);
      for (EdgeId e : sol.paths[i][k].edges) load[e] += sol.path_flow[i][k];
    }
  double over = 1.0;
  for (EdgeId e = 0; e < g.m(); ++e) over = std::max(over, load[e] / static_cast<double>(g.edge(e).capacity));
  double z = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < K; ++i) {
    double tot = 0;
    for (auto& f : sol.path_flow[i]) {
      f /= over;
      tot += f;
    }
    z = std::min(z, tot / sol.commodities[i].d);
  }
  sol.z = z;

  // Dual clean-up: l_e from edge rows (unscaled), credits as shortest
  // enumerated path lengths, then normalize sum d_i c_i = 1.
  for (EdgeId e = 0; e < g.m(); ++e)
    if (edge_row[e] >= 0) sol.edge_length[e] = std::max(0.0, r.dual[edge_row[e]]) / static_cast<double>(g.edge(e).capacity);
  double dc = 0;
  for (std::size_t i = 0; i < K; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : sol.paths[i]) {
      double len = 0;
      for (EdgeId e : p.edges) len += sol.edge_length[e];
      best = std::min(best, len);
    }
    sol.credit[i] = best;
    dc += sol.commodities[i].d * best;
  }
  if (!(dc > 0)) throw Error(ErrorKind::non_convergence, "LP dual degenerated (sum d_i c_i = 0)");
  for (auto& l : sol.edge_length) l /= dc;
  for (auto& c : sol.credit) c /= dc;
  sol.objective = 0;
  for (EdgeId e = 0; e < g.m(); ++e) sol.objective += static_cast<double>(g.edge(e).capacity) * sol.edge_length[e];

  LpCheck chk = check_solution(g, sol);
  if (!chk.ok(sol.z))
  {
    std::ostringstream os;
    os << std::scientific << "LP certificate residuals: primal " << chk.primal_violation << ", dual "
       << chk.dual_violation << ", gap " << chk.gap << " (z=" << sol.z << ")";
    throw Error(ErrorKind::non_convergence, os.str());
  }
  return sol;
}

template <class T>
double min_congestion(const DirectedGraph& g, const BasicDemand<T>& D, Length h, std::size_t cap = path_cap_from_env()) {
  return solve_concurrent_flow(g, D, h, cap).congestion();
}

// Vertex-capacitated hosts are always solved on the reduced graph.
struct VcLpSolution {
  Reduction reduction;
  LpSolution lp;
  RealPathFlow routing() const { return pull_flow(lp.routing(), reduction.map); }
};

template <class T>
VcLpSolution solve_concurrent_flow(const VertexCapGraph& g, const BasicDemand<T>& D, Length h,
                                   std::size_t cap = path_cap_from_env()) {
  check_hosted(D, g);
  VcLpSolution s{reduce(g), {}};
  s.lp = solve_concurrent_flow(s.reduction.graph, push_demand(D, s.reduction.map), h, cap);
  return s;
}

template <class T>
double min_congestion(const VertexCapGraph& g, const BasicDemand<T>& D, Length h, std::size_t cap = path_cap_from_env()) {
  return solve_concurrent_flow(g, D, h, cap).lp.congestion();
}

}  // namespace lcx
