#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lcx/concurrent_flow.hpp"

namespace lcx {

struct Bucket {
  std::vector<std::size_t> indices;  // selected prefix, in descending-c order
  double c_min = 0;
  long double alpha = 1;             // 1 + ln(sum d / min d)
  bool holds = false;                // c_min * alpha * sum_I d >= 1, exactly
};

inline long double bucket_alpha(const std::vector<double>& d) {
  long double sum = 0, mn = d.empty() ? 1.0L : static_cast<long double>(d[0]);
  for (double x : d) {
    sum += x;
    mn = std::min(mn, static_cast<long double>(x));
  }
  return 1.0L + std::log(sum / mn);
}

inline Bucket bucket_select(const std::vector<double>& c, const std::vector<double>& d) {
  if (c.size() != d.size() || c.empty()) throw Error(ErrorKind::precondition, "bucket_select needs matching nonempty inputs");
  long double dot = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(d[i] > 0)) throw Error(ErrorKind::precondition, "demands must be positive");
    if (c[i] < 0) throw Error(ErrorKind::precondition, "credits must be nonnegative");
    dot += static_cast<long double>(c[i]) * d[i];
  }
  if (dot < 1.0L - 1e-9L) throw Error(ErrorKind::precondition, "sum d_i c_i < 1");

  Bucket b;
  b.alpha = bucket_alpha(d);
  std::vector<std::size_t> order(c.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return c[x] > c[y]; });

  const Rational alpha = exact_rational(static_cast<double>(b.alpha));
  Rational prefix = 0;
  Rational best_val = -1;
  std::size_t best_t = 0;
  for (std::size_t t = 0; t < order.size(); ++t) {
    prefix += exact_rational(d[order[t]]);
    Rational val = exact_rational(c[order[t]]) * alpha * prefix;
    if (val >= 1) {
      best_t = t;
      b.holds = true;
      break;
    }
    if (val > best_val) {
      best_val = val;
      best_t = t;
    }
  }
  b.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_t) + 1);
  b.c_min = c[order[best_t]];
  return b;
}

struct RoundedCut {
  MovingCut cut;
  Bucket bucket;
  double L = 0;              // dual objective
  double bound = 0;          // 2 L alpha
  Rational selected_demand;  // |D_I|
  Rational sparsity_selected;
};

// Floors min{1, 2 l_e / c_min} to a multiple of 1/h and re-verifies that every
// selected commodity is more than h apart in G - C with exact distances.
inline RoundedCut round_dual_to_cut(const LpSolution& sol, const DirectedGraph& g, Length h) {
  if (sol.status == LpSolution::Status::empty_demand) throw Error(ErrorKind::precondition, "no commodities to round");
  if (static_cast<int>(sol.edge_length.size()) != g.m()) throw Error(ErrorKind::structural, "LP solution from another graph");
  std::vector<double> c, d;
  for (std::size_t i = 0; i < sol.commodities.size(); ++i) {
    c.push_back(sol.credit[i]);
    d.push_back(sol.commodities[i].d);
  }
  RoundedCut r;
  r.bucket = bucket_select(c, d);
  r.L = sol.objective;
  r.bound = 2.0 * r.L * static_cast<double>(r.bucket.alpha);
  if (!(r.bucket.c_min > 0)) throw Error(ErrorKind::internal, "bucketed credit is zero");
  r.cut = zero_cut(g, h);
  const long double cm = r.bucket.c_min;
  for (EdgeId e = 0; e < g.m(); ++e) {
    long double x = std::min(1.0L, 2.0L * std::max(0.0L, static_cast<long double>(sol.edge_length[e])) / cm);
    auto num = static_cast<std::int64_t>(std::floor(x * static_cast<long double>(h)));
    r.cut.edge[e] = std::clamp<std::int64_t>(num, 0, h);
  }
  DirectedGraph gc = apply_cut(g, r.cut);
  Demand DI;
  for (std::size_t i : r.bucket.indices) {
    const auto& cm_i = sol.commodities[i];
    if (dist(gc, cm_i.s, cm_i.t) <= h)
      throw Error(ErrorKind::internal, "selected commodity " + std::to_string(i) + " not separated after rounding");
    DI.add(cm_i.s, cm_i.t, exact_rational(cm_i.d));
  }
  r.selected_demand = DI.total();
  r.sparsity_selected = cut_size(g, r.cut) / r.selected_demand;
  return r;
}

struct OracleResult {
  bool expanding = false;
  double phi = 0;
  double gamma = 0;     // 2 alpha / phi
  long double alpha = 1;
  Demand kept;          // demand actually fed to the LP
  Rational dropped;     // mass removed by the 1/(phi n^2) floor
  std::size_t dropped_pairs = 0;
  LpSolution lp;
  // expanding side
  RealPathFlow routing;
  double congestion = 0;        // 1/z for the kept demand
  double congestion_full = 0;   // + dropped / u_min, bound for the full demand
  // sparse side
  RoundedCut rounded;
  Rational cut_size;
  Rational separated;           // sep_h(C, kept)
  Rational sparsity;            // |C| / sep_h(C, kept)
};

template <class T>
OracleResult sparse_cut_or_expanding(const DirectedGraph& g, const BasicDemand<T>& D, Length h, double phi,
                                     std::size_t cap = path_cap_from_env()) {
  if (!(phi > 0)) throw Error(ErrorKind::precondition, "phi must be positive");
  check_hosted(D, g);
  OracleResult r;
  r.phi = phi;
  const long double n = std::max(1, g.n());
  const long double floor_value = 1.0L / (static_cast<long double>(phi) * n * n);
  for (const auto& [k, x] : D.entries()) {
    if (to_long_double(to_rational(x)) < floor_value) {
      r.dropped += to_rational(x);
      ++r.dropped_pairs;
    } else {
      r.kept.add(k.first, k.second, to_rational(x));
    }
  }
  std::int64_t umin = std::numeric_limits<std::int64_t>::max();
  for (const auto& a : g.edges()) umin = std::min(umin, a.capacity);
  if (r.kept.empty()) {
    r.expanding = true;
    r.lp.status = LpSolution::Status::empty_demand;
    r.congestion_full = r.dropped == 0 || g.m() == 0 ? 0.0 : to_double(r.dropped) / static_cast<double>(umin);
    return r;
  }
  std::vector<double> ds;
  for (const auto& [k, x] : r.kept.entries()) ds.push_back(to_double(x));
  r.alpha = bucket_alpha(ds);
  r.gamma = 2.0 * static_cast<double>(r.alpha) / phi;
  r.lp = solve_concurrent_flow(g, to_real(r.kept), h, cap);
  r.congestion = r.lp.congestion();
  if (r.lp.status == LpSolution::Status::optimal && r.congestion <= r.gamma) {
    r.expanding = true;
    r.routing = r.lp.routing();
    r.congestion_full = r.congestion + (r.dropped == 0 ? 0.0 : to_double(r.dropped) / static_cast<double>(umin));
    return r;
  }
  r.rounded = round_dual_to_cut(r.lp, g, h);
  r.cut_size = lcx::cut_size(g, r.rounded.cut);
  r.separated = separation(r.rounded.cut, r.kept, g, h);
  if (r.separated == 0) throw Error(ErrorKind::internal, "rounded cut separates nothing");
  r.sparsity = r.cut_size / r.separated;
  return r;
}

}  // namespace lcx
