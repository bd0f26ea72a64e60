#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lcx/exponential.hpp"
#include "lcx/reduction.hpp"
#include "lcx/rounding.hpp"

namespace lcx {

struct DecompParams {
  Length h = 1;
  Length s = 1;
  double phi = 0.1;
  double alpha = 1.0;
  int max_iters = 1000;
  std::size_t path_cap = path_cap_from_env();
};

// What the loop proved about the final graph: the exponential demand of the
// final weighting routes at length h*s/2 with congestion at most gamma.
struct ExpansionCertificate {
  std::string kind = "exponential-demand-routable";
  Length length = 0;
  double congestion = 0;
  double congestion_full = 0;
  double gamma = 0;
  double phi_oracle = 0;
  double loss_factor = 0;  // 2^{8 alpha + 1}
  bool empty_demand = false;
};

struct DecompStep {
  MovingCut cut;                    // at denominator h*s
  Rational size;
  Rational separated;               // exponential demand separated at h*s/2
  double lp_objective = 0;
  long double potential_before = 0;
  long double potential_mid = 0;    // after the cut, old weighting
  long double potential_after = 0;  // after the cut, new weighting
};

struct CutSequence {
  Length h = 1;
  Length H = 1;
  double phi = 0;
  double alpha = 1;
  double phi_oracle = 0;
  Rational ell = 0;
  int n = 0;
  NodeWeighting initial_A, final_A;
  std::vector<DecompStep> steps;
  MovingCut combined;
  Rational total_size = 0;       // sum of |C_i|
  long double size_bound = 0;    // the bound the sum is checked against
  long double drop_factor = 0;   // required cut-phase drop per unit of |C_i|
  long double rise_factor = 0;   // allowed weighting-phase rise per unit of |C_i|
  ExpansionCertificate certificate;

  std::vector<MovingCut> cuts() const {
    std::vector<MovingCut> r;
    for (const auto& s : steps) r.push_back(s.cut);
    return r;
  }
};

struct SequenceCheck {
  bool size_ok = true;
  bool drops_ok = true;
  bool rises_ok = true;
  bool monotone = true;
  std::vector<std::string> failures;
  bool ok() const { return size_ok && drops_ok && rises_ok && monotone; }
};

// Re-evaluates every recorded inequality against the host graph, recomputing
// all potentials from scratch.
inline SequenceCheck check_sequence(const DirectedGraph& g, const CutSequence& seq, long double tol = 1e-6L) {
  SequenceCheck r;
  auto fail = [&](bool& flag, std::size_t i, const std::string& what) {
    flag = false;
    r.failures.push_back("iteration " + std::to_string(i) + ": " + what);
  };
  Rational total = 0;
  MovingCut acc = zero_cut(g, seq.H);
  NodeWeighting A = seq.initial_A;
  for (std::size_t i = 0; i < seq.steps.size(); ++i) {
    const auto& st = seq.steps[i];
    Rational sz = cut_size(g, st.cut);
    total += sz;
    const long double c = to_long_double(sz);
    const long double before = potential(apply_cut(g, acc), A, seq.h, seq.alpha);
    acc = clamp_add(acc, st.cut);
    const DirectedGraph next = apply_cut(g, acc);
    const long double mid = potential(next, A, seq.h, seq.alpha);
    if (seq.ell != 0) {
      auto deg = cut_degree(g, st.cut);
      for (Vertex v = 0; v < g.n(); ++v) A[v] += seq.ell * deg[v];
    }
    const long double after = potential(next, A, seq.h, seq.alpha);
    if (std::abs(before - st.potential_before) > tol || std::abs(mid - st.potential_mid) > tol ||
        std::abs(after - st.potential_after) > tol)
      fail(r.monotone, i, "recorded potentials do not replay");
    if (before - mid < seq.drop_factor * c - tol) fail(r.drops_ok, i, "potential drop below bound");
    if (after - mid > seq.rise_factor * c + tol) fail(r.rises_ok, i, "potential rise above bound");
    if (after > before + tol) fail(r.monotone, i, "potential increased");
  }
  if (total != seq.total_size || to_long_double(total) > seq.size_bound) {
    r.size_ok = false;
    r.failures.push_back("total cut size exceeds bound");
  }
  return r;
}

namespace detail {

inline long double pow2(long double x) { return std::exp2(x); }

inline void check_params(const DecompParams& p, int n) {
  if (p.h < 1 || p.s < 1) throw Error(ErrorKind::precondition, "h and s must be positive");
  if (!(p.phi > 0 && p.phi < 1)) throw Error(ErrorKind::precondition, "phi must lie in (0, 1)");
  check_alpha(n, p.alpha);
  if ((p.h * p.s) % 2 != 0) throw Error(ErrorKind::precondition, "h*s must be even");
  const double lg = n >= 2 ? std::log2(static_cast<double>(n)) : 0.0;
  if (!(static_cast<double>(p.s) * p.alpha > 4 * lg))
    throw Error(ErrorKind::precondition, "s must exceed 4 log2(n) / alpha");
  if (p.max_iters < 1) throw Error(ErrorKind::precondition, "max_iters must be positive");
}

inline std::string trace(const CutSequence& seq) {
  std::ostringstream os;
  os << seq.steps.size() << " iterations;";
  for (const auto& st : seq.steps)
    os << " |C|=" << format_rational(st.size) << " P=" << static_cast<double>(st.potential_before);
  return os.str();
}

// Shared loop. `post` may enlarge each raw oracle cut (normalization).
inline CutSequence run_sequence(const DirectedGraph& g, const NodeWeighting& A, const DecompParams& p,
                                const Rational& ell, double phi_oracle,
                                const std::function<MovingCut(const MovingCut&)>& post) {
  if (static_cast<int>(A.size()) != g.n()) throw Error(ErrorKind::structural, "node-weighting size does not match graph");
  for (const auto& a : A)
    if (a < 0) throw Error(ErrorKind::precondition, "negative node weight");
  CutSequence seq;
  seq.h = p.h;
  seq.H = p.h * p.s;
  seq.phi = p.phi;
  seq.alpha = p.alpha;
  seq.phi_oracle = phi_oracle;
  seq.ell = ell;
  seq.n = g.n();
  seq.initial_A = A;
  seq.combined = zero_cut(g, seq.H);
  const Length L = seq.H / 2;

  NodeWeighting Ai = A;
  DirectedGraph Gi = g;
  for (int it = 0;; ++it) {
    if (it >= p.max_iters)
      throw Error(ErrorKind::non_convergence, "decomposition exceeded max_iters: " + trace(seq));
    ExpWeights W(Gi, p.h, p.alpha);
    RealDemand D = W.demand(Ai);
    OracleResult r = sparse_cut_or_expanding(Gi, D, L, phi_oracle, p.path_cap);
    if (r.expanding) {
      auto& c = seq.certificate;
      c.length = L;
      c.congestion = r.congestion;
      c.congestion_full = r.congestion_full;
      c.gamma = r.gamma;
      c.phi_oracle = phi_oracle;
      c.loss_factor = static_cast<double>(pow2(8.0L * p.alpha + 1));
      c.empty_demand = r.lp.status == LpSolution::Status::empty_demand;
      break;
    }
    // Same length increases, read over denominator h*s.
    MovingCut c = r.rounded.cut;
    c.H = seq.H;
    c = post(c);
    DecompStep st;
    st.cut = c;
    st.size = cut_size(g, c);
    st.separated = r.separated;
    st.lp_objective = r.lp.objective;
    st.potential_before = W.potential(Ai);
    seq.combined = clamp_add(seq.combined, c);
    Gi = apply_cut(g, seq.combined);
    ExpWeights W2(Gi, p.h, p.alpha);
    st.potential_mid = W2.potential(Ai);
    if (ell != 0) {
      auto deg = cut_degree(g, c);
      for (Vertex v = 0; v < g.n(); ++v) Ai[v] += ell * deg[v];
    }
    st.potential_after = W2.potential(Ai);
    seq.total_size += st.size;
    seq.steps.push_back(std::move(st));
  }
  seq.final_A = Ai;
  return seq;
}

inline long double log_n(int n) { return n >= 2 ? std::log(static_cast<long double>(n)) : 0.0L; }

}  // namespace detail

// Repeatedly cuts along rounded duals of the exponential-demand LP until the
// exponential demand routes; every cut lowers the potential.
inline CutSequence decompose_directed(const DirectedGraph& g, const NodeWeighting& A, const DecompParams& p) {
  detail::check_params(p, g.n());
  const long double a = p.alpha;
  const double phi_oracle = static_cast<double>(detail::pow2(8 * a + 1) * p.phi);
  auto seq = detail::run_sequence(g, A, p, 0, phi_oracle, [](const MovingCut& c) { return c; });
  seq.drop_factor = detail::pow2(-8 * a - 2) / p.phi;
  seq.rise_factor = 0;
  seq.size_bound = detail::pow2(8 * a + 2) * p.phi * detail::log_n(g.n()) * to_long_double(weight_size(A));
  if (to_long_double(seq.total_size) > seq.size_bound)
    throw Error(ErrorKind::internal, "cut sequence exceeds its size bound: " + detail::trace(seq));
  return seq;
}

inline Rational max_link_parameter(int n, double phi, double alpha) {
  const long double ln = detail::log_n(n);
  if (ln == 0) return Rational(1);
  const long double x = detail::pow2(-8.0L * alpha - 4) / (phi * ln);
  double d = static_cast<double>(x);
  if (static_cast<long double>(d) > x) d = std::nextafter(d, 0.0);  // round down, never past the limit
  return exact_rational(d);
}

// After each cut the weighting grows by ell * deg_C.
inline CutSequence decompose_linked(const DirectedGraph& g, const NodeWeighting& A, const DecompParams& p,
                                    const Rational& ell) {
  detail::check_params(p, g.n());
  if (ell < 0) throw Error(ErrorKind::precondition, "link parameter must be nonnegative");
  const long double a = p.alpha;
  const long double ln = detail::log_n(g.n());
  if (ln > 0 && to_long_double(ell) > detail::pow2(-8 * a - 4) / (p.phi * ln))
    throw Error(ErrorKind::precondition, "link parameter above 2^{-8a-4} / (phi ln n)");
  const double phi_oracle = static_cast<double>(detail::pow2(8 * a + 1) * p.phi);
  auto seq = detail::run_sequence(g, A, p, ell, phi_oracle, [](const MovingCut& c) { return c; });
  seq.drop_factor = detail::pow2(-8 * a - 2) / p.phi;
  seq.rise_factor = ell == 0 ? 0 : detail::pow2(-8 * a - 3) / p.phi;
  seq.size_bound = (ell == 0 ? detail::pow2(8 * a + 2) : detail::pow2(8 * a + 3)) * p.phi * ln *
                   to_long_double(weight_size(A));
  if (to_long_double(seq.total_size) > seq.size_bound)
    throw Error(ErrorKind::internal, "linked cut sequence exceeds its size bound: " + detail::trace(seq));
  return seq;
}

struct VertexDecomposition {
  Reduction reduction;
  CutSequence ec;             // run on the reduced graph, every cut normalized
  MovingCut cut;              // vertex cut pulled back from ec.combined
  Rational cut_size = 0;      // |C_vc|
  long double size_bound = 0; // 9 * 2^{8a+2} phi ln(3n) |A|
};

// Reduce, decompose with normalized cuts at threshold 3 phi, pull back.
inline VertexDecomposition decompose_vertex(const VertexCapGraph& g, const NodeWeighting& A, const DecompParams& p) {
  if (static_cast<int>(A.size()) != g.n()) throw Error(ErrorKind::structural, "node-weighting size does not match graph");
  VertexDecomposition r{reduce(g, A), {}, {}, 0, 0};
  const int nec = r.reduction.graph.n();
  detail::check_params(p, nec);
  const long double a = p.alpha;
  const double phi_oracle = static_cast<double>(detail::pow2(8 * a + 1) * 3 * p.phi);
  const auto& map = r.reduction.map;
  r.ec = detail::run_sequence(r.reduction.graph, r.reduction.weights, p, 0, phi_oracle,
                              [&map](const MovingCut& c) { return normalize_cut(c, map); });
  r.ec.drop_factor = detail::pow2(-8 * a - 2) / (9 * p.phi);
  r.ec.rise_factor = 0;
  r.size_bound = 9 * detail::pow2(8 * a + 2) * p.phi * detail::log_n(nec) * to_long_double(weight_size(A));
  r.ec.size_bound = r.size_bound;
  r.cut = pull_cut(r.ec.combined, map);
  r.cut_size = lcx::cut_size(g, r.cut);
  if (r.cut_size > lcx::cut_size(r.reduction.graph, r.ec.combined))
    throw Error(ErrorKind::internal, "vertex cut larger than its reduced cut");
  if (to_long_double(r.ec.total_size) > r.size_bound)
    throw Error(ErrorKind::internal, "vertex decomposition exceeds its size bound: " + detail::trace(r.ec));
  return r;
}

}  // namespace lcx
