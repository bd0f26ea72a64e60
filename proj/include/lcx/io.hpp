#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lcx/concurrent_flow.hpp"
#include "lcx/cover.hpp"
#include "lcx/decomposition.hpp"
#include "lcx/shortcut.hpp"

namespace lcx {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------- scalars

inline std::string rational_str(const Rational& r) {
  return format_rational(r);
}

namespace detail {

template <class F>
auto io_guard(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::io, std::string("malformed ") + what + ": " + e.what());
  }
}

inline Rational rational_of(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw Error(ErrorKind::io, "expected a rational string");
}

}  // namespace detail

inline Json to_json(const NodeWeighting& A) {
  Json j = Json::array();
  for (const auto& a : A) j.push_back(rational_str(a));
  return j;
}

inline NodeWeighting weighting_from_json(const Json& j) {
  return detail::io_guard("node-weighting", [&] {
    NodeWeighting A;
    for (const auto& x : j) A.push_back(detail::rational_of(x));
    return A;
  });
}

// ---------------------------------------------------------------- graphs

inline Json to_json(const DirectedGraph& g) {
  Json es = Json::array();
  for (const auto& e : g.edges()) es.push_back({{"tail", e.tail}, {"head", e.head}, {"length", e.length}, {"capacity", e.capacity}});
  return {{"kind", "directed"}, {"n", g.n()}, {"N", g.N()}, {"edges", es}};
}

inline Json to_json(const VertexCapGraph& g) {
  Json vs = Json::array(), es = Json::array();
  for (const auto& v : g.vertices()) vs.push_back({{"length", v.length}, {"capacity", v.capacity}});
  for (const auto& e : g.edges()) es.push_back({{"u", e.u}, {"v", e.v}, {"length", e.length}, {"capacity", e.capacity}});
  return {{"kind", "vertex-capacitated"}, {"N", g.N()}, {"vertices", vs}, {"edges", es}};
}

inline std::string graph_kind(const Json& j) {
  return detail::io_guard("graph", [&] { return j.at("kind").get<std::string>(); });
}

inline DirectedGraph directed_from_json(const Json& j) {
  return detail::io_guard("directed graph", [&] {
    if (graph_kind(j) != "directed") throw Error(ErrorKind::io, "graph is not directed");
    std::vector<Arc> es;
    for (const auto& e : j.at("edges"))
      es.push_back({e.at("tail").get<Vertex>(), e.at("head").get<Vertex>(), e.at("length").get<Length>(),
                    e.at("capacity").get<std::int64_t>()});
    return DirectedGraph(j.at("n").get<int>(), std::move(es), j.at("N").get<std::int64_t>());
  });
}

inline VertexCapGraph vertexcap_from_json(const Json& j) {
  return detail::io_guard("vertex-capacitated graph", [&] {
    if (graph_kind(j) != "vertex-capacitated") throw Error(ErrorKind::io, "graph is not vertex-capacitated");
    std::vector<VertexAttr<std::int64_t>> vs;
    for (const auto& v : j.at("vertices")) vs.push_back({v.at("length").get<Length>(), v.at("capacity").get<std::int64_t>()});
    std::vector<UEdge<std::int64_t>> es;
    for (const auto& e : j.at("edges"))
      es.push_back({e.at("u").get<Vertex>(), e.at("v").get<Vertex>(), e.at("length").get<Length>(),
                    e.at("capacity").get<std::int64_t>()});
    return VertexCapGraph(std::move(vs), std::move(es), j.at("N").get<std::int64_t>());
  });
}

inline Json to_json(const ShortcutGraph& g, int original_n) {
  Json vs = Json::array(), es = Json::array();
  for (const auto& v : g.vertices()) vs.push_back({{"length", v.length}, {"capacity", rational_str(v.capacity)}});
  for (const auto& e : g.edges())
    es.push_back({{"u", e.u}, {"v", e.v}, {"length", e.length}, {"capacity", rational_str(e.capacity)}});
  return {{"kind", "shortcut"}, {"original_n", original_n}, {"vertices", vs}, {"edges", es}};
}

// ---------------------------------------------------------------- demands, paths, flows

inline Json to_json(const Demand& d) {
  Json es = Json::array();
  for (const auto& [k, x] : d.entries()) es.push_back({{"u", k.first}, {"v", k.second}, {"value", rational_str(x)}});
  return {{"entries", es}};
}

inline Json to_json(const RealDemand& d) {
  Json es = Json::array();
  for (const auto& [k, x] : d.entries()) es.push_back({{"u", k.first}, {"v", k.second}, {"value", x}});
  return {{"entries", es}};
}

// Accepts exact ("num/den") or numeric values; numbers are taken exactly.
inline Demand demand_from_json(const Json& j) {
  return detail::io_guard("demand", [&] {
    Demand d;
    for (const auto& e : j.at("entries")) {
      const auto& v = e.at("value");
      Rational x = v.is_number_float() ? exact_rational(v.get<double>()) : detail::rational_of(v);
      d.add(e.at("u").get<Vertex>(), e.at("v").get<Vertex>(), x);
    }
    return d;
  });
}

inline Json to_json(const Path& p) { return {{"verts", p.verts}, {"edges", p.edges}}; }

inline Path path_from_json(const Json& j) {
  return detail::io_guard("path", [&] {
    return Path{j.at("verts").get<std::vector<Vertex>>(), j.at("edges").get<std::vector<EdgeId>>()};
  });
}

inline Json to_json(const PathFlow& f) {
  Json ps = Json::array();
  for (const auto& fp : f.paths) {
    Json p = to_json(fp.path);
    p["value"] = rational_str(fp.value);
    ps.push_back(std::move(p));
  }
  return {{"paths", ps}};
}

inline Json to_json(const RealPathFlow& f) {
  Json ps = Json::array();
  for (const auto& fp : f.paths) {
    Json p = to_json(fp.path);
    p["value"] = fp.value;
    ps.push_back(std::move(p));
  }
  return {{"paths", ps}};
}

inline PathFlow flow_from_json(const Json& j) {
  return detail::io_guard("flow", [&] {
    PathFlow f;
    for (const auto& p : j.at("paths")) {
      const auto& v = p.at("value");
      f.add(path_from_json(p), v.is_number_float() ? exact_rational(v.get<double>()) : detail::rational_of(v));
    }
    return f;
  });
}

// ---------------------------------------------------------------- cuts and decompositions

inline Json to_json(const MovingCut& c) { return {{"H", c.H}, {"edge", c.edge}, {"vertex", c.vertex}}; }

inline MovingCut cut_from_json(const Json& j) {
  return detail::io_guard("moving cut", [&] {
    return MovingCut{j.at("H").get<std::int64_t>(), j.at("edge").get<std::vector<std::int64_t>>(),
                     j.value("vertex", std::vector<std::int64_t>{})};
  });
}

inline Json to_json(const ExpansionCertificate& c) {
  return {{"kind", c.kind},
          {"length", c.length},
          {"congestion", c.congestion},
          {"congestion_full", c.congestion_full},
          {"gamma", c.gamma},
          {"phi_oracle", c.phi_oracle},
          {"loss_factor", c.loss_factor},
          {"empty_demand", c.empty_demand}};
}

inline Json to_json(const CutSequence& s) {
  Json steps = Json::array();
  for (const auto& st : s.steps)
    steps.push_back({{"cut", to_json(st.cut)},
                     {"size", rational_str(st.size)},
                     {"separated", rational_str(st.separated)},
                     {"lp_objective", st.lp_objective},
                     {"potential_before", static_cast<double>(st.potential_before)},
                     {"potential_mid", static_cast<double>(st.potential_mid)},
                     {"potential_after", static_cast<double>(st.potential_after)}});
  return {{"h", s.h},
          {"H", s.H},
          {"phi", s.phi},
          {"alpha", s.alpha},
          {"phi_oracle", s.phi_oracle},
          {"ell", rational_str(s.ell)},
          {"n", s.n},
          {"initial_A", to_json(s.initial_A)},
          {"final_A", to_json(s.final_A)},
          {"steps", steps},
          {"combined", to_json(s.combined)},
          {"total_size", rational_str(s.total_size)},
          {"size_bound", static_cast<double>(s.size_bound)},
          {"drop_factor", static_cast<double>(s.drop_factor)},
          {"rise_factor", static_cast<double>(s.rise_factor)},
          {"certificate", to_json(s.certificate)}};
}

inline Json to_json(const VertexDecomposition& d) {
  return {{"cut", to_json(d.cut)},
          {"cut_size", rational_str(d.cut_size)},
          {"size_bound", static_cast<double>(d.size_bound)},
          {"reduced", to_json(d.ec)}};
}

inline Json to_json(const NeighborhoodCover& c) {
  return {{"h_cov", c.h_cov}, {"k", c.k}, {"h_diam", c.h_diam}, {"width", c.width()}, {"clusterings", c.clusterings}};
}

inline NeighborhoodCover cover_from_json(const Json& j) {
  return detail::io_guard("cover", [&] {
    return NeighborhoodCover{j.at("h_cov").get<Length>(), j.at("k").get<int>(), j.at("h_diam").get<Length>(),
                             j.at("clusterings").get<std::vector<Clustering>>()};
  });
}

// ---------------------------------------------------------------- shortcut hierarchy

inline Json to_json(const StarGraph& s) {
  Json caps = Json::array();
  for (const auto& c : s.leaf_capacity) caps.push_back(rational_str(c));
  return {{"level", s.level},         {"scale", s.scale},   {"clustering", s.clustering},
          {"cluster", s.cluster},     {"center", s.center}, {"leaves", s.leaves},
          {"edges", s.edges},         {"h_star", s.h_star}, {"center_capacity", rational_str(s.center_capacity)},
          {"leaf_capacity", caps}};
}

inline Json to_json(const ShortcutHierarchy& H) {
  Json levels = Json::array();
  for (int i = 0; i <= H.d(); ++i) {
    Json scales = Json::array();
    for (const auto& sc : H.levels[i].scales)
      scales.push_back({{"j", sc.j},
                        {"h_j", sc.h_j},
                        {"h_cov", sc.h_cov},
                        {"h_diam", sc.h_diam},
                        {"cut", to_json(sc.cut)},
                        {"cut_size", rational_str(sc.decomposition.cut_size)},
                        {"cover", to_json(sc.cover)},
                        {"stars", sc.stars}});
    levels.push_back({{"i", i}, {"A", to_json(H.levels[i].A)}, {"scales", scales}});
  }
  Json stars = Json::array();
  for (const auto& s : H.stars) stars.push_back(to_json(s));
  Json eprime = Json::array();
  for (const auto& e : H.shortcut_edges())
    eprime.push_back({{"u", e.u}, {"v", e.v}, {"length", e.length}, {"capacity", rational_str(e.capacity)}});
  return {{"graph", to_json(H.g)},
          {"h", H.h},
          {"s", H.s},
          {"alpha", H.alpha},
          {"phi", H.phi},
          {"k", H.k},
          {"scales", H.scales},
          {"d", H.d()},
          {"width", H.width},
          {"levels", levels},
          {"final_A", to_json(H.final_A)},
          {"stars", stars},
          {"shortcut_edges", eprime}};
}

// ---------------------------------------------------------------- LP

inline Json to_json(const LpSolution& s) {
  const char* st = s.status == LpSolution::Status::optimal ? "optimal"
                   : s.status == LpSolution::Status::no_path ? "no-path"
                                                              : "empty-demand";
  Json coms = Json::array();
  for (const auto& c : s.commodities) coms.push_back({{"s", c.s}, {"t", c.t}, {"d", c.d}});
  return {{"status", st},           {"h", s.h},
          {"z", s.z},               {"congestion", s.congestion()},
          {"objective", s.objective}, {"iterations", s.iterations},
          {"path_count", s.path_count}, {"commodities", coms},
          {"edge_length", s.edge_length}, {"credit", s.credit}};
}

// ---------------------------------------------------------------- reports

// FNV-1a over the compact dump: a stable digest for report records.
inline std::string digest(const Json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

struct CheckRecord {
  std::string name;
  std::string property;  // the inequality or identity being checked
  std::string inputs_digest;
  Json measured = Json::object();
  Json bound = Json::object();
  bool pass = false;
  double runtime_ms = 0;
  std::string counterexample;  // replay file, set on failure
};

class VerificationReport {
 public:
  void add(CheckRecord r) { records_.push_back(std::move(r)); }
  const std::vector<CheckRecord>& records() const { return records_; }
  bool all_passed() const {
    return std::all_of(records_.begin(), records_.end(), [](const auto& r) { return r.pass; });
  }

  // Records sorted by name so assembly order does not matter.
  Json to_json() const {
    auto rs = records_;
    std::stable_sort(rs.begin(), rs.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    Json checks = Json::array();
    int passed = 0;
    for (const auto& r : rs) {
      Json c = {{"name", r.name},       {"property", r.property}, {"inputs_digest", r.inputs_digest},
                {"measured", r.measured}, {"bound", r.bound},       {"pass", r.pass},
                {"runtime_ms", r.runtime_ms}};
      if (!r.counterexample.empty()) c["counterexample"] = r.counterexample;
      checks.push_back(std::move(c));
      passed += r.pass;
    }
    return {{"checks", checks},
            {"summary", {{"total", rs.size()}, {"passed", passed}, {"failed", static_cast<int>(rs.size()) - passed}}}};
  }

 private:
  std::vector<CheckRecord> records_;
};

// Runs `body` (returning pass/fail and filling measured/bound) and times it.
template <class F>
CheckRecord run_check(std::string name, std::string property, const Json& inputs, F&& body) {
  CheckRecord r;
  r.name = std::move(name);
  r.property = std::move(property);
  r.inputs_digest = digest(inputs);
  auto t0 = std::chrono::steady_clock::now();
  r.pass = body(r.measured, r.bound);
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// ---------------------------------------------------------------- files

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::io, "cannot parse " + path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw Error(ErrorKind::io, "write failed for " + path);
}

}  // namespace lcx
