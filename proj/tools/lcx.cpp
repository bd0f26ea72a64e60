#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lcx/lcx.hpp"

using namespace lcx;
namespace fs = std::filesystem;

namespace {

// Everything a command needs, in one replayable object. A counterexample
// file is this bundle plus the name of the failing check.
struct Bundle {
  std::string command;
  Json graph;
  Json demand;
  Json flow;
  Json weights;
  Length h = 8;
  Length s = 0;                // 0: smallest legal value
  std::optional<double> phi;   // unset: command default
  double alpha = 1.0;
  std::optional<double> epsilon;
  std::uint64_t seed = 0;
  int paths = 6;

  Json to_json() const {
    Json j = {{"command", command}, {"graph", graph}};
    if (!demand.is_null()) j["demand"] = demand;
    if (!flow.is_null()) j["flow"] = flow;
    if (!weights.is_null()) j["weights"] = weights;
    j["params"] = {{"h", h}, {"s", s}, {"alpha", alpha}, {"seed", seed}, {"paths", paths}};
    if (phi) j["params"]["phi"] = *phi;
    if (epsilon) j["params"]["epsilon"] = *epsilon;
    return j;
  }

  static Bundle from_json(const Json& j) {
    return detail::io_guard("counterexample", [&] {
      Bundle b;
      b.command = j.at("command").get<std::string>();
      b.graph = j.at("graph");
      b.demand = j.value("demand", Json());
      b.flow = j.value("flow", Json());
      b.weights = j.value("weights", Json());
      const auto& p = j.at("params");
      b.h = p.at("h").get<Length>();
      b.s = p.at("s").get<Length>();
      b.alpha = p.at("alpha").get<double>();
      b.seed = p.at("seed").get<std::uint64_t>();
      b.paths = p.at("paths").get<int>();
      if (p.contains("phi")) b.phi = p.at("phi").get<double>();
      if (p.contains("epsilon")) b.epsilon = p.at("epsilon").get<double>();
      return b;
    });
  }
};

struct Run {
  VerificationReport report;
  Json artifact;
  std::vector<std::pair<std::string, Bundle>> failures;  // check name, inputs

  void add(const Bundle& b, CheckRecord r) {
    if (!r.pass) failures.push_back({r.name, b});
    report.add(std::move(r));
  }
};

double num(const Rational& r) { return to_double(r); }

// Smallest s with s*alpha > 4 log2(n) and h*s even.
Length legal_s(int n, Length h, double alpha, Length at_least = 1) {
  Length s = at_least;
  const double lg = n >= 2 ? std::log2(static_cast<double>(n)) : 0.0;
  while (!(static_cast<double>(s) * alpha > 4 * lg) || (h * s) % 2 != 0) ++s;
  return s;
}

NodeWeighting weights_of(const Bundle& b, int n) {
  if (b.weights.is_null()) return NodeWeighting(n, Rational(1));
  auto A = weighting_from_json(b.weights);
  if (static_cast<int>(A.size()) != n) throw Error(ErrorKind::structural, "weighting size does not match graph");
  return A;
}

ShortcutParams shortcut_params(const Bundle& b, int n) {
  ShortcutParams p;
  p.h = b.h;
  p.alpha = b.alpha;
  p.phi = b.phi;
  if (b.s > 0) {
    p.epsilon = 1.0 / static_cast<double>(b.s);
  } else if (b.epsilon) {
    p.epsilon = *b.epsilon;
  } else {
    // k = 2 needs s >= 12; the reduced graph has 3n vertices
    p.epsilon = 1.0 / static_cast<double>(legal_s(3 * n, 2, b.alpha, 12));
  }
  return p;
}

PathFlow flow_in_g(const Bundle& b, const VertexCapGraph& g) {
  if (!b.flow.is_null()) return flow_from_json(b.flow);
  return random_feasible_flow(g, b.h, b.paths, b.seed);
}

// ---------------------------------------------------------------- commands

void decompose(const Bundle& b, Run& run) {
  const double phi = b.phi.value_or(0.05);
  if (graph_kind(b.graph) == "directed") {
    auto g = directed_from_json(b.graph);
    DecompParams p{.h = b.h, .s = b.s > 0 ? b.s : legal_s(g.n(), b.h, b.alpha), .phi = phi, .alpha = b.alpha};
    auto seq = decompose_directed(g, weights_of(b, g.n()), p);
    auto chk = check_sequence(g, seq);
    run.artifact = to_json(seq);
    Json in = b.to_json();
    run.add(b, run_check("decompose.size_bound", "sum |C_i| <= 2^(8a+2) phi ln(n) |A|", in, [&](Json& m, Json& bd) {
      m["total_size"] = rational_str(seq.total_size);
      bd["size_bound"] = static_cast<double>(seq.size_bound);
      return chk.size_ok;
    }));
    run.add(b, run_check("decompose.potential_drop", "Pi_before - Pi_after_cut >= 2^(-8a-2) |C_i| / phi", in,
                         [&](Json& m, Json& bd) {
                           m["iterations"] = seq.steps.size();
                           bd["drop_factor"] = static_cast<double>(seq.drop_factor);
                           return chk.drops_ok;
                         }));
    run.add(b, run_check("decompose.potential_replay", "recorded potentials replay and never increase", in,
                         [&](Json& m, Json&) {
                           m["failures"] = chk.failures;
                           return chk.monotone && chk.rises_ok;
                         }));
    return;
  }
  auto g = vertexcap_from_json(b.graph);
  DecompParams p{.h = b.h, .s = b.s > 0 ? b.s : legal_s(3 * g.n(), b.h, b.alpha), .phi = phi, .alpha = b.alpha};
  auto dec = decompose_vertex(g, weights_of(b, g.n()), p);
  auto chk = check_sequence(dec.reduction.graph, dec.ec);
  run.artifact = to_json(dec);
  Json in = b.to_json();
  run.add(b, run_check("decompose.size_bound", "|C_vc| <= 9 2^(8a+2) phi ln(3n) |A|", in, [&](Json& m, Json& bd) {
    m["cut_size"] = rational_str(dec.cut_size);
    m["reduced_total"] = rational_str(dec.ec.total_size);
    bd["size_bound"] = static_cast<double>(dec.size_bound);
    return chk.size_ok && static_cast<long double>(num(dec.cut_size)) <= dec.size_bound;
  }));
  run.add(b, run_check("decompose.potential_drop", "Pi drop per cut >= 2^(-8a-2) |C_i| / (9 phi)", in,
                       [&](Json& m, Json& bd) {
                         m["iterations"] = dec.ec.steps.size();
                         bd["drop_factor"] = static_cast<double>(dec.ec.drop_factor);
                         return chk.drops_ok;
                       }));
  run.add(b, run_check("decompose.distance_coherence", "dist in G_vc - C equals mid-to-mid dist in the reduced cut graph",
                       in, [&](Json& m, Json&) {
                         auto gv = apply_cut(g, dec.cut);
                         auto ge = apply_cut(dec.reduction.graph, push_cut(dec.cut, dec.reduction.map));
                         auto dv = all_pairs_dist(gv);
                         auto de = all_pairs_dist(ge);
                         int bad = 0;
                         for (Vertex u = 0; u < g.n(); ++u)
                           for (Vertex v = 0; v < g.n(); ++v)
                             if (u != v && dv[u][v] != de[dec.reduction.map.mid(u)][dec.reduction.map.mid(v)]) ++bad;
                         m["mismatched_pairs"] = bad;
                         return bad == 0;
                       }));
}

ShortcutHierarchy shortcut(const Bundle& b, Run& run, bool keep_artifact = true) {
  auto g = vertexcap_from_json(b.graph);
  auto H = build_shortcut(g, shortcut_params(b, g.n()));
  auto rep = check_hierarchy(H);
  if (keep_artifact) run.artifact = to_json(H);
  Json in = b.to_json();
  run.add(b, run_check("shortcut.weights", "A_{i+1} = 4 s^2 sum_j deg C_{i+1,j}", in, [&](Json& m, Json&) {
    m["levels"] = H.d() + 1;
    return rep.weights_exact;
  }));
  run.add(b, run_check("shortcut.size", "|E'| <= (d+1) ceil(log2 h) width n", in, [&](Json& m, Json& bd) {
    m["size"] = rep.size;
    m["width"] = H.width;
    bd["size_bound"] = rep.size_bound;
    return rep.size_ok;
  }));
  run.add(b, run_check("shortcut.termination", "|A_{d+1}| = 0", in, [&](Json& m, Json&) {
    m["final_size"] = rational_str(weight_size(H.final_A));
    return rep.terminated;
  }));
  run.add(b, run_check("shortcut.covers_and_stars", "covers valid in G - C; stars match clusters", in,
                       [&](Json& m, Json&) {
                         m["failures"] = rep.failures;
                         return rep.covers_ok && rep.stars_ok;
                       }));
  return H;
}

void route(const Bundle& b, Run& run) {
  if (b.demand.is_null()) throw Error(ErrorKind::precondition, "route needs --demand");
  auto D = demand_from_json(b.demand);
  LpSolution sol;
  DirectedGraph host;
  if (graph_kind(b.graph) == "directed") {
    host = directed_from_json(b.graph);
    sol = solve_concurrent_flow(host, D, b.h);
  } else {
    auto vs = solve_concurrent_flow(vertexcap_from_json(b.graph), D, b.h);
    host = vs.reduction.graph;
    sol = std::move(vs.lp);
  }
  run.artifact = to_json(sol);
  Json in = b.to_json();
  run.add(b, run_check("route.duality", "|z - L| <= 1e-7 max(1, z); primal and dual feasible", in,
                       [&](Json& m, Json& bd) {
                         m["z"] = sol.z;
                         m["status"] = run.artifact["status"];
                         if (sol.status != LpSolution::Status::optimal) return true;
                         auto chk = check_solution(host, sol);
                         m["L"] = sol.objective;
                         m["gap"] = chk.gap;
                         m["primal_violation"] = chk.primal_violation;
                         m["dual_violation"] = chk.dual_violation;
                         bd["gap"] = 1e-7 * std::max(1.0, sol.z);
                         return chk.ok(sol.z);
                       }));
}

void forward(const Bundle& b, Run& run, const ShortcutHierarchy& H, PathFlow* out = nullptr) {
  auto F = flow_in_g(b, H.g);
  auto R = forward_map(F, H);
  auto rep = check_forward(F, R, H);
  if (out) *out = R.flow;
  Json in = b.to_json();
  if (b.flow.is_null()) in["flow"] = to_json(F);
  Bundle fb = Bundle::from_json(in);
  fb.command = "forward";
  run.add(fb, run_check("forward.demand", "Dem(F') = Dem(F)", in, [&](Json&, Json&) { return rep.demand_ok; }));
  run.add(fb, run_check("forward.congestion", "congestion in G u E' <= 1", in, [&](Json& m, Json& bd) {
    m["congestion"] = rational_str(rep.congestion);
    bd["congestion"] = 1;
    return rep.congestion_ok;
  }));
  run.add(fb, run_check("forward.step", "step <= 6 2^(d+1) - 4", in, [&](Json& m, Json& bd) {
    m["max_step"] = rep.max_step;
    bd["step"] = rep.step_bound;
    return rep.step_ok;
  }));
  run.add(fb, run_check("forward.length", "leng(P') <= 20 (d+1) s^2 leng(P)", in, [&](Json& m, Json& bd) {
    m["worst_ratio"] = rep.worst_length_ratio;
    bd["ratio"] = 20.0 * (H.d() + 1) * static_cast<double>(H.s * H.s);
    return rep.length_ok;
  }));
  if (!out) {
    Json src = Json::array();
    for (int q : R.source) src.push_back(q);
    run.artifact = {{"flow", to_json(R.flow)}, {"source", src}};
  }
}

void backward(const Bundle& b, Run& run, const ShortcutHierarchy& H, const PathFlow& Fp) {
  auto B = backward_map(Fp, H);
  Json in = b.to_json();
  Bundle bb = b;
  bb.command = "backward";
  bb.flow = to_json(Fp);
  in["command"] = "backward";
  in["flow"] = bb.flow;
  run.add(bb, run_check("backward.demand", "Dem(F) = Dem(F')", in,
                        [&](Json&, Json&) { return routed_demand(B.flow) == routed_demand(Fp); }));
  run.add(bb, run_check("backward.length", "leng(P, G) <= leng(P', G') per path", in, [&](Json& m, Json&) {
    bool ok = true;
    for (std::size_t q = 0; q < B.flow.paths.size(); ++q)
      ok = ok && path_length(H.g, B.flow.paths[q].path) <= path_length(H.gprime, Fp.paths[B.source[q]].path);
    m["paths"] = B.flow.paths.size();
    return ok;
  }));
  run.add(bb, run_check("backward.segments", "each star segment reroutes within h_diam s, respecting and h-length", in,
                        [&](Json& m, Json&) {
                          bool ok = true;
                          Json segs = Json::array();
                          for (const auto& s : B.segments) {
                            const Length cap = H.at(s.level, s.scale).h_diam * H.s;
                            ok = ok && s.respecting && s.h_length && s.max_length <= cap;
                            segs.push_back({{"level", s.level},
                                            {"scale", s.scale},
                                            {"max_length", s.max_length},
                                            {"bound", cap},
                                            {"lp_congestion", s.lp_congestion}});
                          }
                          m["segments"] = segs;
                          return ok;
                        }));
  run.add(bb, run_check("backward.congestion", "total congestion in G is finite (reported)", in, [&](Json& m, Json&) {
    m["congestion"] = rational_str(B.congestion);
    return true;
  }));
  run.artifact = {{"flow", to_json(B.flow)}};
}

void verify(const Bundle& b, Run& run) {
  Json in = b.to_json();
  if (graph_kind(b.graph) == "directed") {
    auto g = directed_from_json(b.graph);
    decompose(b, run);
    run.add(b, run_check("exponential.symmetry", "exponential demand is symmetric", in, [&](Json& m, Json&) {
      auto D = exponential_demand(g, weights_of(b, g.n()), b.h, b.alpha);
      m["pairs"] = D.entries().size();
      return is_symmetric(D);
    }));
    Bundle rb = b;
    if (rb.demand.is_null()) {
      SplitMix64 rng(b.seed);
      Demand D;
      for (int k = 0; k < 3 && g.n() >= 2; ++k)
        D.add(static_cast<Vertex>(rng.uniform(0, g.n() - 1)), static_cast<Vertex>(rng.uniform(0, g.n() - 1)),
              Rational(rng.uniform(1, 4)));
      rb.demand = to_json(D);
    }
    rb.command = "route";
    route(rb, run);
    run.artifact = Json::object();
    return;
  }
  auto g = vertexcap_from_json(b.graph);
  run.add(b, run_check("reduction.distances", "dist_vc(u,v) = dist_ec(u_mid, v_mid); counts 3n and 3n+2m", in,
                       [&](Json& m, Json&) {
                         auto r = reduce(g);
                         auto dv = all_pairs_dist(g);
                         auto de = all_pairs_dist(r.graph);
                         int bad = 0;
                         for (Vertex u = 0; u < g.n(); ++u)
                           for (Vertex v = 0; v < g.n(); ++v)
                             if (u != v && dv[u][v] != de[r.map.mid(u)][r.map.mid(v)]) ++bad;
                         m["mismatched_pairs"] = bad;
                         return bad == 0 && r.graph.n() == 3 * g.n() && r.graph.m() == 3 * g.n() + 2 * g.m();
                       }));
  run.add(b, run_check("cover.invariants", "covering, diameter <= (2k-1) h_cov, disjoint clusterings", in,
                       [&](Json& m, Json& bd) {
                         auto cov = build_cover(g, b.h, 2);
                         auto rep = verify_cover(g, cov);
                         m["width"] = rep.width;
                         m["max_diameter"] = rep.max_diameter;
                         bd["diameter"] = 3 * b.h;
                         return rep.covering && rep.diameter && rep.disjoint;
                       }));
  Bundle db = b;
  db.command = "decompose";
  decompose(db, run);
  Bundle sb = b;
  sb.command = "shortcut";
  auto H = shortcut(sb, run, false);
  PathFlow Fp;
  forward(b, run, H, &Fp);
  backward(b, run, H, Fp);
  run.artifact = Json::object();
}

Run execute(const Bundle& b) {
  Run run;
  if (b.command == "decompose") {
    decompose(b, run);
  } else if (b.command == "shortcut") {
    shortcut(b, run);
  } else if (b.command == "route") {
    route(b, run);
  } else if (b.command == "forward") {
    auto H = shortcut(b, run, false);
    forward(b, run, H);
  } else if (b.command == "backward") {
    auto H = shortcut(b, run, false);
    PathFlow Fp;
    if (!b.flow.is_null()) {
      Fp = flow_from_json(b.flow);
    } else {
      forward(b, run, H, &Fp);
    }
    backward(b, run, H, Fp);
  } else if (b.command == "verify") {
    verify(b, run);
  } else {
    throw Error(ErrorKind::precondition, "unknown command " + b.command);
  }
  return run;
}

// Writes one counterexample bundle per failed check; returns its path.
void finish(Run& run, const std::string& out, const std::string& report) {
  if (!out.empty() && !run.artifact.is_null() && !run.artifact.empty()) write_json_file(out, run.artifact);
  if (!run.failures.empty()) {
    fs::path dir = report.empty() ? fs::path("counterexamples") : fs::path(report).parent_path() / "counterexamples";
    fs::create_directories(dir);
    VerificationReport fixed;
    for (auto r : run.report.records()) {
      for (const auto& [name, bundle] : run.failures)
        if (name == r.name) {
          Json ce = bundle.to_json();
          ce["check"] = name;
          auto path = (dir / (name + ".json")).string();
          write_json_file(path, ce);
          r.counterexample = path;
        }
      fixed.add(r);
    }
    run.report = std::move(fixed);
  }
  Json rep = run.report.to_json();
  if (report.empty()) {
    std::cout << rep.dump(2) << "\n";
  } else {
    write_json_file(report, rep);
  }
}

Json generate(const std::string& kind, const GenParams& p) {
  if (kind == "random-digraph") return to_json(random_digraph(p));
  if (kind == "random-vertexcap") return to_json(random_vertexcap(p));
  if (kind == "dumbbell") return to_json(dumbbell(p));
  if (kind == "clique-chain") return to_json(clique_chain(p));
  if (kind == "path") return to_json(path_graph(p));
  if (kind == "star-of-cliques") return to_json(star_of_cliques(p));
  throw Error(ErrorKind::precondition, "unknown graph kind " + kind);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Length-constrained expander decompositions and flow shortcuts"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  std::string kind;
  GenParams gp;
  std::string out, report, graph, demand, flow, weights, replay;
  Bundle b;
  double phi = 0, epsilon = 0;

  auto* gen = app.add_subcommand("gen", "Generate a graph instance");
  gen->add_option("--kind", kind, "random-digraph|random-vertexcap|dumbbell|clique-chain|path|star-of-cliques")
      ->required();
  gen->add_option("--n", gp.n, "Vertex count")->required();
  gen->add_option("--seed", gp.seed, "PRNG seed");
  gen->add_option("--max-len", gp.max_len, "Largest length");
  gen->add_option("--max-cap", gp.max_cap, "Largest capacity");
  gen->add_option("--density", gp.density, "Extra-edge probability");
  gen->add_option("--cliques", gp.cliques, "Clique count");
  gen->add_option("--hub-cap", gp.hub_cap, "Hub capacity (star-of-cliques)");
  gen->add_option("--clique-cap", gp.clique_cap, "Clique capacity (star-of-cliques)");
  gen->add_option("--out", out, "Output file (default stdout)");

  std::vector<CLI::App*> runs;
  for (const char* name : {"decompose", "shortcut", "route", "forward", "backward", "verify"}) {
    auto* c = app.add_subcommand(name, std::string("Run ") + name + " and verify its guarantees");
    c->add_option("--graph", graph, "Graph JSON file");
    c->add_option("--demand", demand, "Demand JSON file");
    c->add_option("--flow", flow, "Path-flow JSON file");
    c->add_option("--weights", weights, "Node-weighting JSON file (default all ones)");
    c->add_option("--h", b.h, "Length bound h");
    c->add_option("--s", b.s, "Length slack s (default: smallest legal)");
    c->add_option("--phi", phi, "Conductance target");
    c->add_option("--alpha", b.alpha, "Exponential demand parameter");
    c->add_option("--epsilon", epsilon, "Shortcut parameter, s = 1/epsilon");
    c->add_option("--seed", b.seed, "Seed for generated flows and demands");
    c->add_option("--paths", b.paths, "Paths in a generated flow");
    c->add_option("--out", out, "Artifact output file");
    c->add_option("--report", report, "Report output file (default stdout)");
    if (std::string(name) == "verify") c->add_option("--replay", replay, "Counterexample file to replay");
    runs.push_back(c);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      Json g = generate(kind, gp);
      if (out.empty()) {
        std::cout << g.dump(2) << "\n";
      } else {
        write_json_file(out, g);
      }
      return 0;
    }
    for (auto* c : runs) {
      if (!c->parsed()) continue;
      if (!replay.empty()) {
        Json ce = read_json_file(replay);
        Bundle rb = Bundle::from_json(ce);
        Run run = execute(rb);
        finish(run, out, report);
        const std::string check = ce.value("check", "");
        for (const auto& r : run.report.records())
          if (r.name == check) return r.pass ? 0 : 1;
        return run.report.all_passed() ? 0 : 1;
      }
      if (graph.empty()) throw Error(ErrorKind::precondition, "--graph is required");
      b.command = c->get_name();
      b.graph = read_json_file(graph);
      if (!demand.empty()) b.demand = read_json_file(demand);
      if (!flow.empty()) b.flow = read_json_file(flow);
      if (!weights.empty()) b.weights = read_json_file(weights);
      if (c->count("--phi")) b.phi = phi;
      if (c->count("--epsilon")) b.epsilon = epsilon;
      Run run = execute(b);
      finish(run, out, report);
      return run.report.all_passed() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "lcx: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "lcx: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
