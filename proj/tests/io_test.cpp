#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "lcx/io.hpp"
#include "lcx/random.hpp"

using namespace lcx;

TEST(Io, RationalStrings) {
  EXPECT_EQ(rational_str(Rational(3, 6)), "1/2");
  EXPECT_EQ(rational_str(Rational(-4)), "-4/1");
  EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("123456789012345678901234567890/7"),
            Rational(BigInt("123456789012345678901234567890"), 7));
  for (const char* bad : {"1/0", "x", "1/y", ""}) {
    try {
      parse_rational(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::io) << bad;
    }
  }
}

TEST(Io, GraphRoundTrips) {
  auto d = random_digraph({.n = 6, .seed = 4, .max_len = 5, .max_cap = 7, .density = 0.3});
  auto d2 = directed_from_json(Json::parse(to_json(d).dump()));
  EXPECT_EQ(to_json(d2).dump(), to_json(d).dump());
  EXPECT_EQ(d2.m(), d.m());
  auto v = random_vertexcap({.n = 7, .seed = 2, .max_len = 4, .max_cap = 9, .density = 0.3});
  auto v2 = vertexcap_from_json(Json::parse(to_json(v).dump()));
  EXPECT_EQ(to_json(v2).dump(), to_json(v).dump());
  EXPECT_EQ(graph_kind(to_json(v)), "vertex-capacitated");
  EXPECT_THROW(directed_from_json(to_json(v)), Error);
}

TEST(Io, SameSeedSameBytes) {
  auto a = to_json(star_of_cliques({.n = 7, .seed = 9, .max_len = 3, .cliques = 2})).dump(2);
  auto b = to_json(star_of_cliques({.n = 7, .seed = 9, .max_len = 3, .cliques = 2})).dump(2);
  EXPECT_EQ(a, b);
}

TEST(Io, DemandFlowCutRoundTrips) {
  Demand D;
  D.add(0, 3, Rational(5, 7));
  D.add(2, 1, Rational(BigInt("99999999999999999999"), 3));
  auto D2 = demand_from_json(Json::parse(to_json(D).dump()));
  EXPECT_EQ(D2.entries(), D.entries());
  // plain numbers are read exactly
  auto D3 = demand_from_json(Json::parse(R"({"entries":[{"u":0,"v":1,"value":0.1},{"u":1,"v":0,"value":2}]})"));
  EXPECT_EQ(D3.at(0, 1), exact_rational(0.1));
  EXPECT_EQ(D3.at(1, 0), 2);

  auto g = star_of_cliques({.n = 7, .seed = 1, .max_len = 2, .cliques = 2});
  auto F = random_feasible_flow(g, 8, 5, 3);
  auto F2 = flow_from_json(Json::parse(to_json(F).dump()));
  ASSERT_EQ(F2.paths.size(), F.paths.size());
  for (std::size_t i = 0; i < F.paths.size(); ++i) {
    EXPECT_EQ(F2.paths[i].path, F.paths[i].path);
    EXPECT_EQ(F2.paths[i].value, F.paths[i].value);
  }

  MovingCut c{12, {0, 3, 12}, {1, 0}};
  auto c2 = cut_from_json(Json::parse(to_json(c).dump()));
  EXPECT_EQ(c2.H, 12);
  EXPECT_EQ(c2.edge, c.edge);
  EXPECT_EQ(c2.vertex, c.vertex);

  NodeWeighting A{Rational(1, 3), 0, 5};
  EXPECT_EQ(weighting_from_json(to_json(A)), A);

  NeighborhoodCover cov{2, 3, 10, {{{0, 1}, {2}}, {{1, 2}}}};
  auto cov2 = cover_from_json(Json::parse(to_json(cov).dump()));
  EXPECT_EQ(cov2.clusterings, cov.clusterings);
  EXPECT_EQ(cov2.h_diam, 10);
}

TEST(Io, FloatsRoundTripBitExactly) {
  RealDemand d;
  d.add(0, 1, 0.1 + 0.2);
  d.add(1, 0, 1.0 / 3.0);
  auto j = Json::parse(to_json(d).dump());
  EXPECT_EQ(j["entries"][0]["value"].get<double>(), 0.1 + 0.2);
  EXPECT_EQ(j["entries"][1]["value"].get<double>(), 1.0 / 3.0);
}

TEST(Io, MalformedInputsRaiseIoErrors) {
  for (const char* text : {R"({"kind":"directed","n":2})", R"({"kind":"directed","n":"x","N":1,"edges":[]})",
                           R"({"edges":[]})"}) {
    try {
      directed_from_json(Json::parse(text));
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::io) << text;
    }
  }
  EXPECT_THROW(demand_from_json(Json::parse(R"({"entries":[{"u":0,"v":1,"value":"1/0"}]})")), Error);
  EXPECT_THROW(flow_from_json(Json::parse(R"({"paths":[{"verts":[0,1]}]})")), Error);
  EXPECT_THROW(read_json_file("/nonexistent/file.json"), Error);
  // structural problems keep their own kind
  try {
    directed_from_json(Json::parse(R"({"kind":"directed","n":2,"N":1,"edges":[{"tail":0,"head":5,"length":1,"capacity":1}]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::structural);
  }
}

TEST(Io, FileRoundTrip) {
  auto path = (std::filesystem::temp_directory_path() / "lcx_io_test.json").string();
  auto g = path_graph({.n = 5});
  write_json_file(path, to_json(g));
  auto g2 = vertexcap_from_json(read_json_file(path));
  EXPECT_EQ(g2.n(), 5);
  EXPECT_EQ(g2.m(), 4);
  std::remove(path.c_str());
}

TEST(Io, HierarchyDump) {
  auto g = star_of_cliques({.n = 7, .seed = 0, .max_len = 1, .cliques = 2, .hub_cap = 1, .clique_cap = 10000000});
  auto H = build_shortcut(g, {.epsilon = 1.0 / 18, .h = 8});
  auto j = to_json(H);
  EXPECT_EQ(j["d"], H.d());
  EXPECT_EQ(j["levels"].size(), static_cast<std::size_t>(H.d() + 1));
  EXPECT_EQ(j["shortcut_edges"].size(), H.shortcut_size());
  for (const auto& e : j["shortcut_edges"]) EXPECT_GE(e["v"].get<int>(), g.n());
  EXPECT_EQ(weighting_from_json(j["levels"][1]["A"]), H.levels[1].A);
}

TEST(Report, SortedAndSummarized) {
  VerificationReport rep;
  rep.add(run_check("zeta", "x <= 1", Json{{"a", 1}}, [](Json& m, Json& b) {
    m["x"] = 0.5;
    b["x"] = 1;
    return true;
  }));
  auto bad = run_check("alpha", "y == 2", Json{{"a", 2}}, [](Json& m, Json&) {
    m["y"] = 3;
    return false;
  });
  bad.counterexample = "ce/alpha.json";
  rep.add(bad);
  auto j = rep.to_json();
  EXPECT_EQ(j["checks"][0]["name"], "alpha");
  EXPECT_EQ(j["checks"][1]["name"], "zeta");
  EXPECT_EQ(j["checks"][0]["counterexample"], "ce/alpha.json");
  EXPECT_FALSE(j["checks"][1].contains("counterexample"));
  EXPECT_EQ(j["summary"]["failed"], 1);
  EXPECT_FALSE(rep.all_passed());
  EXPECT_EQ(digest(Json{{"a", 1}}), digest(Json{{"a", 1}}));
  EXPECT_NE(digest(Json{{"a", 1}}), digest(Json{{"a", 2}}));
  EXPECT_EQ(digest(Json{{"a", 1}}).size(), 16u);
}
