#include <doctest.h>

#include "compfkg/commands.hpp"
#include "compfkg/inequalities.hpp"

using namespace compfkg;

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ull);
  CHECK(hex64(0xaf63dc4c8601ec8cull) == "af63dc4c8601ec8c");
  CHECK(hex64(1) == "0000000000000001");
}

TEST_CASE("rationals and composition keys") {
  CHECK(rational_json(Rational(3)) == "3/1");
  CHECK(rational_from_json(Json("6/4")) == Rational(3, 2));
  CHECK(rational_from_json(Json(-7)) == Rational(-7));
  CHECK_THROWS_AS(rational_from_json(Json("1/0")), SchemaError);
  CHECK_THROWS_AS(rational_from_json(Json(0.5)), SchemaError);
  CHECK(composition_key(Composition{2, 0, 1}) == "2,0,1");
  CHECK(composition_from_key("2,0,1") == Composition{2, 0, 1});
  CHECK_THROWS_AS(composition_from_key("2,x"), SchemaError);
  CHECK_THROWS_AS(composition_from_key("2,-1"), SchemaError);
}

TEST_CASE("lattice JSON") {
  auto j = lattice_json(enumerate_lattice(2, 2));
  CHECK(j.dump() == R"({"n":2,"r":2,"elements":[[2,0],[1,1],[0,2]],"covers":[[0,1],[2,1]]})");
  auto k = lattice_json(enumerate_lattice(6, 3));
  CHECK(k["elements"].size() == 28);
  // Every cover is a single elementary move: distance 2 in l1.
  for (const auto& c : k["covers"]) {
    auto a = k["elements"][c[0].get<std::size_t>()].get<std::vector<int>>();
    auto b = k["elements"][c[1].get<std::size_t>()].get<std::vector<int>>();
    int l1 = 0;
    for (std::size_t i = 0; i < a.size(); ++i) l1 += std::abs(a[i] - b[i]);
    CHECK(l1 == 2);
  }
}

TEST_CASE("polytope and Newton round trips") {
  auto p = polytope_from_json(Json::parse(R"({"dim":2,"vertices":[["0","0"],["1/2","0"],["0","1/2"],["1/4","1/8"]]})"));
  CHECK(p.vertex_count() == 3);
  auto back = polytope_from_json(polytope_json(p));
  CHECK(back == p);
  CHECK(volume(back) == Rational(1, 8));
  CHECK_THROWS_AS(polytope_from_json(Json::parse(R"({"dim":2,"vertices":[["0","0","0"]]})")), SchemaError);
  CHECK_THROWS_AS(polytope_from_json(Json::parse(R"({"vertices":[]})")), SchemaError);

  auto g = newton_from_json(Json::parse(R"({"dim":2,"generators":[[2,0],[1,1],[0,2]]})"));
  CHECK(newton_from_json(newton_json(g)).generators() == g.generators());
  CHECK_THROWS_AS(newton_from_json(Json::parse(R"({"dim":2,"generators":[[2,0.5]]})")), SchemaError);
  CHECK_THROWS_AS(newton_from_json(Json::parse(R"({"dim":2,"generators":[[2,1],[1,1]]})")), DomainError);

  auto list = bodies_from_json(Json::parse(R"([{"dim":1,"vertices":[["0"],["3"]]}])"));
  CHECK(list.size() == 1);
  auto polys = polyhedra_from_json(Json::parse(R"({"polyhedra":[{"dim":1,"generators":[[4]]}]})"));
  CHECK(covolume(polys[0]) == 4);
}

TEST_CASE("abstract tables") {
  auto t = table_from_json(Json::parse(R"({"n":2,"r":2,"covol":{"2,0":"1","1,1":"3/2","0,2":"2"}})"));
  CHECK(t.at(Composition{1, 1}) == Rational(3, 2));
  CHECK(table_from_json(table_json(t)).values() == t.values());
  CHECK_THROWS_AS(table_from_json(Json::parse(R"({"n":2,"r":2,"covol":{"2,0":"1","1,1":"1"}})")), SchemaError);
  CHECK_THROWS_AS(table_from_json(Json::parse(R"({"n":2,"r":2,"covol":{"2,0":"1","1,1":"1","0,2":"-1"}})")), SchemaError);
  CHECK_THROWS_AS(table_from_json(Json::parse(R"({"n":2,"r":2,"covol":{"2,0":"1","1,1":"1","0,2":"1","3,0":"1"}})")), SchemaError);
}

TEST_CASE("weight functions by class") {
  auto lat = make_lattice(3, 3);
  auto f = function_from_json(Json::parse(R"({"values":{"3,0,0":"5","2,1,0":"2","1,1,1":"1"}})"), lat);
  CHECK(f(Composition{0, 1, 2}) == 2);
  CHECK(f(Composition{0, 0, 3}) == 5);
  CHECK(f.is_invariant());
  CHECK_THROWS_AS(function_from_json(Json::parse(R"({"values":{"3,0,0":"5"}})"), lat), SchemaError);
}

TEST_CASE("enumerate command") {
  RunConfig cfg;
  cfg.command = "enumerate";
  cfg.n = 6;
  cfg.r = 3;
  auto res = run_enumerate(cfg);
  CHECK(res.report["schema"] == kReportSchema);
  CHECK(res.report["results"]["size"] == 28);
  CHECK(res.report["results"]["strata"] == Json::parse("[10,15,3]"));
  CHECK(res.report["results"]["quotient_size"] == 7);
  cfg.enumeration_cap = 10;
  CHECK_THROWS_AS(run_enumerate(cfg), CapExceeded);
}

TEST_CASE("verify-fkg and verify-geometry reports are reproducible") {
  RunConfig cfg;
  cfg.command = "verify-fkg";
  cfg.n = 4;
  cfg.r = 2;
  cfg.mode = "random";
  cfg.seed = 7;
  cfg.budget = 200;
  cfg.threads = 3;
  auto a = run_verify_fkg(cfg);
  cfg.threads = 1;
  auto b = run_verify_fkg(cfg);
  CHECK(dump(a.report) == dump(b.report));
  CHECK(a.exit_code == 0);
  CHECK(a.report["config"]["seed"] == 7);
  CHECK(a.report["config"]["caps"]["filters"] == kDefaultFilterCap);

  RunConfig g;
  g.command = "verify-geometry";
  g.check = "teissier";
  g.seed = 11;
  g.budget = 12;
  g.threads = 4;
  auto x = run_verify_geometry(g);
  g.threads = 1;
  auto y = run_verify_geometry(g);
  CHECK(dump(x.report) == dump(y.report));
  CHECK(x.report["summary"]["violation"] == 0);
  g.seed = 12;
  CHECK(dump(run_verify_geometry(g).report) != dump(x.report));
}

TEST_CASE("homogeneous mode checks the number of weights") {
  RunConfig cfg;
  cfg.command = "verify-fkg";
  cfg.n = 5;
  cfg.r = 3;
  cfg.mode = "homogeneous";
  cfg.d = {1, 2};
  CHECK_THROWS_AS(run_verify_fkg(cfg), DomainError);
  cfg.d = {1, 2, 3};
  auto res = run_verify_fkg(cfg);
  CHECK(res.report["results"]["strict"] == true);
  CHECK(res.exit_code == 0);
}
