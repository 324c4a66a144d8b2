#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "normgeo/json.hpp"
#include "normgeo/oracle.hpp"

using json = normgeo::jsonio::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd =
      std::string(NORMGEO_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, std::move(out)};
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  REQUIRE(!j.is_discarded());
  return j;
}

const char* kRankOne =
    R"({"X":"lp:2:2","Y":"lp:2:2","Z":"lp:2:2","c":[[[1,0],[0,0]],[[0,0],[0,0]]]})";

}  // namespace

TEST_CASE("derive matches the l1 closed form and round-trips") {
  auto r = run("derive --space '{\"kind\":\"lp\",\"p\":1,\"n\":3}' "
               "--x '[1,-2,0]' --y '[1,1,-3]'");
  CHECK(r.code == 0);
  json j = parse(r.out);
  CHECK(j["rho_plus"].get<double>() == doctest::Approx(3.0));
  CHECK(j["rho_minus"].get<double>() == doctest::Approx(-3.0));
  CHECK(j["method"] == "closed");
  // the emitted space re-parses into the same space
  const auto s = normgeo::jsonio::space_from_json(j["space"]);
  CHECK(s.dim() == 3);
  CHECK(s.p().is_one());

  auto numeric = run("derive --space lp:1:3 --x '[1,-2,0]' --y '[1,1,-3]' "
                     "--method numeric");
  CHECK(numeric.code == 0);
  json jn = parse(numeric.out);
  CHECK(std::abs(jn["rho_plus"].get<double>() - 3.0) <= 1e-9);
  CHECK(jn.contains("step_trace"));
  CHECK(jn["step_trace"].is_array());
}

TEST_CASE("ortho relations and the exit-code contract") {
  auto holds = run("ortho --relation birkhoff --space lp:2:2 "
                   "--x '[1,0]' --y '[0,1]'");
  CHECK(holds.code == 0);
  json j = parse(holds.out);
  CHECK(j["holds"] == true);
  CHECK(j["relation"] == "birkhoff");
  CHECK(j["witness"].contains("lambda_star"));

  auto fails = run("ortho --relation birkhoff --space lp:2:2 "
                   "--x '[1,0]' --y '[1,0]'");
  CHECK(fails.code == 1);  // output still written
  CHECK(parse(fails.out)["holds"] == false);

  auto approx = run("ortho --relation approx --space lp:2:2 "
                    "--x '[1,0]' --y '[0.3,0.9539392014169456]' --eps 0.3");
  CHECK(approx.code == 0);
  CHECK(parse(approx.out)["eps"].get<double>() == doctest::Approx(0.3));

  // approx without --eps is an input error
  CHECK(run("ortho --relation approx --space lp:2:2 --x '[1,0]' --y '[0,1]'")
            .code == 2);
  CHECK(run("ortho --relation nope --space lp:2:2 --x '[1,0]' --y '[0,1]'")
            .code == 2);

  auto james = run("ortho --relation james --space lp:inf:2 "
                   "--x '[1,1]' --y '[1,-1]'");
  CHECK(james.code == 0);
  json jj = parse(james.out);
  CHECK(jj["witness"]["rho_minus"].get<double>() <= 0.0);
  CHECK(jj["witness"]["rho_plus"].get<double>() >= 0.0);
}

TEST_CASE("malformed input always lands on exit 2") {
  CHECK(run("derive --space lp:0.5:3 --x '[1,0,0]' --y '[0,1,0]'").code == 2);
  CHECK(run("derive --space lp:2:2 --x '[1,0,0]' --y '[0,1]'").code == 2);
  CHECK(run("derive --space lp:2:2 --x 'not json' --y '[0,1]'").code == 2);
  CHECK(run("verify --theorem NOPE").code == 2);
  CHECK(run("bilinear-norm --input /nonexistent/file.json").code == 2);
  CHECK(run("bogus-subcommand").code == 2);
  CHECK(run("").code == 2);  // a subcommand is required
}

TEST_CASE("cone reports memberships and the component boundary") {
  auto r = run("cone --space lp:inf:2 --x '[1,1]' --y '[1,-1]'");
  CHECK(r.code == 0);
  json j = parse(r.out);
  CHECK(j["orthogonal"] == true);
  CHECK(j["positive_part"] == true);
  CHECK(j["negative_part"] == true);
  REQUIRE(!j["cone"].is_null());
  // boundary directions hit the axes of the sup-norm square, up to sign
  const double v10 = std::abs(j["cone"]["v1"][0].get<double>());
  const double v11 = std::abs(j["cone"]["v1"][1].get<double>());
  CHECK(std::max(v10, v11) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::min(v10, v11) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(j["cone"]["degenerate"] == false);

  auto off = run("cone --space lp:2:2 --x '[1,0]' --y '[1,1]'");
  CHECK(off.code == 0);
  CHECK(parse(off.out)["cone"].is_null());
}

TEST_CASE("support emits the extreme functionals") {
  auto r = run("support --space lp:inf:2 --x '[1,1]'");
  CHECK(r.code == 0);
  json j = parse(r.out);
  CHECK(j["extreme"].size() == 2);
  CHECK(j["singleton"] == false);
  CHECK(j["smooth_point"] == false);

  auto smooth = run("support --space lp:2:2 --x '[3,4]'");
  json js = parse(smooth.out);
  CHECK(js["singleton"] == true);
  CHECK(js["smooth_point"] == true);
  CHECK(js["norm"].get<double>() == doctest::Approx(5.0));
}

TEST_CASE("bilinear subcommands accept inline payloads and files") {
  auto nrm = run(std::string("bilinear-norm --input '") + kRankOne +
                 "' --seed 3");
  CHECK(nrm.code == 0);
  json j = parse(nrm.out);
  CHECK(j["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j["converged"] == true);

  auto grid = run(std::string("bilinear-norm --input '") + kRankOne +
                  "' --method grid --resolution 241");
  CHECK(grid.code == 0);
  CHECK(parse(grid.out)["value"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-3));

  auto smooth = run(std::string("bilinear-smooth --input '") + kRankOne + "'");
  CHECK(smooth.code == 0);
  CHECK(parse(smooth.out)["smooth"] == true);

  // diagonal map attains its norm on two orbits: not smooth, exit 1
  const char* diag =
      R"({"X":"lp:2:2","Y":"lp:2:2","Z":"lp:2:2","c":[[[1,0],[0,0]],[[0,0],[0,1]]]})";
  auto rough = run(std::string("bilinear-smooth --input '") + diag + "'");
  CHECK(rough.code == 1);
  json jr = parse(rough.out);
  CHECK(jr["smooth"] == false);
  CHECK(jr["representative_count"] == 2);

  auto ortho = run(std::string("bilinear-ortho --input '{\"T\":") + kRankOne +
                   ",\"A\":" + kRankOne + "}'");
  CHECK(ortho.code == 1);  // T is never orthogonal to itself
  json jo = parse(ortho.out);
  CHECK(jo["holds"] == false);
  CHECK(jo["dip"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));

  auto approx = run(std::string("bilinear-ortho --input '{\"T\":") + kRankOne +
                    ",\"A\":" + kRankOne + "}' --eps 0.7");
  CHECK(parse(approx.out)["mode"] == "approx");
}

TEST_CASE("verify runs one suite or aggregates all of them") {
  auto one = run("verify --theorem TLINF --trials 300 --seed 7");
  CHECK(one.code == 0);
  json j = parse(one.out);
  CHECK(j["theorem_id"] == "TLINF");
  CHECK(j["trials"] == 300);
  CHECK(j["counterexample_count"] == 0);
  CHECK(j["passed"] == true);
  CHECK(!j.contains("wall_time"));

  auto table = run("verify --theorem TLINF --trials 300 --seed 7 "
                   "--format table");
  CHECK(table.code == 0);
  CHECK(table.out.find("TLINF") != std::string::npos);
  CHECK(table.out.find("PASS") != std::string::npos);

  auto all = run("verify --trials 16 --seed 11");
  CHECK(all.code == 0);
  json ja = parse(all.out);
  REQUIRE(ja["reports"].is_array());
  CHECK(ja["reports"].size() == normgeo::theorem_ids().size());
  long trials = 0;
  for (const auto& rep : ja["reports"]) trials += rep["trials"].get<long>();
  CHECK(ja["total_trials"].get<long>() == trials);
  CHECK(ja["all_passed"] == true);
  CHECK(ja["total_counterexamples"] == 0);
}

TEST_CASE("output is deterministic for a fixed argv") {
  const std::string cmd = "verify --theorem T2.1 --trials 200 --seed 5";
  auto a = run(cmd), b = run(cmd);
  CHECK(a.code == b.code);
  CHECK(a.out == b.out);

  auto n1 = run(std::string("bilinear-norm --input '") + kRankOne +
                "' --seed 9");
  auto n2 = run(std::string("bilinear-norm --input '") + kRankOne +
                "' --seed 9");
  CHECK(n1.out == n2.out);
}

TEST_CASE("list-theorems enumerates the registry") {
  auto r = run("list-theorems");
  CHECK(r.code == 0);
  json j = parse(r.out);
  REQUIRE(j["theorems"].is_array());
  CHECK(j["theorems"].size() == normgeo::theorem_ids().size());
  CHECK(j["theorems"][0]["id"] == "T2.1");
  for (const auto& t : j["theorems"]) {
    CHECK(!t["description"].get<std::string>().empty());
    CHECK(t["default_trials"].get<long>() > 0);
  }

  auto help = run("--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("lp:<p>:<n>") != std::string::npos);
  CHECK(help.out.find("NORMGEO_THREADS") != std::string::npos);
}
