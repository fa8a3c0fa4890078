#include <doctest.h>

#include <json.hpp>
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#ifndef GEOWEB_CLI_PATH
#error "GEOWEB_CLI_PATH must point at the geoweb binary"
#endif

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(GEOWEB_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), p)) r.out += buf.data();
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit 2") {
    CHECK(run("--no-such-flag").code == 2);
    CHECK(run("check --bogus").code == 2);
    CHECK(run("wp --z abc --g2 0 --g3 0").code == 2);
    CHECK(run("invariants --f 'x+' --a 0.5 --at 1,1").code == 2);
  }

  TEST_CASE("wp") {
    const Run r = run("wp --z 0.5 --g2 0 --g3 0");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["wp"].get<double>() == doctest::Approx(4.0));
    CHECK(j["dwp"].get<double>() == doctest::Approx(-16.0));
    CHECK(run("wp --z 1e-9 --g2 1 --g3 1").code == 3);
  }

  TEST_CASE("family eval") {
    const Run r = run("family eval --type t4 --params C=1 --at 1,0");
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["alpha"].get<double>() == doctest::Approx(1.0));
  }

  TEST_CASE("family verify") {
    const Run r = run("family verify --type t2 --params k=1.5,C=0.2 --domain -1:1,-1:1 --grid 16");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["pass"].get<bool>());
    CHECK(j["max_scaled_3L"].get<double>() < 1e-8);
  }

  TEST_CASE("check reports") {
    const std::string path = "cli_check_exp.json";
    const Run r = run("check --f 'exp(x*y)' --a 0.5 --domain 0.5:1.5,0.5:1.5 --grid 16 --out " + path);
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(path));
    CHECK(j["gauge_applied"].get<bool>());
    CHECK(j["verdict"] == "linearizable_conditions_met");

    const auto k = nlohmann::json::parse(run("check --f 'x + y^2/x' --a 0.5 --domain 0.5:1.5,0.5:1.5 --grid 16").out);
    CHECK(k["verdict"] == "curvature_nonzero");
  }
}
