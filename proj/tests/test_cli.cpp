#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

struct Run {
  int rc = -1;
  std::string out;
  std::vector<json> lines() const {
    std::vector<json> v;
    std::istringstream in(out);
    for (std::string l; std::getline(in, l);)
      if (!l.empty()) v.push_back(json::parse(l));
    return v;
  }
  json one() const {
    auto v = lines();
    REQUIRE(v.size() == 1);
    return v[0];
  }
};

Run cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" CBSETS_CLI_PATH "\" " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int st = pclose(p);
  r.rc = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

json strip_timing(json j) {
  j.erase("timing_ms");
  return j;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("member") {
  auto r = cli("member --f id --beta w --set 2,3");
  CHECK(r.rc == 0);
  json j = r.one();
  CHECK(j["op"] == "member");
  CHECK(j["result"]["member"] == true);
  CHECK(j["result"]["certificate_verified"] == true);
  CHECK(j["result"]["certificate"]["kind"] == "limit");
  CHECK(j["result"]["certificate"]["resolved"] == "3");
  CHECK(j.contains("timing_ms"));

  j = cli("member --f id --beta 1 --set 2,4,6,8").one();
  CHECK(j["result"]["member"] == false);
  CHECK_FALSE(j["result"].contains("certificate"));

  j = cli("member --f id --beta 0 --set 1,5,7 --bound 1").one();
  CHECK(j["result"]["member"] == true);
}

TEST_CASE("rank, norm, deltas") {
  CHECK(cli("rank --family schreier --set 3").one()["result"]["rank"] == 2);
  CHECK(cli("rank --family schreier --set \"\" --cap 8").one()["result"]["at_least_cap"] == true);
  CHECK(cli("norm --space lp:2 --vec 3@1,4@2").one()["result"].get<double>() == doctest::Approx(5));
  CHECK(cli("norm --space weak:2 --vec 1,1,1,1").one()["result"].get<double>() == doctest::Approx(2));
  CHECK(cli("norm --space orlicz:pow:2 --vec 1,1,1,1,1,1,1,1,1 --dual").one()["result"].get<double>() ==
        doctest::Approx(3).epsilon(1e-8));
  const json d = cli("deltas --space orlicz:pow:2 --xi 1 --eps 0.5").one()["result"];
  CHECK(d["k0"] == 5);
  CHECK(d["delta"].get<double>() == 0.05);
  const json l = cli("deltas --space orlicz:logsq --eta 0.5 --count 3").one();
  CHECK(l.dump().find("0.6065") != std::string::npos);  // e^{-1/2}
}

TEST_CASE("extract and blocks") {
  const json e = cli("extract --beta 1 --universe 30 --c even --family schreier").one();
  CHECK(e["result"]["verified"] == true);
  const json b = cli("blocks build --beta 1 --size 1 --start 2").one();
  CHECK(b["result"]["min_supp"] == 2);
  const auto w = cli("blocks witness --M pow:2 --eta 0.5 --samples 20");
  CHECK(w.rc == 0);
  CHECK(w.one()["result"]["j"] == 33);
}

TEST_CASE("exit codes") {
  CHECK(cli("member --set 3,2").rc == 2);
  CHECK(cli("member --beta w+ --set 1").rc == 2);
  CHECK(cli("bogus").rc == 2);
  CHECK(cli("check --suite nope").rc == 2);
  CHECK(cli("norm --space marc:2:foo --vec 1").rc == 2);
  CHECK(cli("--format xml norm --vec 1").rc == 2);
  CHECK(cli("deltas --space orlicz:pow:1 --xi 1 --eps 0.5").rc == 2);
  // p-iteration on w^(w^3) needs more than 10^4 steps.
  const auto r = cli("check --suite ordinal.p_iteration");
  CHECK(r.rc == 1);
  CHECK(r.one()["result"]["passed"] == false);
  CHECK(cli("check --suite ordinal.bachmann").rc == 0);
}

TEST_CASE("deterministic for a fixed seed") {
  const auto a = cli("--seed 5 check --suite family.greedy"), b = cli("--seed 5 check --suite family.greedy");
  REQUIRE(a.rc == 0);
  CHECK(strip_timing(a.one()) == strip_timing(b.one()));
  const auto w1 = cli("--seed 3 blocks witness --samples 15"), w2 = cli("--seed 3 blocks witness --samples 15");
  CHECK(strip_timing(w1.one()) == strip_timing(w2.one()));
}

TEST_CASE("config files") {
  const std::string cfg = temp_file("cbsets_test.conf", "# defaults\nf = id\nbeta=1\n");
  // {2,3,4} is not in A^id_1 but is in A^id_w.
  CHECK(cli("--config " + cfg + " member --set 2,3,4").one()["result"]["member"] == false);
  CHECK(cli("member --set 2,3,4", "CBSETS_CONFIG=" + cfg).one()["result"]["member"] == false);
  const json j = cli("member --beta w --set 2,3,4", "CBSETS_CONFIG=" + cfg).one();
  CHECK(j["inputs"]["beta"] == "w");
  CHECK(j["inputs"]["f"] == "id");
  CHECK(j["result"]["member"] == true);
  CHECK(cli("--config /nonexistent/cbsets.conf member --set 1").rc == 2);
}

TEST_CASE("tsv output") {
  const auto r = cli("--format tsv rank --family schreier --set 3");
  CHECK(r.rc == 0);
  CHECK(r.out.find("rank\t/rank\t2\n") != std::string::npos);
  CHECK(cli("--format tsv norm --vec 3,4").out == "norm\t/\t5.0\n");
}
