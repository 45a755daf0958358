#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "kinder/commands.hpp"

using json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(KINDER_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("kinder_cli_test_" + name);
}

}  // namespace

TEST_CASE("report envelope and arith legendre") {
  const Run r = cli("arith --op legendre --k 10 --p 2");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["schema"] == "kinder-report");
  CHECK(j["version"] == "1.0");
  CHECK(j.contains("config"));
  CHECK(j.contains("timing_ms"));
  CHECK(j["results"]["valuation"] == 8);
}

TEST_CASE("exhaustive span through the CLI") {
  const Run r = cli("--mode exhaustive generic --kind span --n 2 --s 3 --q 2");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["results"]["frequency"].get<double>() == doctest::Approx(0.65625));
  CHECK(j["results"]["paper_bound"].get<double>() == doctest::Approx(0.625));
}

TEST_CASE("--params JSON is merged") {
  const Run r = cli(R"(--params '{"op":"mu","n":360}' arith)");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["results"]["mu"] == 3);
}

TEST_CASE("exit codes") {
  CHECK(cli("arith --op nope").code == kinder::kExitInvalid);
  CHECK(cli("generic --kind span --n 2 --s 3 --q 2").code == kinder::kExitInvalid);  // no seed
  CHECK(cli("--seed 1 generic --kind span --n 2 --s 3 --q 6").code == kinder::kExitInvalid);
  CHECK(cli("--mode exhaustive generic --kind span --n 4 --s 8 --q 5").code == kinder::kExitCap);
  CHECK(cli("--cap-iso 4 nursery-census --family matrix --a 1 --c 1 --q 2 --l 1 --relaxed").code ==
        kinder::kExitCap);
  CHECK(cli("no-such-command").code == kinder::kExitInvalid);
}

TEST_CASE("suzuki certificate round trip through files") {
  const auto path = temp_file("cert.json");
  const Run s = cli("--seed 3 suzuki-search --e 2 --cert " + path.string());
  REQUIRE(s.code == 0);
  const Run v = cli("suzuki-verify --cert " + path.string());
  CHECK(v.code == 0);
  CHECK(json::parse(v.out)["results"]["valid"] == true);

  json cert;
  {
    std::ifstream in(path);
    cert = json::parse(in);
  }
  cert["S"][0] = std::string(cert["S"][0].get<std::string>().size(), '0');
  const auto bad = temp_file("bad.json");
  {
    std::ofstream out(bad);
    out << cert.dump();
  }
  const Run f = cli("suzuki-verify --cert " + bad.string());
  CHECK(f.code == kinder::kExitFailed);
  CHECK(json::parse(f.out)["results"]["valid"] == false);

  {
    std::ofstream out(bad);
    out << "{not json";
  }
  CHECK(cli("suzuki-verify --cert " + bad.string()).code == kinder::kExitInvalid);
  std::filesystem::remove(path);
  std::filesystem::remove(bad);
}

TEST_CASE("--out writes the report") {
  const auto path = temp_file("out.json");
  REQUIRE(cli("--out " + path.string() + " arith --op factor --n 360").code == 0);
  std::ifstream in(path);
  const json j = json::parse(in);
  CHECK(j["schema"] == "kinder-report");
  std::filesystem::remove(path);
}
