#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "ecd/channel.hpp"
#include "ecd/serialize.hpp"

// Integration tests driving the installed binary.

namespace {

const std::string kCli = ECD_CLI_PATH;
const std::string kRecipes = ECD_RECIPE_DIR;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// drop the leading '#' timestamp line
std::string without_header(const std::string& text) {
  const auto pos = text.find('\n');
  if (pos == std::string::npos) return text;
  return text[0] == '#' ? text.substr(pos + 1) : text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

}  // namespace

TEST_CASE("validate accepts a well-formed channel spec") {
  auto c = ecd::Channel::attenuator(0.8, 6);
  c.set_energy_limit({0.64, 0.0});
  ecd::save_channel(c, "/tmp/ecd_cli_att.json");
  CHECK(run("validate /tmp/ecd_cli_att.json") == 0);
}

TEST_CASE("validate rejects incomplete Kraus families and bad energy claims") {
  // half of the identity is not trace preserving, but passes the
  // non-increasing check; break it by exceeding the identity instead
  write_file("/tmp/ecd_cli_bad.json",
             R"({"dim_in":2,"dim_out":2,"kraus":[[[[2.0,0],[0,0]],[[0,0],[2.0,0]]]]})");
  CHECK(run("validate /tmp/ecd_cli_bad.json") == 2);

  // claimed energy limit that fails the operator inequality
  auto c = ecd::Channel::attenuator(0.9, 5);
  c.set_energy_limit({0.1, 0.0});  // far below the true gain 0.81
  ecd::save_channel(c, "/tmp/ecd_cli_claim.json");
  CHECK(run("validate /tmp/ecd_cli_claim.json") == 2);
}

TEST_CASE("norm on identical channels reports zero and exits cleanly") {
  auto c = ecd::Channel::attenuator(0.7, 4);
  ecd::save_channel(c, "/tmp/ecd_cli_same.json");
  write_file("/tmp/ecd_cli_norm0.json",
             R"({"channels":["/tmp/ecd_cli_same.json","/tmp/ecd_cli_same.json"],
                 "hamiltonian":{"type":"number"},"energy":1.0})");
  CHECK(run("norm --config /tmp/ecd_cli_norm0.json --out /tmp/ecd_cli_cert0.json") == 0);
  const std::string cert = slurp("/tmp/ecd_cli_cert0.json");
  CHECK(cert.find("\"norm_upper\": 0.0") != std::string::npos);
  CHECK(cert.find("\"status\": \"optimal\"") != std::string::npos);
}

TEST_CASE("norm on the bundled attenuator recipe stays inside the certified window") {
  const int rc =
      run("norm --config " + kRecipes + "/attenuator_norm.json --out /tmp/ecd_cli_cert1.json");
  CHECK(rc == 0);
  const std::string cert = slurp("/tmp/ecd_cli_cert1.json");
  // both certified values present
  CHECK(cert.find("norm_lower") != std::string::npos);
  CHECK(cert.find("norm_upper") != std::string::npos);
  // coherent-probe lower bound at |alpha|^2 = E = 3: 2 sqrt(1 - exp(-0.27))
  const double lower_formula = 2.0 * std::sqrt(1.0 - std::exp(-0.09 * 3.0));
  const std::string needle = "\"norm_lower\": ";
  const auto pos = cert.find(needle);
  REQUIRE(pos != std::string::npos);
  const double lower = std::strtod(cert.c_str() + pos + needle.size(), nullptr);
  CHECK(lower >= lower_formula - 1e-3);
  CHECK(lower <= 2.0);
}

TEST_CASE("malformed configs exit with the config error code") {
  write_file("/tmp/ecd_cli_broken.json", "{ not json");
  CHECK(run("norm --config /tmp/ecd_cli_broken.json") == 2);
  write_file("/tmp/ecd_cli_nochan.json", R"({"energy": 1.0})");
  CHECK(run("norm --config /tmp/ecd_cli_nochan.json") == 2);
  write_file("/tmp/ecd_cli_badexp.json", R"({"experiment":"unknown-id"})");
  CHECK(run("experiment --config /tmp/ecd_cli_badexp.json") == 2);
}

TEST_CASE("witness scan finds orthogonality times on the bundled spectrum") {
  const std::string cfg = kRecipes + "/witness_scan.json";
  REQUIRE(run("experiment --config " + cfg + " --out /tmp/ecd_cli_wh.csv") == 0);
  const std::string body = slurp("/tmp/ecd_cli_wh.csv");
  CHECK(body.find(",true,") != std::string::npos);  // in-hull fraction > 0
}

TEST_CASE("experiment reruns are byte identical modulo the timestamp") {
  const std::string cfg = kRecipes + "/witness_scan.json";
  REQUIRE(run("experiment --config " + cfg + " --out /tmp/ecd_cli_w1.csv") == 0);
  REQUIRE(run("experiment --config " + cfg + " --out /tmp/ecd_cli_w2.csv") == 0);
  CHECK(without_header(slurp("/tmp/ecd_cli_w1.csv")) ==
        without_header(slurp("/tmp/ecd_cli_w2.csv")));
  CHECK(slurp("/tmp/ecd_cli_w1.csv").substr(0, 1) == "#");
}

TEST_CASE("norm-properties experiment reruns deterministically with a seed") {
  const std::string cfg = kRecipes + "/norm_properties.json";
  REQUIRE(run("experiment --config " + cfg + " --seed 99 --out /tmp/ecd_cli_p1.csv") == 0);
  REQUIRE(run("experiment --config " + cfg + " --seed 99 --out /tmp/ecd_cli_p2.csv") == 0);
  CHECK(without_header(slurp("/tmp/ecd_cli_p1.csv")) ==
        without_header(slurp("/tmp/ecd_cli_p2.csv")));
}

TEST_CASE("speed-limit experiment emits certified pairs in every row") {
  const std::string cfg = kRecipes + "/speed_limit_qubit.json";
  REQUIRE(run("experiment --config " + cfg + " --out /tmp/ecd_cli_sl.csv") == 0);
  std::ifstream f("/tmp/ecd_cli_sl.csv");
  std::string line;
  std::getline(f, line);  // timestamp
  std::getline(f, line);  // header
  CHECK(line.find("measured_lower") != std::string::npos);
  CHECK(line.find("measured_upper") != std::string::npos);
  std::size_t rows = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    ++rows;
    CHECK(line.find("true") != std::string::npos);
  }
  CHECK(rows == 12);
  // JSON-lines twin exists
  CHECK(!slurp("/tmp/ecd_cli_sl.csv.jsonl").empty());
}
