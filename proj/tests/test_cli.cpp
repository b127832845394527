#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// needs vendor/ on the include path for the JSON checks
#include <json.hpp>

#ifndef EWENS_CLI_PATH
#error "EWENS_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string cmd = env_prefix + std::string(EWENS_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    result.out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("dist command") {
  SECTION("csv output matches the worked example") {
    const auto r = run_cli("dist --n 3 --theta 1/1 --format csv");
    CHECK(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "x,pmf,cdf,log_pmf,pmf_exact");
    std::getline(lines, line);
    CHECK(line.rfind("1,0.33333333333333", 0) == 0);
    CHECK(line.find(",1/3") != std::string::npos);
    std::getline(lines, line);
    CHECK(line.rfind("2,0.5,", 0) == 0);
    CHECK(line.find(",1/2") != std::string::npos);
    std::getline(lines, line);
    CHECK(line.rfind("3,0.16666666666666", 0) == 0);
    CHECK(line.find(",1/6") != std::string::npos);
  }
  SECTION("single point at n=1") {
    const auto r = run_cli("dist --n 1 --theta 2 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("1,1,1,") != std::string::npos);
  }
  SECTION("json output carries the envelope") {
    const auto r = run_cli("--reproducible dist --n 4 --theta 2/1");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["command"] == "dist");
    CHECK(doc["artifact_version"].is_string());
    CHECK(doc["params_echo"]["theta"] == "2/1");
    CHECK(!doc.contains("timestamp"));
    REQUIRE(doc["results"]["pmf_exact"].is_array());
    CHECK(doc["results"]["pmf_exact"][3] == "2/15");
    CHECK(doc["results"]["pmf"][1].get<double>() == Catch::Approx(11.0 / 30).epsilon(1e-15));
  }
  SECTION("usage errors exit 2") {
    CHECK(run_cli("dist --n 0 --theta 1").exit_code == 2);
    CHECK(run_cli("dist --theta 1").exit_code == 2);
    CHECK(run_cli("dist --n 3 --theta -1").exit_code == 2);
    CHECK(run_cli("dist --n 3 --theta 1 --format xml").exit_code == 2);
  }
}

TEST_CASE("bounds command") {
  SECTION("default constants and soundness fields") {
    const auto r = run_cli("--reproducible bounds --n 4096 --theta 64");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["results"]["C"].get<double>() == 0.5591);
    CHECK(doc["results"]["D"].get<double>() == 1.0);
    REQUIRE(doc["results"]["upper"].is_number());
    REQUIRE(doc["results"]["kolmo_x"]["distance"].is_number());
    CHECK(doc["results"]["kolmo_x"]["distance"].get<double>() <=
          doc["results"]["upper"].get<double>());
  }
  SECTION("condition violations surface as nulls with reasons, exit 0") {
    const auto r = run_cli("--reproducible bounds --n 2 --theta 1");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["results"]["upper"].is_null());
    CHECK(doc["results"]["gamma1"].is_null());
    CHECK(doc["results"]["upper_reason"].is_string());
    CHECK(doc["results"]["gamma2"].is_number());
  }
  SECTION("bad flags exit 2") {
    CHECK(run_cli("bounds --n 100 --theta 1 --D 0").exit_code == 2);
    CHECK(run_cli("bounds --n 100 --theta 1 --D -2").exit_code == 2);
  }
}

TEST_CASE("cstar command") {
  SECTION("default run prints the root and residual") {
    const auto r = run_cli("cstar");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("cstar 2.1625815871") != std::string::npos);
    std::istringstream lines(r.out);
    std::string root_line, residual_line;
    std::getline(lines, root_line);
    std::getline(lines, residual_line);
    CHECK(residual_line.rfind("residual ", 0) == 0);
    const double residual = std::abs(std::stod(residual_line.substr(9)));
    CHECK(residual <= 1e-12);
  }
  SECTION("tolerance below the floor exits 2") {
    CHECK(run_cli("cstar --tolerance 1e-20").exit_code == 2);
  }
}

TEST_CASE("sweep command") {
  const std::string out_path = std::string(EWENS_CLI_PATH) + ".sweep.csv";
  SECTION("writes the pinned schema") {
    const auto r = run_cli("sweep --coupling power --a 1 --p 0.5 --n-list 16,32,64 --out " +
                           out_path);
    REQUIRE(r.exit_code == 0);
    const std::string csv = read_file(out_path);
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "n,theta,kolmo_x,kolmo_y,kolmo_z,upper,lower_i,lower_ii,rate_normalizer,scaled_error,"
          "log_n,log_scaled_error,status");
    std::string row;
    int rows = 0;
    while (std::getline(lines, row)) {
      if (!row.empty()) ++rows;
    }
    CHECK(rows == 3);
    CHECK(csv.find("\"ok\"") != std::string::npos);
    std::remove(out_path.c_str());
  }
  SECTION("deterministic output") {
    const std::string args = "sweep --coupling ratio --c 1 --n-list 16,64 --out ";
    REQUIRE(run_cli(args + out_path).exit_code == 0);
    const std::string first = read_file(out_path);
    REQUIRE(run_cli(args + out_path).exit_code == 0);
    CHECK(first == read_file(out_path));
    std::remove(out_path.c_str());
  }
  SECTION("jobs flag leaves results unchanged") {
    const auto a = run_cli("sweep --coupling fixed --theta0 2 --n-list 16,32 --jobs 1");
    const auto b = run_cli("sweep --coupling fixed --theta0 2 --n-list 16,32 --jobs 4");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    // env variable is the --jobs default
    const auto c = run_cli("sweep --coupling fixed --theta0 2 --n-list 16,32",
                           "EWENS_BERRY_JOBS=3 ");
    CHECK(c.exit_code == 0);
    CHECK(c.out == a.out);
  }
  SECTION("coupling violating the regime is a domain error, exit 3") {
    CHECK(run_cli("sweep --coupling power --a 1 --p 2.5 --n-list 16").exit_code == 3);
  }
  SECTION("empty grid exits 2") {
    CHECK(run_cli("sweep --coupling power --n-list ,").exit_code == 2);
  }
  SECTION("malformed grid entry exits 2") {
    CHECK(run_cli("sweep --coupling power --n-list 16,abc").exit_code == 2);
  }
  SECTION("unknown coupling exits 2") {
    CHECK(run_cli("sweep --coupling quadratic --n-list 16").exit_code == 2);
  }
}

TEST_CASE("config file presets with flag override") {
  const std::string cfg_path = std::string(EWENS_CLI_PATH) + ".test.cfg";
  {
    std::ofstream cfg(cfg_path);
    cfg << "[bounds]\nD=2.5\n";
  }
  const auto defaults = run_cli("--reproducible --config " + cfg_path + " bounds --n 64 --theta 4");
  REQUIRE(defaults.exit_code == 0);
  CHECK(nlohmann::json::parse(defaults.out)["results"]["D"].get<double>() == 2.5);

  const auto overridden =
      run_cli("--reproducible --config " + cfg_path + " bounds --n 64 --theta 4 --D 7.5");
  REQUIRE(overridden.exit_code == 0);
  CHECK(nlohmann::json::parse(overridden.out)["results"]["D"].get<double>() == 7.5);
  std::remove(cfg_path.c_str());
}

TEST_CASE("reproducible flag controls the timestamp") {
  const auto with_ts = run_cli("dist --n 2 --theta 1");
  REQUIRE(with_ts.exit_code == 0);
  CHECK(nlohmann::json::parse(with_ts.out).contains("timestamp"));
  const auto a = run_cli("--reproducible dist --n 2 --theta 1");
  const auto b = run_cli("--reproducible dist --n 2 --theta 1");
  CHECK(a.out == b.out);
  CHECK(!nlohmann::json::parse(a.out).contains("timestamp"));
}
