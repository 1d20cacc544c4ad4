#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "bgklab/io/commands.hpp"
#include "bgklab/io/run_config.hpp"

using namespace bgklab;
namespace fs = std::filesystem;

namespace {

io::RunConfig parse_args(std::vector<std::string> args) {
  CLI::App app{"test"};
  io::RunConfig cfg;
  io::attach_cli(app, cfg);
  std::reverse(args.begin(), args.end());  // CLI11 consumes back to front
  app.parse(args);
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& tag) {
  const fs::path d = fs::temp_directory_path() / ("bgklab_test_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("flag parsing and validation") {
  SECTION("basic invocation with derived parameters") {
    const io::RunConfig cfg =
        parse_args({"ness", "--alpha", "0.05", "--t1", "1", "--t2", "3"});
    REQUIRE(cfg.command == "ness");
    REQUIRE(cfg.alpha == 0.05);
    const ModelParams p(cfg.alpha, cfg.t1, cfg.t2);
    REQUIRE(p.t_inf() == 2.0);
  }
  SECTION("out-of-range values name the offending flag") {
    try {
      parse_args({"ness", "--alpha", "1.5"});
      FAIL("expected a parse error");
    } catch (const CLI::ParseError& e) {
      REQUIRE(std::string(e.what()).find("--alpha") != std::string::npos);
    }
  }
  SECTION("unknown keys are hard errors") {
    REQUIRE_THROWS_AS(parse_args({"ness", "--frobnicate", "1"}),
                      CLI::ParseError);
  }
  SECTION("config file values are overridden by flags") {
    const fs::path dir = temp_dir("cfg");
    const fs::path file = dir / "run.cfg";
    std::ofstream(file) << "alpha=0.3\nt1=1\nt2=3\n";
    const io::RunConfig from_file =
        parse_args({"ness", "--config", file.string()});
    REQUIRE(from_file.alpha == 0.3);
    const io::RunConfig overridden = parse_args(
        {"ness", "--config", file.string(), "--alpha", "0.1"});
    REQUIRE(overridden.alpha == 0.1);
  }
  SECTION("unknown config file keys are rejected") {
    const fs::path dir = temp_dir("cfg_bad");
    const fs::path file = dir / "run.cfg";
    std::ofstream(file) << "alpha=0.3\nfish=7\n";
    REQUIRE_THROWS_AS(parse_args({"ness", "--config", file.string()}),
                      CLI::ParseError);
  }
}

TEST_CASE("command execution and exit codes") {
  SECTION("rates emits the certificate values") {
    const fs::path dir = temp_dir("rates");
    io::RunConfig cfg;
    cfg.command = "rates";
    cfg.alpha = 0.0;
    cfg.t1 = cfg.t2 = 1.0;
    cfg.output_dir = dir.string();
    REQUIRE(io::run_command(cfg) == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "rates.json"));
    REQUIRE(j["prefactor"].get<double>() == 4.0);
    REQUIRE(j["lambda"].get<double>() == Catch::Approx(0.125));
    REQUIRE(j["anchor"] == "Theorem:expl");
  }
  SECTION("verify-bounds emits the moment lower bound 6/37") {
    const fs::path dir = temp_dir("vb");
    io::RunConfig cfg;
    cfg.command = "verify-bounds";
    cfg.alpha = 0.0;
    cfg.t1 = cfg.t2 = 1.0;
    cfg.r_exponent = 0.5;
    cfg.output_dir = dir.string();
    REQUIRE(io::run_command(cfg) == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "bounds.json"));
    REQUIRE(j["moment_lower_bound"]["value"].get<double>() ==
            Catch::Approx(6.0 / 37.0).epsilon(1e-12));
    REQUIRE(j["moment_lower_bound"]["anchor"] == "Eq:(ST3)");
  }
  SECTION("spectrum flags every mode as dominating the rate") {
    const fs::path dir = temp_dir("spec");
    io::RunConfig cfg;
    cfg.command = "spectrum";
    cfg.alpha = 0.3;
    cfg.t1 = 1.0;
    cfg.t2 = 3.0;
    cfg.kmax = 4;
    cfg.basis_order = 12;
    cfg.output_dir = dir.string();
    REQUIRE(io::run_command(cfg) == 0);
    std::ifstream csv(dir / "spectrum_gaps.csv");
    std::string line;
    std::getline(csv, line);  // header
    REQUIRE(line.find("anchor") != std::string::npos);
    int rows = 0;
    while (std::getline(csv, line)) {
      ++rows;
      // gap_ge_lambda column just before the anchor
      const auto tail = line.rfind(",Eq:(modno)");
      REQUIRE(tail != std::string::npos);
      REQUIRE(line[tail - 1] == '1');
    }
    REQUIRE(rows == 8);  // both conventions
  }
  SECTION("assertion failures exit with code 1") {
    const fs::path dir = temp_dir("fail");
    io::RunConfig cfg;
    cfg.command = "ness";
    cfg.alpha = 0.0;
    cfg.t1 = 1.0;
    cfg.t2 = 3.0;
    cfg.init = "cosine";
    cfg.amplitude = 0.5;
    cfg.max_iter = 1;  // cannot converge in one sweep
    cfg.output_dir = dir.string();
    REQUIRE(io::run_command(cfg) == 1);
    const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
    REQUIRE_FALSE(j["passed"].get<bool>());
  }
  SECTION("positivity loss exits with code 3 and a manifest diagnostic") {
    const fs::path dir = temp_dir("domain");
    io::RunConfig cfg;
    cfg.command = "ness";
    cfg.alpha = 0.5;
    cfg.t1 = 1.0;
    cfg.t2 = 3.0;
    cfg.init = "cosine";
    cfg.amplitude = 2.5;  // density dips negative
    cfg.output_dir = dir.string();
    REQUIRE(io::run_command(cfg) == 3);
    const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
    REQUIRE(j.contains("error"));
    REQUIRE(j["error"].get<std::string>().find("positive") !=
            std::string::npos);
  }
}

TEST_CASE("deterministic outputs and manifest inventory") {
  auto run_into = [](const fs::path& dir) {
    io::RunConfig cfg;
    cfg.command = "evolve";
    cfg.linearized = true;
    cfg.alpha = 0.3;
    cfg.t1 = 1.0;
    cfg.t2 = 3.0;
    cfg.basis_order = 12;
    cfg.preset = "random";
    cfg.seed = 42;
    cfg.t_end = 2.0;
    cfg.output_dir = dir.string();
    REQUIRE(io::run_command(cfg) == 0);
  };
  const fs::path d1 = temp_dir("det1");
  const fs::path d2 = temp_dir("det2");
  run_into(d1);
  run_into(d2);

  SECTION("byte-identical data files") {
    for (const char* name : {"evolve_series.csv", "evolve_report.json"}) {
      REQUIRE(slurp(d1 / name) == slurp(d2 / name));
    }
  }
  SECTION("manifests agree modulo timestamps") {
    auto j1 = nlohmann::json::parse(slurp(d1 / "manifest.json"));
    auto j2 = nlohmann::json::parse(slurp(d2 / "manifest.json"));
    for (auto* j : {&j1, &j2}) {
      j->erase("started_at");
      j->erase("finished_at");
      (*j)["config"].erase("output_dir");
    }
    REQUIRE(j1 == j2);
  }
  SECTION("every emitted file is inventoried with its checksum") {
    const auto j = nlohmann::json::parse(slurp(d1 / "manifest.json"));
    REQUIRE(j["outputs"].size() == 2);
    for (const auto& entry : j["outputs"]) {
      const fs::path f = d1 / entry["file"].get<std::string>();
      REQUIRE(fs::exists(f));
      REQUIRE(entry["checksum"].get<std::string>() ==
              io::file_checksum(f));
    }
  }
}

TEST_CASE("command dispatch through the installed binary") {
  // end-to-end through main(), exercising argv parsing and exit codes
  const fs::path dir = temp_dir("exe");
  const std::string cmd = std::string(BGKLAB_CLI_PATH) +
                          " rates --alpha 0 --t1 1 --t2 1 --output-dir " +
                          dir.string();
  REQUIRE(std::system(cmd.c_str()) == 0);
  REQUIRE(fs::exists(dir / "rates.json"));
  const std::string usage = std::string(BGKLAB_CLI_PATH) +
                            " rates --alpha 2 --output-dir " + dir.string() +
                            " 2>/dev/null";
  const int rc = std::system(usage.c_str());
  REQUIRE(WEXITSTATUS(rc) == 2);
}
