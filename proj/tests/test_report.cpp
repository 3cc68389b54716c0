#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cocycle/report.hpp"

using namespace cocycle;
using namespace cocycle::cli;

namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kConstCfg = R"({
  "cocycle": {"kind": "constant", "entries": [[2, 0], [0, "0.5"]]},
  "base": {"kind": "circle_rotation", "alpha": 0.41421356237309515},
  "theta_grid": {"min": -0.2, "max": 0.2, "step": 0.05},
  "orbit_length": 2000,
  "samples": 4,
  "seed": 7,
  "certify": {"samples": 4}
})";
} // namespace

TEST_CASE("config parsing with decimal strings and defaults") {
    const ExperimentConfig cfg = parse_config(kConstCfg);
    CHECK(cfg.kind == ExperimentConfig::CocycleKind::constant_matrix);
    CHECK(cfg.constant_entries.d == 0.5);
    CHECK(cfg.base.kind() == BaseSystem::Kind::circle_rotation);
    CHECK(cfg.orbit_length == 2000);
    CHECK(cfg.seed == 7);
    CHECK(cfg.theta_grid().size() == 9);
    CHECK(cfg.tol_section == 1e-12); // documented default

    CHECK_THROWS_AS(parse_config("{"), config_error);
    CHECK_THROWS_AS(parse_config(R"({"theta_grid": {"min": 0, "max": 1, "step": 0}})"),
                    config_error);
    CHECK_THROWS_AS(parse_config(R"({"cocycle": {"kind": "nope"}})"), config_error);
}

TEST_CASE("run writes the full output set atomically") {
    const ExperimentConfig cfg = parse_config(kConstCfg);
    const fs::path dir = fs::temp_directory_path() / "cocycle_run_test";
    fs::remove_all(dir);
    const RunResult res = run(cfg, dir.string());
    REQUIRE(res.exit_code == 0);
    for (const char* name : {"sweep.csv", "plotdata.csv", "derivatives.json", "certificate.json"})
        CHECK(fs::exists(dir / name));

    // theta = 0 row carries log 2
    const std::string csv = slurp(dir / "sweep.csv");
    CHECK(csv.find("0.69314718") != std::string::npos);
    CHECK(csv.rfind("theta,lambda_plus_formula", 0) == 0);

    const std::string dj = slurp(dir / "derivatives.json");
    CHECK(dj.find("\"concave\": true") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("malformed grid leaves no partial files") {
    const fs::path dir = fs::temp_directory_path() / "cocycle_badcfg_test";
    fs::remove_all(dir);
    CHECK_THROWS_AS(parse_config(R"({"theta_grid": {"min": -1, "max": 1, "step": -0.1}})"),
                    config_error);
    CHECK_FALSE(fs::exists(dir / "sweep.csv"));
    fs::remove_all(dir);
}

TEST_CASE("determinism of run outputs") {
    const ExperimentConfig cfg = parse_config(kConstCfg);
    const fs::path d1 = fs::temp_directory_path() / "cocycle_det1";
    const fs::path d2 = fs::temp_directory_path() / "cocycle_det2";
    fs::remove_all(d1);
    fs::remove_all(d2);
    REQUIRE(run(cfg, d1.string()).exit_code == 0);
    REQUIRE(run(cfg, d2.string()).exit_code == 0);
    for (const char* name : {"sweep.csv", "plotdata.csv", "derivatives.json", "certificate.json"})
        CHECK(slurp(d1 / name) == slurp(d2 / name));
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("dominate outputs the dset table") {
    ExperimentConfig cfg = parse_config(kConstCfg);
    cfg.theta_min = 0.6;
    cfg.theta_max = 0.7;
    cfg.theta_step = 0.02;
    const fs::path dir = fs::temp_directory_path() / "cocycle_dom_test";
    fs::remove_all(dir);
    const RunResult res = run_dominate(cfg, dir.string());
    REQUIRE(res.exit_code == 0);
    const std::string csv = slurp(dir / "dset.csv");
    CHECK(csv.rfind("theta,verdict,l,margin,gap_rate", 0) == 0);
    CHECK(csv.find("dominated") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("selftest passes and is byte-stable") {
    const SelftestResult a = selftest();
    CHECK(a.pass);
    CHECK(a.report.find("selftest: PASS") != std::string::npos);
    const SelftestResult b = selftest();
    CHECK(a.report == b.report);

    // zero tolerance scale forces strict equality and fails
    const SelftestResult z = selftest(0.0);
    CHECK_FALSE(z.pass);
    CHECK(z.report.find("[FAIL]") != std::string::npos);
}

TEST_CASE("triangular entry-function cocycles through the config") {
    const char* cfg_text = R"({
      "cocycle": {"kind": "triangular",
                  "lam": {"c0": 0.5, "cos": [0.1]},
                  "sig": {"c0": 1.0, "sin": [0.3]},
                  "eta": {"c0": 2.0}},
      "base": {"kind": "circle_rotation", "alpha": 0.3819660112501051},
      "theta_grid": {"min": -0.1, "max": 0.1, "step": 0.05},
      "orbit_length": 2000,
      "samples": 4,
      "certify": {"samples": 4}
    })";
    const ExperimentConfig cfg = parse_config(cfg_text);
    const fs::path dir = fs::temp_directory_path() / "cocycle_trig_test";
    fs::remove_all(dir);
    const RunResult res = run(cfg, dir.string());
    CHECK(res.exit_code == 0);
    fs::remove_all(dir);
}

TEST_CASE("heisenberg runner emits the report files") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentConfig::CocycleKind::heisenberg;
    cfg.theta_min = -0.1;
    cfg.theta_max = 0.1;
    cfg.theta_step = 0.05;
    cfg.orbit_length = 3000;
    cfg.samples = 8;
    cfg.certify_samples = 8;
    const fs::path dir = fs::temp_directory_path() / "cocycle_heis_test";
    fs::remove_all(dir);
    const RunResult res = run_heisenberg(cfg, dir.string());
    REQUIRE(res.exit_code == 0);
    CHECK(fs::exists(dir / "corollary.csv"));
    const std::string summary = slurp(dir / "summary.txt");
    CHECK(summary.find("lambda_plus(0)") != std::string::npos);
    fs::remove_all(dir);
}
