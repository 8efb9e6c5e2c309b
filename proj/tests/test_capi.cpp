#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "bsr.h"

namespace {

const char* kConfig = R"({
  "geometry": {"kind": "interval", "n": 16},
  "model": {"alpha": 2, "beta": 2, "epsilon": 0.05},
  "time": {"dt": 0.005, "t_end": 0.05},
  "initial": {"preset": "compatible-positive"}
})";

} // namespace

TEST_CASE("version and error accessors are always safe") {
    CHECK(bsr_version_string() != nullptr);
    CHECK(bsr_last_error() != nullptr);
    CHECK(std::isnan(bsr_sim_time(nullptr)));
}

TEST_CASE("config parsing reports field-level failures") {
    bsr_config* cfg = nullptr;
    CHECK(bsr_config_parse(nullptr, &cfg) == BSR_ERR_INVALID_ARGUMENT);
    CHECK(bsr_config_parse("{\"model\":{\"alpha\":0}}", &cfg) ==
          BSR_ERR_INVALID_ARGUMENT);
    CHECK(cfg == nullptr);
    CHECK(std::strstr(bsr_last_error(), "model.alpha") != nullptr);

    REQUIRE(bsr_config_parse(kConfig, &cfg) == BSR_OK);
    REQUIRE(cfg != nullptr);
    bsr_config_free(cfg);
}

TEST_CASE("stepwise simulation conserves mass and advances time") {
    bsr_config* cfg = nullptr;
    REQUIRE(bsr_config_parse(kConfig, &cfg) == BSR_OK);
    bsr_sim* sim = nullptr;
    REQUIRE(bsr_sim_create(cfg, &sim) == BSR_OK);

    size_t nb = 0, ns = 0;
    REQUIRE(bsr_sim_sizes(sim, &nb, &ns) == BSR_OK);
    CHECK(nb == 16);
    CHECK(ns == 2);

    double diag0[15], diag1[15];
    REQUIRE(bsr_sim_diagnostics(sim, diag0) == BSR_OK);
    REQUIRE(bsr_sim_advance(sim, 10) == BSR_OK);
    REQUIRE(bsr_sim_diagnostics(sim, diag1) == BSR_OK);
    CHECK(bsr_sim_time(sim) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(std::abs(diag1[1] - diag0[1]) / std::abs(diag0[1]) < 1e-12); // mass
    CHECK(diag1[2] <= diag0[2] + 1e-9);                                // E1

    std::vector<double> u(nb), v(ns);
    REQUIRE(bsr_sim_state(sim, u.data(), v.data()) == BSR_OK);
    for (double x : u) CHECK(x > 0.0);
    for (double x : v) CHECK(x > 0.0);

    bsr_sim_free(sim);
    bsr_config_free(cfg);
}

TEST_CASE("batch execution writes outputs through the C surface") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "bsr_capi_test";
    fs::remove_all(dir);

    bsr_config* cfg = nullptr;
    REQUIRE(bsr_config_parse(kConfig, &cfg) == BSR_OK);
    CHECK(bsr_execute("solve", cfg, dir.string().c_str(), 1) == BSR_OK);
    CHECK(fs::exists(dir / "trajectory.csv"));
    CHECK(fs::exists(dir / "final_state.json"));
    CHECK(bsr_execute("bogus", cfg, dir.string().c_str(), 1) ==
          BSR_ERR_INVALID_ARGUMENT);
    bsr_config_free(cfg);
    fs::remove_all(dir);
}
