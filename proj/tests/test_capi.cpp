#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "masersim/masersim.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("masersim_capi_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

const char* kSepConfig = R"({
  "variant": "sep-norm",
  "params": {"N0": 0.05, "theta": 0},
  "integrator": {"t_end": 10.0, "sample_interval": 0.1},
  "analyses": ["conservation"]
})";

} // namespace

TEST_CASE("version and closed forms") {
    CHECK(std::strlen(masersim_version()) > 0);

    double out = 0;
    CHECK(masersim_threshold_mu_th2(1e12, &out) == MASERSIM_OK);
    CHECK(out == doctest::Approx(2e6));
    CHECK(masersim_stationary_inversion(0, 1e12, &out) == MASERSIM_OK);
    CHECK(out == doctest::Approx(-1e6));
    CHECK(masersim_einstein_alpha(3.25e15, &out) == MASERSIM_OK);
    CHECK(std::abs(out - 0.25) < 0.025);

    CHECK(masersim_threshold_mu_th2(1e12, nullptr) == MASERSIM_ERR_CONFIG);
    CHECK(std::string(masersim_last_error_code()) == "invalid_argument");
    CHECK(masersim_threshold_mu_th2(-1.0, &out) == MASERSIM_ERR_CONFIG);
    CHECK(masersim_gamma_from_convection(1.0, 0.0, &out) == MASERSIM_ERR_CONFIG);
    CHECK(std::string(masersim_last_error_code()) == "non_positive_length");
}

TEST_CASE("run handle lifecycle") {
    masersim_run* run = nullptr;
    REQUIRE(masersim_run_create(kSepConfig, &run) == MASERSIM_OK);
    REQUIRE(run != nullptr);

    // accessors before execute are inert
    CHECK(masersim_run_sample_count(run) == 0);
    CHECK(masersim_run_label(run, 0) == nullptr);

    REQUIRE(masersim_run_execute(run) == MASERSIM_OK);
    CHECK(masersim_run_sample_count(run) == 101);
    CHECK(masersim_run_dimension(run) == 3);
    CHECK(std::string(masersim_run_label(run, 0)) == "M");
    CHECK(std::string(masersim_run_label(run, 2)) == "N_c");

    double t = -1, state[3];
    REQUIRE(masersim_run_sample(run, 0, &t, state) == MASERSIM_OK);
    CHECK(t == 0.0);
    CHECK(state[0] == 1.0);
    CHECK(masersim_run_sample(run, 500, &t, state) == MASERSIM_ERR_CONFIG);

    char* csv = nullptr;
    REQUIRE(masersim_run_trajectory_csv(run, &csv) == MASERSIM_OK);
    CHECK(std::strncmp(csv, "T,M,N_inc,N_c\n", 14) == 0);
    masersim_string_free(csv);

    char* analysis = nullptr;
    REQUIRE(masersim_run_analysis_json(run, &analysis) == MASERSIM_OK);
    CHECK(std::string(analysis).find("conservation") != std::string::npos);
    masersim_string_free(analysis);

    char* cfg = nullptr;
    REQUIRE(masersim_run_config_json(run, &cfg) == MASERSIM_OK);
    CHECK(std::string(cfg).find("sep-norm") != std::string::npos);
    masersim_string_free(cfg);

    masersim_run_free(run);
    masersim_run_free(nullptr); // harmless
}

TEST_CASE("bad configs map to the config status") {
    masersim_run* run = nullptr;
    CHECK(masersim_run_create("{not json", &run) == MASERSIM_ERR_CONFIG);
    CHECK(std::string(masersim_last_error_code()) == "config_parse");

    CHECK(masersim_run_create(R"({"variant": "sep-norm", "bogus": 1})", &run) ==
          MASERSIM_ERR_CONFIG);
    CHECK(std::string(masersim_last_error_code()) == "schema_error");

    CHECK(masersim_run_create(R"({"variant": "warp-drive"})", &run) ==
          MASERSIM_ERR_CONFIG);
    CHECK(std::string(masersim_last_error_code()) == "unknown_variant");

    CHECK(masersim_run_create(nullptr, &run) == MASERSIM_ERR_CONFIG);
}

TEST_CASE("simulate command writes the three artifacts") {
    TempDir tmp;
    REQUIRE(masersim_cmd_simulate(kSepConfig, tmp.path.c_str()) == MASERSIM_OK);
    CHECK(fs::exists(tmp.path / "trajectory.csv"));
    CHECK(fs::exists(tmp.path / "analysis.json"));
    CHECK(fs::exists(tmp.path / "manifest.json"));

    // malformed config leaves no partial outputs
    TempDir tmp2;
    CHECK(masersim_cmd_simulate("{bad", tmp2.path.c_str()) == MASERSIM_ERR_CONFIG);
    CHECK(fs::is_empty(tmp2.path));
}

TEST_CASE("figure and analyze commands") {
    TempDir tmp;
    CHECK(masersim_cmd_figure_preset("fig9", tmp.path.c_str(), 1) ==
          MASERSIM_ERR_CONFIG);
    CHECK(std::string(masersim_last_error_code()) == "unknown_preset");

    REQUIRE(masersim_cmd_figure_preset("fig2", tmp.path.c_str(), 2) == MASERSIM_OK);
    CHECK(fs::exists(tmp.path / "run_000.csv"));
    CHECK(fs::exists(tmp.path / "run_001.csv"));
    CHECK(fs::exists(tmp.path / "summary.csv"));
    CHECK(fs::exists(tmp.path / "overlay.csv"));
    CHECK(fs::exists(tmp.path / "manifest.json"));
    CHECK(fs::exists(tmp.path / "fig2.svg"));

    const fs::path out = tmp.path / "re_analysis.json";
    const std::string cfg = R"({
      "variant": "trad-norm",
      "params": {"N0": 0.05, "theta": 0},
      "analyses": ["conservation"]
    })";
    REQUIRE(masersim_cmd_analyze((tmp.path / "run_000.csv").c_str(), cfg.c_str(),
                                 out.c_str()) == MASERSIM_OK);
    std::ifstream in(out);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    CHECK(text.find("max_relative_drift") != std::string::npos);

    // failed analysis: embedded error plus compute status
    const std::string bad_cfg = R"({
      "variant": "trad-norm",
      "params": {"N0": 0.05, "theta": 0},
      "analyses": ["pulse_train"]
    })";
    CHECK(masersim_cmd_analyze((tmp.path / "run_000.csv").c_str(), bad_cfg.c_str(),
                               out.c_str()) == MASERSIM_ERR_COMPUTE);
}
