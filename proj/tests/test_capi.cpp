#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "evoscale/evoscale.h"

namespace {

const char* kConfig = R"json({
  "schema_version": 1,
  "model": {
    "trait_dim": 1,
    "birth": {"family": "affine", "intercept": 1.0, "slope": [0.1]},
    "competition": {"family": "constant", "value": 1.0},
    "mutation_prob": 0.1,
    "kernel": {"sd": 0.1}
  },
  "scale": {"gamma": [0.01]},
  "run": {"replicates": 50, "horizon": 50.0, "seed": 7, "initial_trait": [0.0]}
})json";

}  // namespace

TEST_CASE("closed forms over the c surface") {
    double probs[256];
    size_t len = 0;
    double mean = 0.0;
    REQUIRE(evs_stationary_law(1.0, 1e-12, probs, 256, &len, &mean) == EVS_OK);
    CHECK(len >= 10);
    CHECK(probs[0] == doctest::Approx(0.5819767068693264).epsilon(1e-12));
    CHECK(mean == doctest::Approx(1.5819767068693264).epsilon(1e-12));

    double normalizer = 0.0;
    REQUIRE(evs_alpha_stationary_law(2.0, 2.0, 1e-13, probs, 256, &len, &normalizer) ==
            EVS_OK);
    CHECK(normalizer == doctest::Approx(0.2087828167030515).epsilon(1e-10));

    double beta = 0.0;
    REQUIRE(evs_mutant_production_rate(0.1, 1.0, 1.0, &beta) == EVS_OK);
    CHECK(beta == doctest::Approx(0.15819767068693264).epsilon(1e-12));

    double chi = 0.0;
    REQUIRE(evs_neutral_fitness(1.0, &chi) == EVS_OK);
    CHECK(chi == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(evs_neutral_fitness(-1.0, &chi) == EVS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("two-type params and rates") {
    evs_two_type_params p;
    const double s[5] = {0.1, 0.0, 0.0, 0.0, 0.0};
    REQUIRE(evs_two_type_from_base(1.0, 1.0, 0.0, s, &p) == EVS_OK);
    CHECK(p.b2 == doctest::Approx(1.1));
    double rates[4];
    REQUIRE(evs_two_type_rates(2, 1, &p, rates) == EVS_OK);
    CHECK(rates[0] == 2.0);
    CHECK(rates[3] == doctest::Approx(2.0));
    CHECK(evs_two_type_rates(0, 0, &p, rates) == EVS_ERR_INVALID_ARGUMENT);
    // impossible coefficients are rejected with a message
    const double bad[5] = {0.0, 5.0, 0.0, 0.0, 0.0};
    CHECK(evs_two_type_from_base(1.0, 1.0, 0.0, bad, &p) == EVS_ERR_INVALID_ARGUMENT);
    CHECK(std::string(evs_last_error()).size() > 0);
}

TEST_CASE("fixation table handle") {
    evs_two_type_params p;
    REQUIRE(evs_two_type_from_base(1.0, 1.0, 0.0, nullptr, &p) == EVS_OK);
    evs_fixation_table* table = nullptr;
    REQUIRE(evs_fixation_solve(&p, 60, 20, 1e-10, 0, &table) == EVS_OK);
    double u = 0.0;
    REQUIRE(evs_fixation_value(table, 3, 1, &u) == EVS_OK);
    CHECK(u == doctest::Approx(0.25).epsilon(1e-9));
    REQUIRE(evs_fixation_value(table, 0, 5, &u) == EVS_OK);
    CHECK(u == 1.0);
    CHECK(evs_fixation_value(table, 100, 100, &u) == EVS_ERR_INVALID_ARGUMENT);
    int n_max = 0;
    double residual = 0.0, sens = 0.0;
    REQUIRE(evs_fixation_info(table, &n_max, &residual, &sens) == EVS_OK);
    CHECK(n_max == 60);
    CHECK(residual <= 1e-10);
    const std::filesystem::path csv = std::filesystem::temp_directory_path() / "evs_fix.csv";
    REQUIRE(evs_fixation_write_csv(table, csv.string().c_str()) == EVS_OK);
    CHECK(std::filesystem::file_size(csv) > 100);
    std::filesystem::remove(csv);
    evs_fixation_destroy(table);
}

TEST_CASE("monte carlo fixation") {
    evs_two_type_params p;
    REQUIRE(evs_two_type_from_base(1.0, 1.0, 0.0, nullptr, &p) == EVS_OK);
    double est = 0.0, se = 0.0;
    REQUIRE(evs_mc_fixation(&p, 1, 1, 20000, 5, 2, &est, &se) == EVS_OK);
    CHECK(std::fabs(est - 0.5) < 3.0 * se);
}

TEST_CASE("invasibility and slopes") {
    double g = 0.0;
    REQUIRE(evs_invasibility_g('l', 2, 1.0, 1.0, 0.0, 2000, &g) == EVS_OK);
    CHECK(g == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(evs_invasibility_g('x', 2, 1.0, 1.0, 0.0, 2000, &g) == EVS_ERR_INVALID_ARGUMENT);
    CHECK(evs_invasibility_g('d', 2, 1.0, 1.0, 0.5, 2000, &g) == EVS_ERR_INVALID_ARGUMENT);
    double slopes[3];
    REQUIRE(evs_adaptive_slopes(1.0, 1.0, 10000, slopes) == EVS_OK);
    CHECK(slopes[0] == doctest::Approx((2.0 * std::exp(1.0) - 5.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("genealogy over the c surface") {
    double q2[33], q3[33], kappa = 0.0, kp = 0.0;
    REQUIRE(evs_genealogy(1.0, 1.0, 0.0, 32, "harmonic", 0, 0, q2, q3, &kappa, &kp) ==
            EVS_OK);
    CHECK(q2[2] == 1.0);
    CHECK(q3[3] == 1.0);
    CHECK(q2[10] > 0.0);
    CHECK(q2[10] < 1.0);
    CHECK(kappa == doctest::Approx(1.0 * (1.0 - 2.0 * q2[3] / 3.0) + 1.0));
    double q2mc[33];
    REQUIRE(evs_genealogy(1.0, 1.0, 0.0, 32, "monte_carlo", 5000, 3, q2mc, nullptr, nullptr,
                          nullptr) == EVS_OK);
    CHECK(std::fabs(q2mc[10] - q2[10]) < 0.05);
    CHECK(evs_genealogy(1.0, 1.0, 0.0, 32, "guesswork", 0, 0, nullptr, nullptr, nullptr,
                        nullptr) == EVS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("config and pipelines") {
    evs_config* cfg = nullptr;
    REQUIRE(evs_config_from_string(kConfig, &cfg) == EVS_OK);
    REQUIRE(evs_config_override(cfg, "run.horizon=10.0") == EVS_OK);
    REQUIRE(evs_config_set_seed(cfg, 99) == EVS_OK);
    CHECK(evs_config_override(cfg, "nonsense") == EVS_ERR_PARSE);

    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "evs_capi_out";
    std::filesystem::remove_all(dir);
    evs_report* report = nullptr;
    REQUIRE(evs_run(cfg, "simulate-micro", dir.string().c_str(), 1, &report) == EVS_OK);
    CHECK(report == nullptr);
    CHECK(std::filesystem::exists(dir / "events.csv"));
    CHECK(std::filesystem::exists(dir / "sizes.csv"));
    REQUIRE(evs_run(cfg, "tss", dir.string().c_str(), 1, nullptr) == EVS_OK);
    CHECK(std::filesystem::exists(dir / "tss_path.csv"));
    CHECK(evs_run(cfg, "not-a-command", dir.string().c_str(), 1, nullptr) ==
          EVS_ERR_INVALID_ARGUMENT);
    std::filesystem::remove_all(dir);
    evs_config_destroy(cfg);

    evs_config* missing = nullptr;
    CHECK(evs_config_from_file("/no/such/config.json", &missing) == EVS_ERR_PARSE);
}

TEST_CASE("status names") {
    CHECK(std::string(evs_status_name(EVS_OK)) == "ok");
    CHECK(std::string(evs_status_name(EVS_ERR_VALIDATION_FAILED)) == "validation failed");
    CHECK(std::string(evs_version()) == "1.0.0");
}
