#include <cmath>

#include "core/config.hpp"
#include "doctest.h"

using namespace evoscale;

namespace {

const char* kBasic = R"json({
  "schema_version": 1,
  "model": {
    "trait_dim": 1,
    "birth": {"family": "affine", "intercept": 1.0, "slope": [0.1]},
    "competition": {"family": "constant", "value": 1.0},
    "mutation_prob": 0.1,
    "kernel": {"sd": 0.1}
  },
  "scale": {"gamma": [0.01, 0.001], "epsilon": [0.1, 0.05]},
  "run": {"replicates": 100, "horizon": 5.0, "seed": 42, "initial_trait": [0.0]}
})json";

}  // namespace

TEST_CASE("parses the basic configuration") {
    const ExperimentConfig cfg = ExperimentConfig::from_string(kBasic);
    CHECK(cfg.model.dim == 1);
    CHECK(cfg.model.b(cfg.model.trait(1.0)) == doctest::Approx(1.1));
    CHECK(cfg.model.c(cfg.model.trait(0.0), cfg.model.trait(0.0)) == 1.0);
    CHECK(cfg.model.mu(cfg.model.trait(0.0)) == 0.1);
    CHECK(cfg.scale.gamma.size() == 2);
    CHECK(cfg.run.seed == 42);
    CHECK(cfg.run.replicates == 100);
    CHECK(cfg.solver.k_max == 10000);  // defaults fill in
}

TEST_CASE("seed is mandatory") {
    std::string text = kBasic;
    const auto pos = text.find("\"seed\": 42, ");
    text.erase(pos, std::string("\"seed\": 42, ").size());
    CHECK_THROWS_AS(ExperimentConfig::from_string(text), ConfigError);
}

TEST_CASE("schema version is enforced") {
    std::string text = kBasic;
    const auto pos = text.find("\"schema_version\": 1");
    text.replace(pos, std::string("\"schema_version\": 1").size(), "\"schema_version\": 2");
    CHECK_THROWS_AS(ExperimentConfig::from_string(text), ConfigError);
}

TEST_CASE("parse errors carry a position") {
    try {
        ExperimentConfig::from_string("{\"schema_version\": 1,,}");
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("parse error") != std::string::npos);
    }
}

TEST_CASE("gaussian and log-affine competition families") {
    std::string text = ExperimentConfig::apply_override(
        kBasic, "model.competition={\"family\":\"gaussian_diff\",\"width\":2.0}");
    const ExperimentConfig cfg = ExperimentConfig::from_string(text);
    const Trait x = cfg.model.trait(0.0);
    const Trait y = cfg.model.trait(1.0);
    CHECK(cfg.model.c(x, x) == 1.0);
    CHECK(cfg.model.c(x, y) == doctest::Approx(std::exp(-1.0 / 8.0)));
    CHECK(cfg.model.grad1_c(x).norm() == 0.0);  // symmetric kernel, zero diagonal gradient

    std::string text2 = ExperimentConfig::apply_override(
        kBasic, "model.competition={\"family\":\"log_affine\",\"g1\":[0.2],\"g2\":[-0.1]}");
    const ExperimentConfig cfg2 = ExperimentConfig::from_string(text2);
    CHECK(cfg2.model.grad1_c(x)[0] == doctest::Approx(0.2));
    CHECK(cfg2.model.grad2_c(x)[0] == doctest::Approx(-0.1));
}

TEST_CASE("override rewrites nested values") {
    const std::string text =
        ExperimentConfig::apply_override(kBasic, "model.birth.intercept=2.5");
    const ExperimentConfig cfg = ExperimentConfig::from_string(text);
    CHECK(cfg.model.b(cfg.model.trait(0.0)) == 2.5);
    CHECK_THROWS(ExperimentConfig::apply_override(kBasic, "no-equals-sign"));
}

TEST_CASE("validation of ranges") {
    CHECK_THROWS(ExperimentConfig::from_string(
        ExperimentConfig::apply_override(kBasic, "model.mutation_prob=1.5")));
    CHECK_THROWS(ExperimentConfig::from_string(
        ExperimentConfig::apply_override(kBasic, "scale.gamma=[2.0]")));
    CHECK_THROWS(ExperimentConfig::from_string(
        ExperimentConfig::apply_override(kBasic, "model.kernel.sd=-1.0")));
    CHECK_THROWS(ExperimentConfig::from_string(
        ExperimentConfig::apply_override(kBasic, "run.initial_trait=[0.0,1.0]")));
}
