#include <doctest.h>

#include <stdexcept>
#include <string>

#include "mdauct/config.hpp"

using namespace mdauct;

namespace {

const char* kSetting1 = R"(# the pavlov-style uniform square
name = setting1
N = 2
J = 2
T = 20
box.lower = 2,2
box.upper = 3,3
costs = 0,0
dist.kind = uniform
)";

}  // namespace

TEST_CASE("a full setting file parses") {
    const ExperimentConfig cfg = parse_config(kSetting1);
    CHECK(cfg.name == "setting1");
    CHECK(cfg.buyer_counts == std::vector<int>{2});
    CHECK(cfg.qualities == 2);
    CHECK(cfg.intervals == 20);
    CHECK(cfg.box.lower == std::vector<double>{2.0, 2.0});
    CHECK(cfg.box.upper == std::vector<double>{3.0, 3.0});
    CHECK(cfg.costs == std::vector<double>{0.0, 0.0});
    CHECK(cfg.distribution_summary == "uniform");
    CHECK(cfg.ebm_resolution == 20);  // defaults to T
    CHECK(cfg.seed == 1);

    const AuctionSetting setting = cfg.make_setting(2);
    CHECK(setting.grid->size() == 441);
}

TEST_CASE("T must be positive") {
    const std::string text = std::string(kSetting1);
    const std::string broken =
        text.substr(0, text.find("T = 20")) + "T = 0\n" +
        text.substr(text.find("T = 20") + 7);
    CHECK_THROWS_WITH_AS(parse_config(broken), doctest::Contains("T must be >= 1"),
                         std::invalid_argument);
}

TEST_CASE("mixture spec with alpha parses into the mixture family") {
    const char* text = R"(
name = setting3c
N = 1,2,3
J = 2
T = 20
box.lower = 0,0
box.upper = 1,1
costs = 0,0
dist.kind = mixture
dist.alpha = 0.5
dist.first.kind = uniform
dist.second.kind = beta
dist.second.a = 1
dist.second.b = 2
)";
    const ExperimentConfig cfg = parse_config(text);
    CHECK(cfg.buyer_counts == std::vector<int>{1, 2, 3});
    CHECK(std::holds_alternative<MixtureSpec>(cfg.distribution.node()));
    CHECK(cfg.distribution_summary ==
          "mixture(alpha=0.5,uniform,beta(a=1,b=2))");
}

TEST_CASE("product distributions resolve per-dimension defaults") {
    const char* text = R"(
name = setting3b
N = 1,2,3
J = 2
T = 20
box.lower = 0,0
box.upper = 1,1
costs = 0,0
dist.kind = product
dist.dim1.kind = uniform
dist.dim2.kind = truncnormal
)";
    const ExperimentConfig cfg = parse_config(text);
    // Defaults: midpoint mean, quarter-range stddev, both recorded.
    CHECK(cfg.distribution_summary ==
          "product(uniform x truncnormal(mean=[0.5],stddev=[0.25]))");
}

TEST_CASE("unknown and duplicate keys are rejected with line numbers") {
    CHECK_THROWS_WITH_AS(parse_config(std::string(kSetting1) + "bogus = 3\n"),
                         doctest::Contains("unknown key `bogus`"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(std::string(kSetting1) + "T = 21\n"),
                         doctest::Contains("duplicate key `T`"), std::invalid_argument);
}

TEST_CASE("semantic validation") {
    // costs length must match J
    std::string text(kSetting1);
    const auto pos = text.find("costs = 0,0");
    CHECK_THROWS_WITH_AS(
        parse_config(text.substr(0, pos) + "costs = 0\n" + text.substr(pos + 12)),
        doctest::Contains("costs must have J entries"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config("name = x\n"), doctest::Contains("missing required"),
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_config(std::string(kSetting1) + "solver.tau = -1\n"),
                    std::invalid_argument);
}

TEST_CASE("solver and seed overrides reach the config") {
    const std::string text = std::string(kSetting1) +
                             "seed = 42\nsolver.tau = 1e-5\nebm.samples = 5000\n"
                             "solver.max_inner = 77\n";
    const ExperimentConfig cfg = parse_config(text);
    CHECK(cfg.seed == 42);
    CHECK(cfg.solver.exclusion_tau == 1e-5);
    CHECK(cfg.ebm_samples == 5000);
    CHECK(cfg.solver.max_inner == 77);
}
