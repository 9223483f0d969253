#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdauct/distribution.hpp"
#include "mdauct/solver.hpp"

namespace mdauct {

/// One experiment: a setting plus the buyer counts to run it for.
struct ExperimentConfig {
    std::string name;
    std::vector<int> buyer_counts;
    int qualities = 1;
    Box box;
    std::vector<double> costs;
    int intervals = 20;  // T
    DistributionSpec distribution = DistributionSpec::uniform();
    std::string distribution_summary;  // resolved parameters, for reports
    SolverConfig solver;
    int ebm_resolution = 0;    // 0: defaults to T
    long ebm_samples = 200000;
    std::uint64_t seed = 1;

    /// Builds the discretized setting for one buyer count.
    AuctionSetting make_setting(int buyers) const;
};

/// Parses the line-oriented `key = value` format:
///   - `#` starts a comment, blank lines are ignored;
///   - distribution sub-specs use dotted keys (dist.kind, dist.alpha,
///     dist.first.kind, dist.dim1.kind, ...);
///   - unknown or duplicate keys are rejected with their line number.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config_file(const std::string& path);

}  // namespace mdauct
