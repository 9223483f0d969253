#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mdauct/config.hpp"
#include "mdauct/ebm.hpp"
#include "mdauct/solver.hpp"

namespace mdauct {

enum class RunMode : std::uint8_t {
    Solve,      // optimal auction only
    Ebm,        // price-menu search only
    Compare,    // both, with the revenue gap
    Exclusion,  // optimal auctions across all N, mask comparison
};

enum class ArtifactFormat : std::uint8_t { Csv, Pgm, Both };

/// Results for one buyer count.
struct NRunResult {
    int buyers = 0;
    bool solved = false;
    double per_buyer_objective = 0.0;
    double total_revenue = 0.0;
    bool certified = false;
    SolveDiagnostics diagnostics;
    std::vector<bool> mask;

    bool has_ebm = false;
    PriceMenu menu;
    EbmOutcome ebm;
    double gap = 0.0;  // (total - ebm) / total
};

struct RunReport {
    std::string name;
    std::vector<NRunResult> runs;
    bool all_certified = true;
    bool compared_masks = false;
    bool masks_identical = false;
    bool masks_fuzzy_identical = false;
};

/// Exact equality of two exclusion masks.
bool masks_equal(const std::vector<bool>& a, const std::vector<bool>& b);

/// Equality up to one grid cell: each masked point has a masked counterpart
/// at Chebyshev distance <= 1, both ways.  Absorbs LP-tolerance flicker at
/// region boundaries.
bool masks_equal_fuzzy(const std::vector<bool>& a, const std::vector<bool>& b,
                       const TypeGrid& grid);

/// Runs the experiment for every configured buyer count and writes the
/// artifacts into `out_dir/<name>/n<K>/` (solution.csv, Q<j>.pgm,
/// exclusion.pgm, report.txt, report.csv) plus an experiment-level report.
/// Returns the in-memory report; throws on backend errors.
RunReport run_experiment(const ExperimentConfig& config, RunMode mode,
                         const std::string& out_dir, ArtifactFormat format = ArtifactFormat::Both,
                         std::ostream* log = nullptr);

/// Built-in sanity suite: the one-dimensional solver against the closed-form
/// oracle for 1-3 buyers, and the Border prefix oracle against exhaustive
/// subset enumeration on tiny random instances.  Prints one line per check;
/// returns true when everything passes.
bool run_validation(std::ostream& log);

}  // namespace mdauct
