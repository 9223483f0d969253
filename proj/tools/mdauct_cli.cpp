#include <iostream>
#include <omp.h>
#include <string>

#include <CLI11.hpp>

#include "mdauct/experiment.hpp"

namespace {

struct CommonFlags {
    std::string out_dir = "out";
    double tol = 0.0;
    long seed = -1;
    int threads = 0;
    std::string format = "both";
};

void add_common(CLI::App* cmd, CommonFlags& flags, std::string& config_path) {
    cmd->add_option("config", config_path, "experiment config file")->required();
    cmd->add_option("--out", flags.out_dir, "output directory (default: out)");
    cmd->add_option("--tol", flags.tol, "override the separation violation tolerance");
    cmd->add_option("--seed", flags.seed, "override the config seed");
    cmd->add_option("--threads", flags.threads, "OpenMP thread count (default: all)");
    cmd->add_option("--format", flags.format, "artifact format: csv, pgm or both")
        ->check(CLI::IsMember({"csv", "pgm", "both"}));
}

int run(const std::string& config_path, const CommonFlags& flags, mdauct::RunMode mode) {
    if (flags.threads > 0) omp_set_num_threads(flags.threads);
    mdauct::ExperimentConfig config = mdauct::load_config_file(config_path);
    if (flags.tol > 0.0) config.solver.violation_tol = flags.tol;
    if (flags.seed >= 0) config.seed = static_cast<std::uint64_t>(flags.seed);
    mdauct::ArtifactFormat format = mdauct::ArtifactFormat::Both;
    if (flags.format == "csv") format = mdauct::ArtifactFormat::Csv;
    if (flags.format == "pgm") format = mdauct::ArtifactFormat::Pgm;

    const mdauct::RunReport report =
        mdauct::run_experiment(config, mode, flags.out_dir, format, &std::cout);
    if (!report.all_certified) {
        std::cerr << "error: at least one solve failed certification" << std::endl;
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal multi-dimensional auction solver and experiment runner"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string config_path;

    CLI::App* solve = app.add_subcommand("solve", "solve the optimal auction for each N");
    add_common(solve, flags, config_path);
    CLI::App* ebm = app.add_subcommand("ebm", "search the best exclusive buyer menu");
    add_common(ebm, flags, config_path);
    CLI::App* compare =
        app.add_subcommand("compare", "optimal auction versus the best exclusive buyer menu");
    add_common(compare, flags, config_path);
    CLI::App* exclusion =
        app.add_subcommand("exclusion", "exclusion-region study across buyer counts");
    add_common(exclusion, flags, config_path);
    CLI::App* validate = app.add_subcommand("validate", "run the built-in oracle checks");
    int validate_threads = 0;
    validate->add_option("--threads", validate_threads, "OpenMP thread count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            if (validate_threads > 0) omp_set_num_threads(validate_threads);
            return mdauct::run_validation(std::cout) ? 0 : 1;
        }
        if (solve->parsed()) return run(config_path, flags, mdauct::RunMode::Solve);
        if (ebm->parsed()) return run(config_path, flags, mdauct::RunMode::Ebm);
        if (compare->parsed()) return run(config_path, flags, mdauct::RunMode::Compare);
        if (exclusion->parsed()) return run(config_path, flags, mdauct::RunMode::Exclusion);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    return 0;
}
