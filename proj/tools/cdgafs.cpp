// Command-line front end for the CDGAFS feature-selection toolkit.

#include "cdgafs/cli_commands.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <vector>

namespace {

void add_ga_flags(CLI::App* cmd, cdgafs::CliOptions& opt, std::vector<double>& ratios) {
    cmd->add_option("--omega", opt.ga.omega, "Features selected per community");
    cmd->add_option("--knn", opt.ga.k_nn, "Neighbor count of the KNN classifier");
    cmd->add_option("--pop", opt.ga.population_size, "Population size");
    cmd->add_option("--iters", opt.ga.max_iterations, "Generation count");
    cmd->add_option("--cx-rate", opt.ga.crossover_rate, "Crossover rate");
    cmd->add_option("--mut-rate", opt.ga.mutation_rate, "Per-gene mutation rate");
    cmd->add_option("--filter-cap", opt.ga.filter_cap, "Keep at most this many top-scoring features");
    cmd->add_option("--seed", opt.ga.seed, "Master random seed");
    cmd->add_option("--repeats", opt.repeats, "Independent runs (seeds seed..seed+r-1)");
    cmd->add_option("--split", ratios, "Train,validation,test ratios")->delimiter(',')->expected(3);
    cmd->add_option("--out", opt.out_dir, "Output directory");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CDGAFS: community-detection-based genetic feature selection"};
    app.require_subcommand(1);

    cdgafs::CliOptions opt;
    std::vector<double> ratios = {0.6, 0.2, 0.2};

    CLI::App* run = app.add_subcommand("run", "Select features on a dataset and write report/trace");
    run->add_option("--data", opt.data_path, "Dataset CSV")->required();
    run->add_option("--label", opt.label, "Label column (name or 0-based index; default last)");
    run->add_flag("--no-repair", [&](std::size_t) { opt.ga.repair_enabled = false; },
                  "Disable the community repair operator (plain GA baseline)");
    run->add_flag("--export-graph", opt.export_graph, "Also write the normalized weight matrix");
    add_ga_flags(run, opt, ratios);

    CLI::App* ablate = app.add_subcommand("ablate", "Compare runs with and without the repair operator");
    ablate->add_option("--data", opt.data_path, "Dataset CSV")->required();
    ablate->add_option("--label", opt.label, "Label column (name or 0-based index; default last)");
    add_ga_flags(ablate, opt, ratios);

    CLI::App* synth = app.add_subcommand("synth", "Generate the synthetic redundancy benchmark");
    synth->add_option("--groups", opt.synth.groups, "Number of near-duplicate feature groups");
    synth->add_option("--group-size", opt.synth.group_size, "Features per group");
    synth->add_option("--noise", opt.synth.noise_features, "Pure-noise feature count");
    synth->add_option("--patterns", opt.synth.patterns, "Pattern count");
    synth->add_option("--seed", opt.ga.seed, "Generator seed");
    synth->add_option("--out", opt.out_dir, "Output directory");

    CLI::App* info = app.add_subcommand("info", "Print dataset statistics");
    info->add_option("--data", opt.data_path, "Dataset CSV")->required();
    info->add_option("--label", opt.label, "Label column (name or 0-based index; default last)");

    CLI11_PARSE(app, argc, argv);

    try {
        opt.split_ratios = {ratios[0], ratios[1], ratios[2]};
        if (run->parsed()) {
            cdgafs::cmd_run(opt, std::cout);
        } else if (ablate->parsed()) {
            cdgafs::cmd_ablate(opt, std::cout);
        } else if (synth->parsed()) {
            cdgafs::cmd_synth(opt, std::cout);
        } else if (info->parsed()) {
            cdgafs::cmd_info(opt, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
