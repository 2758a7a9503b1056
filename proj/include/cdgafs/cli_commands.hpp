#pragma once

#include "cdgafs/core.hpp"
#include "cdgafs/dataset.hpp"
#include "cdgafs/ga.hpp"
#include "cdgafs/relevance.hpp"
#include "cdgafs/report.hpp"
#include "cdgafs/synth.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace cdgafs {

/// Options shared by the CLI commands; defaults mirror the library defaults.
struct CliOptions {
    std::string data_path;
    std::string label;               // empty = last column
    std::array<double, 3> split_ratios = {0.6, 0.2, 0.2};
    GaConfig ga;
    int repeats = 1;
    std::string out_dir = ".";
    bool export_graph = false;
    SynthConfig synth;
};

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + path.string());
    out << content;
    if (!out) throw ValidationError("failed writing output file: " + path.string());
}

inline Dataset load_prepared(const CliOptions& opt) {
    const LabelSelector selector{opt.label};
    return softmax_scale(impute_missing(load_csv(opt.data_path, selector)));
}

} // namespace detail

/// One prepared run: seeded split plus the full search.
inline RunReport run_once(const Dataset& prepared, const CliOptions& opt, std::uint64_t seed) {
    GaConfig cfg = opt.ga;
    cfg.seed = seed;
    const SplitDataset parts = split(prepared, opt.split_ratios, seed);
    return run_cdgafs(cfg, parts);
}

/// `run` command: load -> impute -> scale -> split -> search. Single runs
/// write report.json and trace.csv (plus timings.json); repeated runs write
/// per-seed files and an aggregate.json with mean/std test accuracy and
/// subset size. Returns the list of files written.
inline std::vector<std::string> cmd_run(const CliOptions& opt, std::ostream& log) {
    if (opt.repeats < 1) throw ValidationError("repeats must be at least 1");
    const Dataset prepared = detail::load_prepared(opt);
    const std::filesystem::path out_dir(opt.out_dir);
    std::filesystem::create_directories(out_dir);

    std::vector<RunReport> reports;
    reports.reserve(static_cast<std::size_t>(opt.repeats));
    for (int i = 0; i < opt.repeats; ++i) {
        reports.push_back(run_once(prepared, opt, opt.ga.seed + static_cast<std::uint64_t>(i)));
    }

    std::vector<std::string> written;
    const auto emit = [&](const std::filesystem::path& path, const std::string& content) {
        detail::write_file(path, content);
        written.push_back(path.string());
    };

    if (opt.repeats == 1) {
        emit(out_dir / "report.json", report_to_json(reports[0]).dump(2) + "\n");
        emit(out_dir / "trace.csv", trace_to_csv(reports[0]));
        emit(out_dir / "timings.json", timings_to_json(reports[0]).dump(2) + "\n");
    } else {
        std::vector<double> accuracies;
        std::vector<double> sizes;
        nlohmann::ordered_json per_seed = nlohmann::ordered_json::array();
        for (const auto& r : reports) {
            const std::string tag = std::to_string(r.config.seed);
            emit(out_dir / ("report_" + tag + ".json"), report_to_json(r).dump(2) + "\n");
            emit(out_dir / ("trace_" + tag + ".csv"), trace_to_csv(r));
            accuracies.push_back(r.test_accuracy);
            sizes.push_back(static_cast<double>(r.selected_features.size()));
            per_seed.push_back({{"seed", r.config.seed},
                                {"test_accuracy", r.test_accuracy},
                                {"selected_feature_count", r.selected_features.size()}});
        }
        const MeanStd acc = mean_std(accuracies);
        const MeanStd size = mean_std(sizes);
        nlohmann::ordered_json agg;
        agg["schema_version"] = kReportSchemaVersion;
        agg["runs"] = opt.repeats;
        agg["first_seed"] = opt.ga.seed;
        agg["test_accuracy_mean"] = acc.mean;
        agg["test_accuracy_std"] = acc.std;
        agg["test_accuracy_percent"] = format_accuracy_percent(accuracies);
        agg["selected_size_mean"] = size.mean;
        agg["selected_size_std"] = size.std;
        agg["selected_size"] = format_mean_std(size);
        agg["per_seed"] = std::move(per_seed);
        emit(out_dir / "aggregate.json", agg.dump(2) + "\n");
        log << "test accuracy: " << format_accuracy_percent(accuracies)
            << "  selected features: " << format_mean_std(size) << "\n";
    }

    if (opt.export_graph) {
        const SplitDataset parts = split(prepared, opt.split_ratios, opt.ga.seed);
        const RelevanceScores scores = relevance_analysis(parts.train, opt.ga.filter_cap);
        std::vector<int> kept = scores.kept_indices;
        std::sort(kept.begin(), kept.end());
        const FeatureGraph graph = build_graph(parts.train, kept);
        std::string csv = "node";
        for (int id : graph.node_ids) csv += "," + std::to_string(id);
        csv += '\n';
        for (std::size_t i = 0; i < graph.size(); ++i) {
            csv += std::to_string(graph.node_ids[i]);
            for (std::size_t j = 0; j < graph.size(); ++j) {
                csv += ',';
                csv += format_double(graph.weights(i, j));
            }
            csv += '\n';
        }
        emit(out_dir / "graph.csv", csv);
    }

    const auto& last = reports.back();
    log << "selected " << last.selected_features.size() << " of " << last.kept_feature_count
        << " kept features (k=" << last.community_count
        << "), test accuracy " << format_double(last.test_accuracy) << "\n";
    return written;
}

/// Result of one repair-on/repair-off comparison.
struct AblationPair {
    RunReport with_repair;
    RunReport without_repair;
};

/// Runs both variants on identical data and seed.
inline AblationPair ablate_once(const Dataset& prepared, const CliOptions& opt,
                                std::uint64_t seed) {
    const SplitDataset parts = split(prepared, opt.split_ratios, seed);
    GaConfig cfg = opt.ga;
    cfg.seed = seed;
    AblationPair pair;
    cfg.repair_enabled = true;
    pair.with_repair = run_cdgafs(cfg, parts);
    cfg.repair_enabled = false;
    pair.without_repair = run_cdgafs(cfg, parts);
    return pair;
}

/// Iteration at which the best-fitness trace first reaches its final value.
inline std::size_t first_hit_iteration(const RunReport& r) {
    if (r.trace.empty()) return 0;
    const double final_fitness = r.trace.back().best_fitness;
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        if (r.trace[i].best_fitness >= final_fitness) return i;
    }
    return r.trace.size() - 1;
}

/// `ablate` command: paired repaired/unrepaired runs per seed. Writes
/// ablation.csv with both convergence traces (2 x max_iterations rows per
/// seed) and ablation_summary.json with final accuracies and the mean
/// pairwise raw similarity of each variant's selected subset.
inline std::vector<std::string> cmd_ablate(const CliOptions& opt, std::ostream& log) {
    if (opt.repeats < 1) throw ValidationError("repeats must be at least 1");
    const Dataset prepared = detail::load_prepared(opt);
    const std::filesystem::path out_dir(opt.out_dir);
    std::filesystem::create_directories(out_dir);

    std::string csv = "variant,seed,iteration,best_fitness,best_validation_accuracy\n";
    nlohmann::ordered_json per_seed = nlohmann::ordered_json::array();
    std::vector<double> acc[2];
    std::vector<double> sim[2];
    std::vector<double> hits[2];

    for (int i = 0; i < opt.repeats; ++i) {
        const std::uint64_t seed = opt.ga.seed + static_cast<std::uint64_t>(i);
        const AblationPair pair = ablate_once(prepared, opt, seed);
        const RunReport* variants[2] = {&pair.with_repair, &pair.without_repair};
        const char* names[2] = {"cdgafs", "gafs"};
        nlohmann::ordered_json entry;
        entry["seed"] = seed;
        for (int v = 0; v < 2; ++v) {
            const RunReport& r = *variants[v];
            for (std::size_t it = 0; it < r.trace.size(); ++it) {
                csv += names[v];
                csv += ',' + std::to_string(seed) + ',' + std::to_string(it) + ',';
                csv += format_double(r.trace[it].best_fitness);
                csv += ',';
                csv += format_double(r.trace[it].best_validation_accuracy);
                csv += '\n';
            }
            acc[v].push_back(r.test_accuracy);
            sim[v].push_back(r.mean_selected_raw_similarity);
            hits[v].push_back(static_cast<double>(first_hit_iteration(r)));
            entry[names[v]] = {{"test_accuracy", r.test_accuracy},
                               {"selected_feature_count", r.selected_features.size()},
                               {"mean_selected_raw_similarity", r.mean_selected_raw_similarity},
                               {"first_hit_iteration", first_hit_iteration(r)}};
        }
        per_seed.push_back(std::move(entry));
    }

    nlohmann::ordered_json summary;
    summary["schema_version"] = kReportSchemaVersion;
    summary["runs"] = opt.repeats;
    const char* names[2] = {"cdgafs", "gafs"};
    for (int v = 0; v < 2; ++v) {
        summary[names[v]] = {
            {"test_accuracy_mean", mean_std(acc[v]).mean},
            {"test_accuracy_percent", format_accuracy_percent(acc[v])},
            {"mean_selected_raw_similarity", mean_std(sim[v]).mean},
            {"mean_first_hit_iteration", mean_std(hits[v]).mean},
        };
    }
    summary["per_seed"] = std::move(per_seed);

    std::vector<std::string> written;
    detail::write_file(out_dir / "ablation.csv", csv);
    written.push_back((out_dir / "ablation.csv").string());
    detail::write_file(out_dir / "ablation_summary.json", summary.dump(2) + "\n");
    written.push_back((out_dir / "ablation_summary.json").string());

    log << "cdgafs: acc " << format_accuracy_percent(acc[0]) << ", raw sim "
        << format_double(mean_std(sim[0]).mean) << "\n";
    log << "gafs:   acc " << format_accuracy_percent(acc[1]) << ", raw sim "
        << format_double(mean_std(sim[1]).mean) << "\n";
    return written;
}

/// `synth` command: writes the redundancy benchmark as synth.csv.
inline std::string cmd_synth(const CliOptions& opt, std::ostream& log) {
    SynthConfig cfg = opt.synth;
    cfg.seed = opt.ga.seed;
    const Dataset d = generate_synth_dataset(cfg);
    const std::filesystem::path out_dir(opt.out_dir);
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / "synth.csv";
    detail::write_file(path, synth_to_csv(d));
    log << "wrote " << path.string() << " (" << d.pattern_count() << " patterns, "
        << d.feature_count() << " features)\n";
    return path.string();
}

/// `info` command: dataset shape, missing cells, class balance and the size
/// of the feature-subset search space.
inline void cmd_info(const CliOptions& opt, std::ostream& out) {
    const LabelSelector selector{opt.label};
    const Dataset d = load_csv(opt.data_path, selector);
    out << "file: " << opt.data_path << "\n";
    out << "features: " << d.feature_count() << ", classes: " << d.class_count
        << ", patterns: " << d.pattern_count() << "\n";
    out << "missing: " << d.missing_count() << "\n";
    const auto sizes = d.class_sizes();
    out << "class counts:";
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        out << ' ' << d.class_names[k] << '=' << sizes[k];
    }
    out << "\n";
    out << "search space: 2^" << d.feature_count() << " = "
        << subset_count(static_cast<int>(d.feature_count())) << "\n";
}

} // namespace cdgafs
