#pragma once

#include "cdgafs/core.hpp"
#include "cdgafs/ga.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace cdgafs {

inline constexpr int kReportSchemaVersion = 1;

/// JSON form of a run report. Wall-clock timings are deliberately not part
/// of this document so that identical runs produce identical bytes; they go
/// to the separate timings document below.
inline nlohmann::ordered_json report_to_json(const RunReport& r) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["config"] = {
        {"crossover_rate", r.config.crossover_rate},
        {"mutation_rate", r.config.mutation_rate},
        {"population_size", r.config.population_size},
        {"max_iterations", r.config.max_iterations},
        {"omega", r.config.omega},
        {"k_nn", r.config.k_nn},
        {"filter_cap", r.config.filter_cap},
        {"seed", r.config.seed},
        {"repair_enabled", r.config.repair_enabled},
    };
    j["split_seed"] = r.split_seed;
    j["kept_feature_count"] = r.kept_feature_count;
    j["community_count"] = r.community_count;
    j["selected_features"] = r.selected_features;
    j["selected_feature_count"] = r.selected_features.size();
    j["best_fitness"] = r.best_fitness;
    j["validation_accuracy"] = r.validation_accuracy;
    j["test_accuracy"] = r.test_accuracy;
    j["mean_selected_raw_similarity"] = r.mean_selected_raw_similarity;
    nlohmann::ordered_json trace = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        trace.push_back({
            {"iteration", i},
            {"best_fitness", r.trace[i].best_fitness},
            {"best_validation_accuracy", r.trace[i].best_validation_accuracy},
        });
    }
    j["trace"] = std::move(trace);
    return j;
}

inline nlohmann::ordered_json timings_to_json(const RunReport& r) {
    nlohmann::ordered_json j;
    for (const auto& [phase, seconds] : r.timings) j[phase] = seconds;
    return j;
}

inline std::string trace_to_csv(const RunReport& r) {
    std::string out = "iteration,best_fitness,best_validation_accuracy\n";
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_double(r.trace[i].best_fitness);
        out += ',';
        out += format_double(r.trace[i].best_validation_accuracy);
        out += '\n';
    }
    return out;
}

/// Mean and sample standard deviation of a value set (std 0 for fewer than
/// two values).
struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

inline MeanStd mean_std(const std::vector<double>& values) {
    MeanStd out;
    if (values.empty()) return out;
    for (double v : values) out.mean += v;
    out.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            const double d = v - out.mean;
            ss += d * d;
        }
        out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return out;
}

/// "88.73 (3.76)" — the mean/std presentation convention for accuracy
/// percentages.
inline std::string format_mean_std(const MeanStd& ms) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f (%.2f)", ms.mean, ms.std);
    return buf;
}

inline std::string format_accuracy_percent(const std::vector<double>& accuracies) {
    std::vector<double> percent;
    percent.reserve(accuracies.size());
    for (double a : accuracies) percent.push_back(a * 100.0);
    return format_mean_std(mean_std(percent));
}

} // namespace cdgafs
