#pragma once

#include "cdgafs/core.hpp"
#include "cdgafs/dataset.hpp"
#include "cdgafs/feature_graph.hpp"
#include "cdgafs/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cdgafs {

/// Shape of the synthetic redundancy benchmark: `groups` blocks of
/// near-duplicate class-informative features (one latent signal per block
/// plus small jitter) followed by pure-noise features, with balanced binary
/// labels.
struct SynthConfig {
    int groups = 4;
    int group_size = 5;
    int noise_features = 10;
    int patterns = 300;
    std::uint64_t seed = 0;
    // Each group's latent is label_weight * (+-1) + signal_noise * u_g with
    // an independent u_g per group. Keeping label_weight well below
    // signal_noise makes single features weakly informative and keeps
    // cross-group correlations near the noise floor, so the groups stay
    // separable in the similarity graph. The jitter keeps within-group
    // |Pearson| near 0.98, above the 0.95 construction floor.
    double label_weight = 0.25;
    double signal_noise = 1.0;
    double jitter = 0.15;

    void validate() const {
        if (groups < 1) throw ValidationError("synth: group count must be at least 1");
        if (group_size < 2) throw ValidationError("synth: group size must be at least 2");
        if (noise_features < 0) throw ValidationError("synth: noise feature count must be non-negative");
        if (patterns < 6) throw ValidationError("synth: need at least 6 patterns");
    }

    int feature_count() const { return groups * group_size + noise_features; }
};

/// Generates the benchmark dataset and verifies its construction: every
/// within-group feature pair must have |Pearson| above 0.95.
inline Dataset generate_synth_dataset(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng = derive_rng(cfg.seed, RngStream::synth);

    const auto p = static_cast<std::size_t>(cfg.patterns);
    const auto n = static_cast<std::size_t>(cfg.feature_count());
    Dataset d;
    d.features = Matrix(p, n);
    d.labels.reserve(p);
    d.class_names = {"0", "1"};
    d.class_count = 2;
    for (std::size_t c = 0; c < n; ++c) d.feature_names.push_back("f" + std::to_string(c));

    for (std::size_t r = 0; r < p; ++r) {
        const int label = static_cast<int>(r % 2);
        d.labels.push_back(label);
        std::size_t col = 0;
        for (int g = 0; g < cfg.groups; ++g) {
            const double latent =
                cfg.label_weight * (label == 1 ? 1.0 : -1.0) + cfg.signal_noise * rng.normal();
            for (int m = 0; m < cfg.group_size; ++m) {
                d.features(r, col++) = latent + cfg.jitter * rng.normal();
            }
        }
        for (int m = 0; m < cfg.noise_features; ++m) {
            d.features(r, col++) = rng.normal();
        }
    }

    // Construction check: groups must really be near-duplicates.
    for (int g = 0; g < cfg.groups; ++g) {
        const std::size_t base = static_cast<std::size_t>(g) * static_cast<std::size_t>(cfg.group_size);
        for (int i = 0; i < cfg.group_size; ++i) {
            const auto ci = d.features.column(base + static_cast<std::size_t>(i));
            for (int j = i + 1; j < cfg.group_size; ++j) {
                const auto cj = d.features.column(base + static_cast<std::size_t>(j));
                if (pearson_similarity(ci, cj) <= 0.95) {
                    throw ValidationError("synth: within-group similarity fell below 0.95; "
                                          "lower the jitter or increase the pattern count");
                }
            }
        }
    }
    return d;
}

/// CSV text of the benchmark dataset; identical bytes for identical configs.
inline std::string synth_to_csv(const Dataset& d) {
    std::string out;
    for (std::size_t c = 0; c < d.feature_count(); ++c) {
        out += d.feature_names[c];
        out += ',';
    }
    out += "label\n";
    for (std::size_t r = 0; r < d.pattern_count(); ++r) {
        for (std::size_t c = 0; c < d.feature_count(); ++c) {
            out += format_double(d.features(r, c));
            out += ',';
        }
        out += d.class_names[static_cast<std::size_t>(d.labels[r])];
        out += '\n';
    }
    return out;
}

} // namespace cdgafs
