#pragma once

#include "cdgafs/core.hpp"
#include "cdgafs/dataset.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace cdgafs {

/// Fisher relevance scores of all features plus the retained top-m index set.
struct RelevanceScores {
    std::vector<double> raw;        // >= 0, one per feature
    std::vector<double> normalized; // in (0,1), rank-preserving
    std::vector<int> kept_indices;  // descending raw score, ties by ascending index
};

/// Fisher criterion per feature over the training set:
/// sum_k n_k (mean_ik - mean_i)^2 / sum_k n_k var_ik, with per-class
/// population variance. A feature whose within-class variance vanishes while
/// its class means differ separates perfectly; it receives ten times the
/// largest finite score so it dominates the ranking without producing an
/// infinity downstream.
inline std::vector<double> fisher_scores(const Dataset& train) {
    const std::size_t p = train.pattern_count();
    const std::size_t n = train.feature_count();
    const std::size_t classes = static_cast<std::size_t>(train.class_count);
    const auto class_sizes = train.class_sizes();

    std::vector<double> scores(n, 0.0);
    std::vector<bool> capped(n, false);

    for (std::size_t f = 0; f < n; ++f) {
        double global_mean = 0.0;
        for (std::size_t r = 0; r < p; ++r) global_mean += train.features(r, f);
        global_mean /= static_cast<double>(p);

        std::vector<double> class_mean(classes, 0.0);
        for (std::size_t r = 0; r < p; ++r) {
            class_mean[static_cast<std::size_t>(train.labels[r])] += train.features(r, f);
        }
        for (std::size_t k = 0; k < classes; ++k) {
            class_mean[k] /= static_cast<double>(class_sizes[k]);
        }

        std::vector<double> class_sq(classes, 0.0);
        for (std::size_t r = 0; r < p; ++r) {
            const auto k = static_cast<std::size_t>(train.labels[r]);
            const double d = train.features(r, f) - class_mean[k];
            class_sq[k] += d * d;
        }

        double numerator = 0.0;
        double denominator = 0.0;
        for (std::size_t k = 0; k < classes; ++k) {
            const double nk = static_cast<double>(class_sizes[k]);
            const double dm = class_mean[k] - global_mean;
            numerator += nk * dm * dm;
            denominator += class_sq[k]; // nk * population variance = sum of squares
        }

        if (denominator > 0.0) {
            scores[f] = numerator / denominator;
        } else if (numerator > 0.0) {
            capped[f] = true; // perfectly separating feature
        } else {
            scores[f] = 0.0;
        }
    }

    double max_finite = 0.0;
    for (std::size_t f = 0; f < n; ++f) {
        if (!capped[f]) max_finite = std::max(max_finite, scores[f]);
    }
    const double cap = max_finite > 0.0 ? max_finite * 10.0 : 10.0;
    for (std::size_t f = 0; f < n; ++f) {
        if (capped[f]) scores[f] = cap;
    }
    return scores;
}

/// Softmax scaling of the raw scores into (0,1); strictly rank-preserving
/// whenever the scores are not all equal.
inline std::vector<double> normalize_scores(const std::vector<double>& raw) {
    return softmax_scaled(raw);
}

namespace detail {

inline std::vector<int> top_indices_by_score(const std::vector<double>& raw, int m) {
    if (m < 2) throw ValidationError("filter cap must be at least 2");
    std::vector<int> order(raw.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (raw[static_cast<std::size_t>(a)] != raw[static_cast<std::size_t>(b)]) {
            return raw[static_cast<std::size_t>(a)] > raw[static_cast<std::size_t>(b)];
        }
        return a < b;
    });
    const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(m), raw.size());
    order.resize(keep);
    return order;
}

} // namespace detail

/// Keeps the min(m, n) highest-scoring features; ties broken by ascending
/// feature index. With n <= m the filter is a no-op and all indices return.
inline std::vector<int> filter_irrelevant(const RelevanceScores& scores, int m) {
    return detail::top_indices_by_score(scores.raw, m);
}

/// Fisher scoring, normalization and top-m filtering in one pass.
inline RelevanceScores relevance_analysis(const Dataset& train, int m) {
    RelevanceScores out;
    out.raw = fisher_scores(train);
    out.normalized = normalize_scores(out.raw);
    out.kept_indices = detail::top_indices_by_score(out.raw, m);
    return out;
}

/// Number of feature subsets over n features, 2^n, exactly.
inline std::string subset_count(int n) {
    if (n < 0) throw ValidationError("feature count must be non-negative");
    boost::multiprecision::cpp_int v = 1;
    v <<= n;
    return v.str();
}

} // namespace cdgafs
