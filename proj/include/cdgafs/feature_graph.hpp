#pragma once

#include "cdgafs/core.hpp"
#include "cdgafs/dataset.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace cdgafs {

/// Complete undirected feature-similarity graph over the retained features.
/// raw_weights holds |Pearson| values with a unit diagonal; weights holds the
/// softmax-normalized off-diagonal entries (statistics taken over the
/// off-diagonal only, diagonal kept at the raw self-similarity of 1 and
/// excluded from every downstream sum).
struct FeatureGraph {
    std::vector<int> node_ids; // original feature indices
    Matrix weights;            // normalized, symmetric
    Matrix raw_weights;        // |Pearson|, symmetric, diagonal 1

    std::size_t size() const { return node_ids.size(); }

    /// Mean normalized weight over unordered pairs of `selected` nodes.
    double mean_pairwise_weight(const std::vector<int>& selected) const {
        return mean_pairwise(weights, selected);
    }

    /// Mean |Pearson| over unordered pairs of `selected` nodes.
    double mean_pairwise_raw(const std::vector<int>& selected) const {
        return mean_pairwise(raw_weights, selected);
    }

private:
    static double mean_pairwise(const Matrix& w, const std::vector<int>& selected) {
        const std::size_t s = selected.size();
        if (s < 2) return 0.0;
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < s; ++i) {
            for (std::size_t j = i + 1; j < s; ++j) {
                sum += w(static_cast<std::size_t>(selected[i]), static_cast<std::size_t>(selected[j]));
            }
        }
        return sum / (static_cast<double>(s) * static_cast<double>(s - 1) / 2.0);
    }
};

/// Absolute sample Pearson correlation of two equally long vectors, in
/// [0, 1]. A zero-variance input yields 0 (no redundancy signal).
inline double pearson_similarity(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ValidationError("pearson_similarity: vectors differ in length");
    }
    const std::size_t p = x.size();
    if (p == 0) return 0.0;
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    // sqrt(sxx * syy) keeps self-similarity at exactly 1: sqrt(s*s) == s.
    const double r = std::abs(sxy / std::sqrt(sxx * syy));
    return r > 1.0 ? 1.0 : r;
}

/// Builds the complete similarity graph over the `kept` feature columns of
/// the training set, then softmax-normalizes the off-diagonal weights.
inline FeatureGraph build_graph(const Dataset& train, const std::vector<int>& kept) {
    if (kept.size() < 2) {
        throw ValidationError("build_graph needs at least two features");
    }
    const std::size_t n = kept.size();
    FeatureGraph g;
    g.node_ids = kept;
    g.raw_weights = Matrix(n, n, 0.0);
    g.weights = Matrix(n, n, 0.0);

    std::vector<std::vector<double>> columns(n);
    for (std::size_t i = 0; i < n; ++i) {
        columns[i] = train.features.column(static_cast<std::size_t>(kept[i]));
    }

    std::vector<double> offdiag;
    offdiag.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        g.raw_weights(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double w = pearson_similarity(columns[i], columns[j]);
            g.raw_weights(i, j) = w;
            g.raw_weights(j, i) = w;
            offdiag.push_back(w);
        }
    }

    const std::vector<double> scaled = softmax_scaled(offdiag);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        g.weights(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            g.weights(i, j) = scaled[idx];
            g.weights(j, i) = scaled[idx];
            ++idx;
        }
    }
    return g;
}

} // namespace cdgafs
