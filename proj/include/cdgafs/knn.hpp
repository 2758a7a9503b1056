#pragma once

#include "cdgafs/core.hpp"
#include "cdgafs/dataset.hpp"

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

namespace cdgafs {

/// A dataset viewed through a feature subset: distances and predictions use
/// only the `selected` columns. Indices must be unique, sorted and non-empty.
struct SubsetView {
    const Dataset* source = nullptr;
    std::vector<int> selected;

    SubsetView(const Dataset& d, std::vector<int> columns)
        : source(&d), selected(std::move(columns)) {
        if (selected.empty()) throw ValidationError("feature subset must be non-empty");
        if (!std::is_sorted(selected.begin(), selected.end()) ||
            std::adjacent_find(selected.begin(), selected.end()) != selected.end()) {
            throw ValidationError("feature subset indices must be sorted and unique");
        }
        if (selected.front() < 0 ||
            static_cast<std::size_t>(selected.back()) >= d.feature_count()) {
            throw ValidationError("feature subset index out of range");
        }
    }

    std::size_t pattern_count() const { return source->pattern_count(); }
};

namespace detail {

inline double subset_squared_distance(std::span<const double> a, std::span<const double> b,
                                      const std::vector<int>& selected) {
    double d2 = 0.0;
    for (int c : selected) {
        const double d = a[static_cast<std::size_t>(c)] - b[static_cast<std::size_t>(c)];
        d2 += d * d;
    }
    return d2;
}

} // namespace detail

/// Majority vote among the k nearest training patterns by Euclidean distance
/// over the selected features. Distance ties prefer the lower training
/// index, vote ties the smaller class id, so predictions are deterministic.
/// `query` is a full feature row in the same column space as the training
/// source.
inline int knn_predict(const SubsetView& train, std::span<const double> query, int k_nn) {
    const std::size_t p = train.pattern_count();
    if (k_nn < 1) throw ValidationError("k_nn must be at least 1");
    if (p == 0) throw ValidationError("knn_predict with an empty training set");
    if (static_cast<std::size_t>(k_nn) > p) {
        throw ValidationError("k_nn exceeds the number of training patterns");
    }

    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(p);
    for (std::size_t r = 0; r < p; ++r) {
        dist.emplace_back(
            detail::subset_squared_distance(train.source->features.row(r), query, train.selected), r);
    }
    const auto k = static_cast<std::size_t>(k_nn);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    std::vector<int> votes(static_cast<std::size_t>(train.source->class_count), 0);
    for (std::size_t i = 0; i < k; ++i) {
        ++votes[static_cast<std::size_t>(train.source->labels[dist[i].second])];
    }
    int best = 0;
    for (int c = 1; c < train.source->class_count; ++c) {
        if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) best = c;
    }
    return best;
}

/// Fraction of evaluation patterns whose KNN prediction matches their label.
/// Train and eval must share the selected index list.
inline double classification_accuracy(const SubsetView& train, const SubsetView& eval, int k_nn) {
    if (train.selected != eval.selected) {
        throw ValidationError("train and eval views must share the selected features");
    }
    const std::size_t p = eval.pattern_count();
    if (p == 0) throw ValidationError("classification_accuracy with an empty evaluation set");
    std::size_t correct = 0;
    for (std::size_t r = 0; r < p; ++r) {
        if (knn_predict(train, eval.source->features.row(r), k_nn) == eval.source->labels[r]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(p);
}

} // namespace cdgafs
