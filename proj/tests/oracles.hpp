// Independent reference implementations used by the tests. Each one
// evaluates its formula or definition directly, without sharing code with
// the library path it checks.

#pragma once

#include "cdgafs/dataset.hpp"
#include "cdgafs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace oracle {

// Fisher criterion, computed term by term from the definition:
// sum_k n_k (mean_ik - mean_i)^2 / sum_k n_k var_ik with population
// per-class variance. Degenerate rule mirrors the contract: 0/0 -> 0,
// x/0 -> 10 * max finite score (10.0 when there is none).
inline std::vector<double> fisher_scores(const cdgafs::Dataset& d) {
    const std::size_t p = d.pattern_count();
    const std::size_t n = d.feature_count();
    const std::size_t C = static_cast<std::size_t>(d.class_count);

    std::vector<double> numerators(n, 0.0);
    std::vector<double> denominators(n, 0.0);
    for (std::size_t f = 0; f < n; ++f) {
        double mean_all = 0.0;
        for (std::size_t r = 0; r < p; ++r) mean_all += d.features(r, f);
        mean_all /= static_cast<double>(p);
        for (std::size_t k = 0; k < C; ++k) {
            std::vector<double> values;
            for (std::size_t r = 0; r < p; ++r) {
                if (d.labels[r] == static_cast<int>(k)) values.push_back(d.features(r, f));
            }
            const double nk = static_cast<double>(values.size());
            double mean_k = 0.0;
            for (double v : values) mean_k += v;
            mean_k /= nk;
            double var_k = 0.0;
            for (double v : values) var_k += (v - mean_k) * (v - mean_k);
            var_k /= nk;
            numerators[f] += nk * (mean_k - mean_all) * (mean_k - mean_all);
            denominators[f] += nk * var_k;
        }
    }

    std::vector<double> scores(n, 0.0);
    double max_finite = 0.0;
    for (std::size_t f = 0; f < n; ++f) {
        if (denominators[f] > 0.0) {
            scores[f] = numerators[f] / denominators[f];
            max_finite = std::max(max_finite, scores[f]);
        }
    }
    const double cap = max_finite > 0.0 ? 10.0 * max_finite : 10.0;
    for (std::size_t f = 0; f < n; ++f) {
        if (denominators[f] == 0.0) scores[f] = numerators[f] > 0.0 ? cap : 0.0;
    }
    return scores;
}

// Softmax scaling straight from the formula, with its own mean/std code.
inline std::vector<double> softmax(const std::vector<double>& values) {
    const std::size_t n = values.size();
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double sigma = std::sqrt(var / static_cast<double>(n));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = sigma == 0.0 ? 0.5 : 1.0 / (1.0 + std::exp(-(values[i] - mean) / sigma));
    }
    return out;
}

// |Pearson| per the definition.
inline double pearson_abs(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t p = x.size();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(p);
    my /= static_cast<double>(p);
    double num = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        num += (x[i] - mx) * (y[i] - my);
        dx += (x[i] - mx) * (x[i] - mx);
        dy += (y[i] - my) * (y[i] - my);
    }
    if (dx == 0.0 || dy == 0.0) return 0.0;
    return std::abs(num / (std::sqrt(dx) * std::sqrt(dy)));
}

// KNN by sorting every training distance, ties resolved exactly like the
// documented rules: lower training index first, then smaller class id.
inline int knn_predict(const cdgafs::Dataset& train, const std::vector<int>& selected,
                       const std::vector<double>& query, int k_nn) {
    struct Entry {
        double d2;
        std::size_t idx;
    };
    std::vector<Entry> all;
    for (std::size_t r = 0; r < train.pattern_count(); ++r) {
        double d2 = 0.0;
        for (int c : selected) {
            const double diff =
                train.features(r, static_cast<std::size_t>(c)) - query[static_cast<std::size_t>(c)];
            d2 += diff * diff;
        }
        all.push_back({d2, r});
    }
    std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
        if (a.d2 != b.d2) return a.d2 < b.d2;
        return a.idx < b.idx;
    });
    std::vector<int> votes(static_cast<std::size_t>(train.class_count), 0);
    for (int i = 0; i < k_nn; ++i) {
        ++votes[static_cast<std::size_t>(train.labels[all[static_cast<std::size_t>(i)].idx])];
    }
    int best = 0;
    for (int c = 1; c < train.class_count; ++c) {
        if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) best = c;
    }
    return best;
}

inline double knn_accuracy(const cdgafs::Dataset& train, const cdgafs::Dataset& eval,
                           const std::vector<int>& selected, int k_nn) {
    std::size_t correct = 0;
    for (std::size_t r = 0; r < eval.pattern_count(); ++r) {
        std::vector<double> query(eval.feature_count());
        for (std::size_t c = 0; c < eval.feature_count(); ++c) query[c] = eval.features(r, c);
        if (knn_predict(train, selected, query, k_nn) == eval.labels[r]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(eval.pattern_count());
}

// Newman modularity as the literal double sum over ordered node pairs:
// the diagonal contributes no edge weight but keeps its degree term.
inline double modularity(const std::vector<std::vector<double>>& w, const std::vector<int>& comm) {
    const std::size_t n = w.size();
    std::vector<double> strength(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) strength[i] += w[i][j];
        }
        total += strength[i];
    }
    if (total <= 0.0) return 0.0;
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (comm[i] != comm[j]) continue;
            const double edge = i == j ? 0.0 : w[i][j];
            q += edge / total - strength[i] * strength[j] / (total * total);
        }
    }
    return q;
}

// Mean pairwise weight over unordered selected pairs, per the fitness
// definition, with the same degenerate rules (s < 2 or tiny mean -> 1e-6).
inline double fitness(double accuracy, const std::vector<std::vector<double>>& weights,
                      const std::vector<int>& selected) {
    const std::size_t s = selected.size();
    double avg = 1e-6;
    if (s >= 2) {
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < s; ++i) {
            for (std::size_t j = i + 1; j < s; ++j) {
                sum += weights[static_cast<std::size_t>(selected[i])]
                              [static_cast<std::size_t>(selected[j])];
            }
        }
        avg = sum * 2.0 / (static_cast<double>(s) * static_cast<double>(s - 1));
        if (avg < 1e-6) avg = 1e-6;
    }
    return accuracy / avg;
}

// 2^n as a decimal string by repeated doubling.
inline std::string pow2_string(int n) {
    std::vector<int> digits{1}; // least significant first
    for (int step = 0; step < n; ++step) {
        int carry = 0;
        for (auto& d : digits) {
            const int v = d * 2 + carry;
            d = v % 10;
            carry = v / 10;
        }
        if (carry > 0) digits.push_back(carry);
    }
    std::string out;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) out += static_cast<char>('0' + *it);
    return out;
}

// Enumerates every set partition of n elements as restricted-growth labels.
inline void for_each_partition(std::size_t n, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> labels(n, 0);
    const std::function<void(std::size_t, int)> rec = [&](std::size_t i, int max_used) {
        if (i == n) {
            f(labels);
            return;
        }
        for (int c = 0; c <= max_used + 1; ++c) {
            labels[i] = c;
            rec(i + 1, std::max(max_used, c));
        }
    };
    rec(0, -1);
}

// Random fixture: a small dense dataset with every class represented at
// least `min_per_class` times.
inline cdgafs::Dataset random_dataset(cdgafs::Rng& rng, std::size_t n, std::size_t p, int classes,
                                      std::size_t min_per_class = 2) {
    cdgafs::Dataset d;
    d.features = cdgafs::Matrix(p, n);
    for (std::size_t r = 0; r < p; ++r) {
        for (std::size_t c = 0; c < n; ++c) d.features(r, c) = rng.real() * 10.0 - 5.0;
    }
    if (p < static_cast<std::size_t>(classes) * min_per_class) {
        throw std::invalid_argument("random_dataset: too few patterns for the class floor");
    }
    d.labels.resize(p);
    std::size_t filled = 0;
    for (int k = 0; k < classes; ++k) {
        for (std::size_t m = 0; m < min_per_class; ++m) d.labels[filled++] = k;
    }
    while (filled < p) {
        d.labels[filled++] = static_cast<int>(rng.below(static_cast<std::uint64_t>(classes)));
    }
    rng.shuffle(d.labels);
    d.class_count = classes;
    for (int k = 0; k < classes; ++k) d.class_names.push_back(std::to_string(k));
    for (std::size_t c = 0; c < n; ++c) d.feature_names.push_back("f" + std::to_string(c));
    return d;
}

} // namespace oracle
