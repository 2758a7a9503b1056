#pragma once

#include "cdgafs/core.hpp"
#include "cdgafs/feature_graph.hpp"
#include "cdgafs/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace cdgafs {

/// Assignment of every graph node to exactly one community, ids dense in
/// [0, k), together with the partition's modularity.
struct Partition {
    std::vector<int> assignment;
    int k = 0;
    double modularity = 0.0;
};

/// Newman modularity of a weighted partition. The sum runs over all ordered
/// node pairs with the diagonal contributing no edge weight (self-similarity
/// is not an edge) but keeping its degree-product term, so the singleton
/// partition scores -sum_i s_i^2/(2m)^2 and the one-community partition 0.
inline double modularity(const FeatureGraph& g, const std::vector<int>& assignment) {
    const std::size_t n = g.size();
    if (n == 0) throw ValidationError("modularity of an empty graph");
    if (assignment.size() != n) {
        throw ValidationError("partition assignment does not cover the graph");
    }
    int k = 0;
    for (int c : assignment) {
        if (c < 0) throw ValidationError("negative community id");
        k = std::max(k, c + 1);
    }

    std::vector<double> strength(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            strength[i] += g.weights(i, j);
        }
        total += strength[i];
    }
    if (total <= 0.0) return 0.0;

    std::vector<double> in_weight(static_cast<std::size_t>(k), 0.0);
    std::vector<double> tot_strength(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        tot_strength[static_cast<std::size_t>(assignment[i])] += strength[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && assignment[i] == assignment[j]) {
                in_weight[static_cast<std::size_t>(assignment[i])] += g.weights(i, j);
            }
        }
    }
    double q = 0.0;
    for (int c = 0; c < k; ++c) {
        const double tot = tot_strength[static_cast<std::size_t>(c)] / total;
        q += in_weight[static_cast<std::size_t>(c)] / total - tot * tot;
    }
    return q;
}

inline double modularity(const FeatureGraph& g, const Partition& part) {
    return modularity(g, part.assignment);
}

namespace detail {

/// Working graph for the Louvain levels. Unlike FeatureGraph, the diagonal
/// carries aggregated self-loop mass (ordered-pair convention), so that
/// modularity is preserved exactly across aggregation.
struct WorkGraph {
    Matrix w;
    std::vector<double> strength; // row sums including the diagonal
    double total = 0.0;           // sum of all entries (the "2m" of the level)

    static WorkGraph from_feature_graph(const FeatureGraph& g) {
        WorkGraph wg;
        const std::size_t n = g.size();
        wg.w = Matrix(n, n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) wg.w(i, j) = g.weights(i, j);
            }
        }
        wg.refresh();
        return wg;
    }

    void refresh() {
        const std::size_t n = w.rows();
        strength.assign(n, 0.0);
        total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) strength[i] += w(i, j);
            total += strength[i];
        }
    }

    std::size_t size() const { return w.rows(); }
};

inline double work_modularity(const WorkGraph& g, const std::vector<int>& comm) {
    const std::size_t n = g.size();
    if (g.total <= 0.0) return 0.0;
    int k = 0;
    for (int c : comm) k = std::max(k, c + 1);
    std::vector<double> in_weight(static_cast<std::size_t>(k), 0.0);
    std::vector<double> tot_strength(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        tot_strength[static_cast<std::size_t>(comm[i])] += g.strength[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (comm[i] == comm[j]) {
                in_weight[static_cast<std::size_t>(comm[i])] += g.w(i, j);
            }
        }
    }
    double q = 0.0;
    for (int c = 0; c < k; ++c) {
        const double tot = tot_strength[static_cast<std::size_t>(c)] / g.total;
        q += in_weight[static_cast<std::size_t>(c)] / g.total - tot * tot;
    }
    return q;
}

constexpr double kMinGain = 1e-12;

/// One local-moving phase: sweeps over the nodes in seeded random order,
/// moving each to the community with the largest strictly positive
/// modularity gain (ties keep the current community), until a full sweep
/// makes no move. Appends the modularity after every sweep to `q_trace`.
/// Returns true if any node moved.
inline bool local_moving(const WorkGraph& g, std::vector<int>& comm, Rng& rng,
                         std::vector<double>* q_trace) {
    const std::size_t n = g.size();
    if (n < 2 || g.total <= 0.0) return false;
    const double total = g.total;

    std::vector<double> tot_strength(n, 0.0);
    std::vector<std::size_t> members(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        tot_strength[static_cast<std::size_t>(comm[i])] += g.strength[i];
        ++members[static_cast<std::size_t>(comm[i])];
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> link(n, 0.0);

    bool any_move = false;
    for (;;) {
        std::size_t moves = 0;
        rng.shuffle(order);
        for (const std::size_t u : order) {
            const int cur = comm[u];
            for (std::size_t c = 0; c < n; ++c) link[c] = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != u) link[static_cast<std::size_t>(comm[j])] += g.w(u, j);
            }
            const double su = g.strength[u];
            tot_strength[static_cast<std::size_t>(cur)] -= su;

            // Comparative gain of placing u into community c; terms that do
            // not depend on c are dropped.
            const auto gain_of = [&](std::size_t c) {
                return 2.0 * link[c] / total -
                       2.0 * su * tot_strength[c] / (total * total);
            };
            int best = cur;
            double best_gain = gain_of(static_cast<std::size_t>(cur));
            for (std::size_t c = 0; c < n; ++c) {
                if (static_cast<int>(c) == cur || (members[c] == 0)) continue;
                const double gain = gain_of(c);
                if (gain > best_gain + kMinGain) {
                    best = static_cast<int>(c);
                    best_gain = gain;
                }
            }
            if (best != cur) {
                --members[static_cast<std::size_t>(cur)];
                ++members[static_cast<std::size_t>(best)];
                tot_strength[static_cast<std::size_t>(best)] += su;
                comm[u] = best;
                ++moves;
            } else {
                tot_strength[static_cast<std::size_t>(cur)] += su;
            }
        }
        if (q_trace) q_trace->push_back(work_modularity(g, comm));
        if (moves == 0) break;
        any_move = true;
    }
    return any_move;
}

/// Renumbers community ids densely in order of first appearance.
inline int compress_labels(std::vector<int>& comm) {
    std::vector<int> remap(comm.size(), -1);
    int next = 0;
    for (int& c : comm) {
        if (remap[static_cast<std::size_t>(c)] < 0) remap[static_cast<std::size_t>(c)] = next++;
        c = remap[static_cast<std::size_t>(c)];
    }
    return next;
}

/// Collapses communities into super-nodes, summing edge weights; internal
/// weight (including former self-loops) lands on the diagonal.
inline WorkGraph aggregate(const WorkGraph& g, const std::vector<int>& comm, int k) {
    WorkGraph out;
    out.w = Matrix(static_cast<std::size_t>(k), static_cast<std::size_t>(k), 0.0);
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out.w(static_cast<std::size_t>(comm[i]), static_cast<std::size_t>(comm[j])) += g.w(i, j);
        }
    }
    out.refresh();
    return out;
}

} // namespace detail

/// Louvain community detection on the normalized feature graph: local moving
/// until no single-node relocation helps, aggregation into super-nodes, and
/// repetition until an aggregation level yields no further gain. Node visit
/// order is shuffled by a generator derived from `seed`; the result is fully
/// deterministic given the seed. `q_trace`, when supplied, receives the
/// modularity after every local-moving sweep (non-decreasing).
inline Partition detect_communities(const FeatureGraph& g, std::uint64_t seed,
                                    std::vector<double>* q_trace = nullptr) {
    const std::size_t n = g.size();
    if (n == 0) throw ValidationError("detect_communities on an empty graph");

    Rng rng = derive_rng(seed, RngStream::community);
    detail::WorkGraph wg = detail::WorkGraph::from_feature_graph(g);

    std::vector<int> node_to_super(n);
    std::iota(node_to_super.begin(), node_to_super.end(), 0);

    std::vector<int> level_comm(n);
    std::iota(level_comm.begin(), level_comm.end(), 0);
    if (q_trace) q_trace->push_back(detail::work_modularity(wg, level_comm));

    for (;;) {
        const bool moved = detail::local_moving(wg, level_comm, rng, q_trace);
        if (!moved) break;
        const int k = detail::compress_labels(level_comm);
        for (auto& s : node_to_super) s = level_comm[static_cast<std::size_t>(s)];
        wg = detail::aggregate(wg, level_comm, k);
        level_comm.assign(static_cast<std::size_t>(k), 0);
        std::iota(level_comm.begin(), level_comm.end(), 0);
    }

    Partition part;
    part.assignment = node_to_super;
    part.k = detail::compress_labels(part.assignment);
    part.modularity = modularity(g, part.assignment);
    return part;
}

/// Member lists per community, each in ascending node order.
inline std::vector<std::vector<int>> community_members(const Partition& part) {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(part.k));
    for (std::size_t i = 0; i < part.assignment.size(); ++i) {
        out[static_cast<std::size_t>(part.assignment[i])].push_back(static_cast<int>(i));
    }
    return out;
}

} // namespace cdgafs
