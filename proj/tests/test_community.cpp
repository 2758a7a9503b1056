#include "cdgafs/community.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace cdgafs;

namespace {

FeatureGraph graph_from(const std::vector<std::vector<double>>& w) {
    FeatureGraph g;
    const std::size_t n = w.size();
    g.weights = Matrix(n, n, 0.0);
    g.raw_weights = Matrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        g.node_ids.push_back(static_cast<int>(i));
        for (std::size_t j = 0; j < n; ++j) {
            g.weights(i, j) = i == j ? 1.0 : w[i][j];
            g.raw_weights(i, j) = i == j ? 1.0 : w[i][j];
        }
    }
    return g;
}

std::vector<std::vector<double>> weights_of(const FeatureGraph& g) {
    std::vector<std::vector<double>> w(g.size(), std::vector<double>(g.size(), 0.0));
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (i != j) w[i][j] = g.weights(i, j);
        }
    }
    return w;
}

// Two cliques of the given size with unit edges, joined by one unit edge
// between the last node of the first and the first node of the second.
std::vector<std::vector<double>> two_cliques(std::size_t size) {
    const std::size_t n = 2 * size;
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            if (i != j) {
                w[i][j] = 1.0;
                w[size + i][size + j] = 1.0;
            }
        }
    }
    w[size - 1][size] = 1.0;
    w[size][size - 1] = 1.0;
    return w;
}

FeatureGraph random_graph(Rng& rng, std::size_t n) {
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            w[i][j] = w[j][i] = 0.05 + 0.9 * rng.real();
        }
    }
    return graph_from(w);
}

} // namespace

TEST_CASE("modularity of the trivial partitions", "[community]") {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 3 + rng.index(8);
        const FeatureGraph g = random_graph(rng, n);

        const std::vector<int> one(n, 0);
        CHECK_THAT(modularity(g, one), Catch::Matchers::WithinAbs(0.0, 1e-12));

        std::vector<int> singletons(n);
        std::iota(singletons.begin(), singletons.end(), 0);
        const double q = modularity(g, singletons);
        CHECK(q <= 1e-12);

        // matches -sum_i s_i^2 / (2m)^2 directly
        std::vector<double> strength(n, 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) strength[i] += g.weights(i, j);
            }
            total += strength[i];
        }
        double expected = 0.0;
        for (double s : strength) expected -= (s / total) * (s / total);
        CHECK_THAT(q, Catch::Matchers::WithinAbs(expected, 1e-12));
    }
}

TEST_CASE("modularity of the bridge split of two 4-cliques", "[community]") {
    const FeatureGraph g = graph_from(two_cliques(4));
    const std::vector<int> split_at_bridge = {0, 0, 0, 0, 1, 1, 1, 1};
    const double q = modularity(g, split_at_bridge);
    // 13 unit edges, 6 within each clique: Q = 2 * (12/26 - (13/26)^2) = 11/26
    CHECK_THAT(q, Catch::Matchers::WithinAbs(11.0 / 26.0, 1e-12));
    CHECK_THAT(q, Catch::Matchers::WithinAbs(oracle::modularity(weights_of(g), split_at_bridge), 1e-9));
}

TEST_CASE("modularity validates its inputs", "[community]") {
    FeatureGraph empty;
    CHECK_THROWS_AS(modularity(empty, std::vector<int>{}), ValidationError);
    const FeatureGraph g = graph_from(two_cliques(2));
    CHECK_THROWS_AS(modularity(g, std::vector<int>{0, 0}), ValidationError);
    CHECK_THROWS_AS(modularity(g, std::vector<int>{0, 0, 0, -1}), ValidationError);
}

TEST_CASE("modularity agrees with the pairwise oracle on random partitions", "[community]") {
    Rng rng(42);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 4 + rng.index(7);
        const FeatureGraph g = random_graph(rng, n);
        std::vector<int> assignment(n);
        for (auto& c : assignment) c = static_cast<int>(rng.below(3));
        // densify ids
        std::vector<int> remap(3, -1);
        int next = 0;
        for (auto& c : assignment) {
            if (remap[static_cast<std::size_t>(c)] < 0) remap[static_cast<std::size_t>(c)] = next++;
            c = remap[static_cast<std::size_t>(c)];
        }
        CHECK_THAT(modularity(g, assignment),
                   Catch::Matchers::WithinAbs(oracle::modularity(weights_of(g), assignment), 1e-9));
    }
}

TEST_CASE("detect_communities recovers two planted cliques", "[community]") {
    const FeatureGraph g = graph_from(two_cliques(5));
    std::vector<double> q_trace;
    const Partition part = detect_communities(g, 7, &q_trace);

    CHECK(part.k == 2);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(part.assignment[i] == part.assignment[0]);
        CHECK(part.assignment[5 + i] == part.assignment[5]);
    }
    CHECK(part.assignment[0] != part.assignment[5]);

    SECTION("q trace is monotone non-decreasing") {
        for (std::size_t i = 1; i < q_trace.size(); ++i) {
            CHECK(q_trace[i] >= q_trace[i - 1] - 1e-12);
        }
    }
    SECTION("recorded modularity is the recomputed modularity") {
        CHECK_THAT(part.modularity, Catch::Matchers::WithinAbs(modularity(g, part.assignment), 1e-9));
    }
}

TEST_CASE("uniform graphs collapse into a single community", "[community]") {
    std::vector<std::vector<double>> w(6, std::vector<double>(6, 0.5));
    for (std::size_t i = 0; i < 6; ++i) w[i][i] = 0.0;
    const FeatureGraph g = graph_from(w);
    const Partition part = detect_communities(g, 3);
    CHECK(part.k == 1);
    CHECK_THAT(part.modularity, Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("detect_communities is deterministic and returns dense ids", "[community]") {
    Rng rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const FeatureGraph g = random_graph(rng, 4 + rng.index(10));
        const std::uint64_t seed = rng.u64();
        const Partition a = detect_communities(g, seed);
        const Partition b = detect_communities(g, seed);
        CHECK(a.assignment == b.assignment);
        CHECK(a.k == b.k);
        CHECK(a.modularity == b.modularity);

        std::set<int> used(a.assignment.begin(), a.assignment.end());
        CHECK(static_cast<int>(used.size()) == a.k);
        CHECK(*used.begin() == 0);
        CHECK(*used.rbegin() == a.k - 1);
    }
}

TEST_CASE("detected partition dominates the trivial partitions", "[community]") {
    Rng rng(44);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 4 + rng.index(8);
        const FeatureGraph g = random_graph(rng, n);
        const Partition part = detect_communities(g, rng.u64());

        std::vector<int> singletons(n);
        std::iota(singletons.begin(), singletons.end(), 0);
        CHECK(part.modularity >= modularity(g, singletons) - 1e-12);
        CHECK(part.modularity >= modularity(g, std::vector<int>(n, 0)) - 1e-12);
    }
}

TEST_CASE("the detected partition is a local-moving fixed point", "[community]") {
    Rng rng(45);
    const FeatureGraph g = random_graph(rng, 9);
    const Partition part = detect_communities(g, 99);

    detail::WorkGraph wg = detail::WorkGraph::from_feature_graph(g);
    detail::WorkGraph aggregated = detail::aggregate(wg, part.assignment, part.k);
    std::vector<int> comm(static_cast<std::size_t>(part.k));
    std::iota(comm.begin(), comm.end(), 0);
    Rng fresh(12345); // any visit order: no single move may improve
    CHECK_FALSE(detail::local_moving(aggregated, comm, fresh, nullptr));
}
