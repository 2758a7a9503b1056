#pragma once

#include "cdgafs/community.hpp"
#include "cdgafs/core.hpp"
#include "cdgafs/dataset.hpp"
#include "cdgafs/feature_graph.hpp"
#include "cdgafs/knn.hpp"
#include "cdgafs/relevance.hpp"
#include "cdgafs/rng.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace cdgafs {

/// Candidate feature subset over the filtered feature space; genes[i] == 1
/// selects the i-th kept feature.
using Chromosome = std::vector<std::uint8_t>;

/// Search parameters. The rate/size defaults are the conventional GA
/// settings this method is normally run with; omega is the per-community
/// selection quota and repair_enabled switches between the repaired search
/// and the plain-GA baseline.
struct GaConfig {
    double crossover_rate = 0.8;
    double mutation_rate = 0.05;
    int population_size = 100;
    int max_iterations = 100;
    int omega = 1;
    int k_nn = 5;
    int filter_cap = 100;
    std::uint64_t seed = 0;
    bool repair_enabled = true;

    void validate() const {
        if (crossover_rate < 0.0 || crossover_rate > 1.0) {
            throw ValidationError("crossover rate must lie in [0,1]");
        }
        if (mutation_rate < 0.0 || mutation_rate > 1.0) {
            throw ValidationError("mutation rate must lie in [0,1]");
        }
        if (population_size < 2) throw ValidationError("population size must be at least 2");
        if (max_iterations < 1) throw ValidationError("iteration count must be at least 1");
        if (omega < 1) throw ValidationError("omega must be at least 1");
        if (k_nn < 1) throw ValidationError("k_nn must be at least 1");
        if (filter_cap < 2) throw ValidationError("filter cap must be at least 2");
    }
};

struct TracePoint {
    double best_fitness = 0.0;
    double best_validation_accuracy = 0.0;
};

/// Structured result of one run: the winning subset, its scores, the
/// per-iteration convergence trace and per-phase wall times.
struct RunReport {
    std::vector<int> selected_features; // original feature indices, ascending
    double best_fitness = 0.0;
    double validation_accuracy = 0.0;
    double test_accuracy = 0.0;
    double mean_selected_raw_similarity = 0.0; // |Pearson| over selected pairs
    std::vector<TracePoint> trace;             // length max_iterations
    int community_count = 0;
    int kept_feature_count = 0;
    std::uint64_t split_seed = 0;
    GaConfig config;
    std::vector<std::pair<std::string, double>> timings; // phase -> seconds
};

/// Quota of community c: min(omega, |c|).
inline std::size_t community_quota(std::size_t community_size, int omega) {
    return std::min<std::size_t>(static_cast<std::size_t>(omega), community_size);
}

/// True when `ch` selects exactly min(omega, |c|) genes in every community.
inline bool satisfies_quota(const Chromosome& ch, const Partition& part, int omega) {
    std::vector<std::size_t> selected(static_cast<std::size_t>(part.k), 0);
    std::vector<std::size_t> sizes(static_cast<std::size_t>(part.k), 0);
    for (std::size_t i = 0; i < ch.size(); ++i) {
        const auto c = static_cast<std::size_t>(part.assignment[i]);
        ++sizes[c];
        if (ch[i] != 0) ++selected[c];
    }
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (selected[c] != community_quota(sizes[c], omega)) return false;
    }
    return true;
}

/// Random population where every chromosome meets the per-community quota:
/// min(omega, |c|) members selected uniformly from each community.
inline std::vector<Chromosome> init_population(const Partition& part, const GaConfig& cfg) {
    cfg.validate();
    Rng rng = derive_rng(cfg.seed, RngStream::ga_init);
    const auto members = community_members(part);
    const std::size_t n = part.assignment.size();

    std::vector<Chromosome> population;
    population.reserve(static_cast<std::size_t>(cfg.population_size));
    for (int i = 0; i < cfg.population_size; ++i) {
        Chromosome ch(n, 0);
        for (const auto& community : members) {
            std::vector<int> pool = community;
            const std::size_t quota = community_quota(pool.size(), cfg.omega);
            rng.choose_front(pool, quota);
            for (std::size_t j = 0; j < quota; ++j) ch[static_cast<std::size_t>(pool[j])] = 1;
        }
        population.push_back(std::move(ch));
    }
    return population;
}

inline std::vector<int> selected_genes(const Chromosome& ch) {
    std::vector<int> out;
    for (std::size_t i = 0; i < ch.size(); ++i) {
        if (ch[i] != 0) out.push_back(static_cast<int>(i));
    }
    return out;
}

/// Lower bound for the mean pairwise similarity in the fitness denominator.
constexpr double kMinAvgSimilarity = 1e-6;

/// Denominator used for single-feature subsets, where the pairwise mean is
/// undefined. The neutral midpoint of the normalized similarity scale keeps
/// singletons comparable to an uncorrelated pair; a vanishing value here
/// would turn every singleton into an unbeatable attractor for the
/// unconstrained baseline search.
constexpr double kSingletonAvgSimilarity = 0.5;

/// Relevance/redundancy objective: validation accuracy of the subset divided
/// by the mean pairwise normalized similarity among the selected features.
/// `train` and `validation` must live in the filtered feature space the
/// chromosome indexes.
inline double fitness(const Chromosome& ch, const FeatureGraph& g, const Dataset& train,
                      const Dataset& validation, const GaConfig& cfg) {
    const std::vector<int> sel = selected_genes(ch);
    if (sel.empty()) throw ValidationError("fitness of a chromosome with no selected features");
    const SubsetView train_view(train, sel);
    const SubsetView validation_view(validation, sel);
    const double accuracy = classification_accuracy(train_view, validation_view, cfg.k_nn);
    double avg_sim = sel.size() >= 2 ? g.mean_pairwise_weight(sel) : kSingletonAvgSimilarity;
    if (avg_sim < kMinAvgSimilarity) avg_sim = kMinAvgSimilarity;
    return accuracy / avg_sim;
}

/// Fitness-proportional parent choice; a population whose fitness mass is
/// all zero degenerates to a uniform choice.
inline std::size_t roulette_select(const std::vector<double>& fitnesses, Rng& rng) {
    if (fitnesses.empty()) throw ValidationError("roulette selection over an empty population");
    double total = 0.0;
    for (double f : fitnesses) {
        if (f < 0.0) throw ValidationError("roulette selection requires non-negative fitness");
        total += f;
    }
    if (total <= 0.0) return rng.index(fitnesses.size());
    const double pick = rng.real() * total;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < fitnesses.size(); ++i) {
        cumulative += fitnesses[i];
        if (pick < cumulative) return i;
    }
    return fitnesses.size() - 1;
}

/// Single-point crossover for datasets under 20 original features,
/// double-point otherwise; applied with probability crossover_rate per pair,
/// otherwise the offspring are plain copies.
inline std::pair<Chromosome, Chromosome> crossover(const Chromosome& p1, const Chromosome& p2,
                                                   const GaConfig& cfg, std::size_t n_original,
                                                   Rng& rng) {
    if (p1.size() != p2.size()) throw ValidationError("crossover parents differ in length");
    Chromosome c1 = p1;
    Chromosome c2 = p2;
    const std::size_t len = p1.size();
    if (len < 2 || !rng.bernoulli(cfg.crossover_rate)) return {std::move(c1), std::move(c2)};

    const auto swap_range = [&](std::size_t from, std::size_t to) {
        for (std::size_t i = from; i < to; ++i) std::swap(c1[i], c2[i]);
    };
    if (n_original < 20 || len < 3) {
        const std::size_t cut = 1 + static_cast<std::size_t>(rng.below(len - 1));
        swap_range(cut, len);
    } else {
        std::size_t a = 1 + static_cast<std::size_t>(rng.below(len - 1));
        std::size_t b = 1 + static_cast<std::size_t>(rng.below(len - 1));
        if (a > b) std::swap(a, b);
        swap_range(a, b);
    }
    return {std::move(c1), std::move(c2)};
}

/// Flips every gene independently with probability mutation_rate.
inline Chromosome mutate(const Chromosome& ch, const GaConfig& cfg, Rng& rng) {
    Chromosome out = ch;
    for (auto& gene : out) {
        if (rng.bernoulli(cfg.mutation_rate)) gene = gene != 0 ? 0 : 1;
    }
    return out;
}

/// Restores the per-community quota: under-quota communities gain uniformly
/// chosen unselected members, over-quota communities keep a uniformly chosen
/// subset of their selected members. Communities already at quota are left
/// untouched.
inline Chromosome repair(const Chromosome& ch, const Partition& part, const GaConfig& cfg,
                         Rng& rng) {
    if (ch.size() != part.assignment.size()) {
        throw ValidationError("repair: partition does not cover the chromosome");
    }
    Chromosome out = ch;
    for (const auto& community : community_members(part)) {
        std::vector<int> chosen;
        std::vector<int> unchosen;
        for (int gene : community) {
            (out[static_cast<std::size_t>(gene)] != 0 ? chosen : unchosen).push_back(gene);
        }
        const std::size_t quota = community_quota(community.size(), cfg.omega);
        if (chosen.size() < quota) {
            const std::size_t add = quota - chosen.size();
            rng.choose_front(unchosen, add);
            for (std::size_t i = 0; i < add; ++i) out[static_cast<std::size_t>(unchosen[i])] = 1;
        } else if (chosen.size() > quota) {
            rng.choose_front(chosen, quota);
            for (std::size_t i = quota; i < chosen.size(); ++i) {
                out[static_cast<std::size_t>(chosen[i])] = 0;
            }
        }
    }
    return out;
}

namespace detail {

inline unsigned fitness_thread_cap() {
    unsigned cap = std::thread::hardware_concurrency();
    if (cap == 0) cap = 1;
    if (const char* env = std::getenv("CDGAFS_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) cap = static_cast<unsigned>(v);
    }
    return cap;
}

struct Evaluated {
    double fitness = 0.0;
    double accuracy = 0.0;
};

/// Evaluates the population, caching by gene vector within the generation.
/// Evaluations are pure, so running them on several threads and merging by
/// index leaves the result independent of the worker count.
inline std::vector<Evaluated> evaluate_population(const std::vector<Chromosome>& population,
                                                  const FeatureGraph& g, const Dataset& train,
                                                  const Dataset& validation, const GaConfig& cfg) {
    std::map<Chromosome, Evaluated> cache;
    std::vector<const Chromosome*> todo;
    for (const auto& ch : population) {
        auto [it, inserted] = cache.try_emplace(ch);
        if (inserted) todo.push_back(&it->first);
    }

    const auto evaluate_one = [&](const Chromosome& ch) -> Evaluated {
        const std::vector<int> sel = selected_genes(ch);
        if (sel.empty()) return {0.0, 0.0}; // reachable only with repair disabled
        const SubsetView train_view(train, sel);
        const SubsetView validation_view(validation, sel);
        const double accuracy = classification_accuracy(train_view, validation_view, cfg.k_nn);
        double avg_sim = sel.size() >= 2 ? g.mean_pairwise_weight(sel) : kSingletonAvgSimilarity;
        if (avg_sim < kMinAvgSimilarity) avg_sim = kMinAvgSimilarity;
        return {accuracy / avg_sim, accuracy};
    };

    std::vector<Evaluated> results(todo.size());
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(fitness_thread_cap(), todo.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < todo.size(); ++i) results[i] = evaluate_one(*todo[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= todo.size()) break;
                    results[i] = evaluate_one(*todo[i]);
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    for (std::size_t i = 0; i < todo.size(); ++i) cache[*todo[i]] = results[i];

    std::vector<Evaluated> out;
    out.reserve(population.size());
    for (const auto& ch : population) out.push_back(cache[ch]);
    return out;
}

class PhaseTimer {
public:
    explicit PhaseTimer(std::vector<std::pair<std::string, double>>& sink) : sink_(sink) {}

    template <typename F>
    auto time(const std::string& phase, F&& f) {
        const auto start = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(f())>) {
            f();
            record(phase, start);
        } else {
            auto result = f();
            record(phase, start);
            return result;
        }
    }

private:
    void record(const std::string& phase, std::chrono::steady_clock::time_point start) {
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        sink_.emplace_back(phase, elapsed.count());
    }

    std::vector<std::pair<std::string, double>>& sink_;
};

} // namespace detail

/// The full search: Fisher relevance filtering, similarity graph,
/// community detection, then a generational GA (elitism of one, roulette
/// selection, adaptive crossover, gene-wise mutation, and — unless disabled —
/// the per-community quota repair). Fitness is evaluated on the validation
/// set; the test set is touched exactly once, after the last generation.
inline RunReport run_cdgafs(const GaConfig& cfg, const SplitDataset& split) {
    cfg.validate();
    const auto run_start = std::chrono::steady_clock::now();

    RunReport report;
    report.config = cfg;
    report.split_seed = split.split_seed;
    detail::PhaseTimer timer(report.timings);

    const std::size_t n_original = split.train.feature_count();
    const RelevanceScores scores =
        timer.time("relevance", [&] { return relevance_analysis(split.train, cfg.filter_cap); });
    std::vector<int> kept = scores.kept_indices;
    std::sort(kept.begin(), kept.end());
    report.kept_feature_count = static_cast<int>(kept.size());

    const FeatureGraph graph = timer.time("graph", [&] { return build_graph(split.train, kept); });
    const Partition part =
        timer.time("community", [&] { return detect_communities(graph, cfg.seed); });
    report.community_count = part.k;

    const Dataset train = split.train.project(kept);
    const Dataset validation = split.validation.project(kept);
    const Dataset test = split.test.project(kept);

    const auto ga_start = std::chrono::steady_clock::now();
    std::vector<Chromosome> population = init_population(part, cfg);
    Rng rng = derive_rng(cfg.seed, RngStream::ga_evolve);

    const auto check_quota = [&](const std::vector<Chromosome>& pop) {
        if (!cfg.repair_enabled) return;
        for (const auto& ch : pop) {
            if (!satisfies_quota(ch, part, cfg.omega)) {
                throw std::logic_error("population violates the community quota invariant");
            }
        }
    };
    check_quota(population);

    report.trace.reserve(static_cast<std::size_t>(cfg.max_iterations));
    Chromosome best_chromosome;
    detail::Evaluated best_eval;

    for (int iteration = 0; iteration < cfg.max_iterations; ++iteration) {
        const std::vector<detail::Evaluated> evaluated =
            detail::evaluate_population(population, graph, train, validation, cfg);

        std::size_t best_idx = 0;
        for (std::size_t i = 1; i < evaluated.size(); ++i) {
            if (evaluated[i].fitness > evaluated[best_idx].fitness) best_idx = i;
        }
        best_chromosome = population[best_idx];
        best_eval = evaluated[best_idx];
        report.trace.push_back({best_eval.fitness, best_eval.accuracy});

        if (iteration + 1 == cfg.max_iterations) break;

        std::vector<double> fitnesses;
        fitnesses.reserve(evaluated.size());
        for (const auto& e : evaluated) fitnesses.push_back(e.fitness);

        std::vector<Chromosome> next;
        next.reserve(population.size());
        next.push_back(population[best_idx]); // elite survives unmodified
        while (next.size() < population.size()) {
            const std::size_t a = roulette_select(fitnesses, rng);
            const std::size_t b = roulette_select(fitnesses, rng);
            auto [c1, c2] = crossover(population[a], population[b], cfg, n_original, rng);
            c1 = mutate(c1, cfg, rng);
            c2 = mutate(c2, cfg, rng);
            if (cfg.repair_enabled) {
                c1 = repair(c1, part, cfg, rng);
                c2 = repair(c2, part, cfg, rng);
            }
            next.push_back(std::move(c1));
            if (next.size() < population.size()) next.push_back(std::move(c2));
        }
        population = std::move(next);
        check_quota(population);
    }

    const std::chrono::duration<double> ga_elapsed = std::chrono::steady_clock::now() - ga_start;
    report.timings.emplace_back("evolution", ga_elapsed.count());

    const std::vector<int> sel = selected_genes(best_chromosome);
    report.best_fitness = best_eval.fitness;
    report.validation_accuracy = best_eval.accuracy;
    report.mean_selected_raw_similarity = graph.mean_pairwise_raw(sel);
    for (int gene : sel) {
        report.selected_features.push_back(graph.node_ids[static_cast<std::size_t>(gene)]);
    }
    std::sort(report.selected_features.begin(), report.selected_features.end());

    if (!sel.empty()) {
        const SubsetView train_view(train, sel);
        const SubsetView test_view(test, sel);
        report.test_accuracy = classification_accuracy(train_view, test_view, cfg.k_nn);
    }

    const std::chrono::duration<double> total = std::chrono::steady_clock::now() - run_start;
    report.timings.emplace_back("total", total.count());
    return report;
}

} // namespace cdgafs
