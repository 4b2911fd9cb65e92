#include <doctest.h>

#include <cmath>
#include <set>

#include "fcmreduce/community.hpp"
#include "fcmreduce/population.hpp"
#include "fcmreduce/rng.hpp"

using namespace fcmreduce;

namespace {

struct Weighted {
    SocialGraph graph;
    std::vector<TieWeight> weights;
};

TieWeight with_similarity(double s) { return TieWeight::from_dissimilarity(-std::log(s)); }

// Two k-cliques of similarity 1 joined by one bridge of similarity 0.01.
Weighted two_cliques(int k) {
    std::vector<Tie> ties;
    for (int base : {0, k}) {
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) ties.emplace_back(base + i, base + j);
        }
    }
    ties.emplace_back(k - 1, k);
    SocialGraph g(static_cast<std::size_t>(2 * k), ties);
    std::vector<TieWeight> w;
    for (const auto& t : g.ties()) w.push_back(with_similarity(t == Tie(k - 1, k) ? 0.01 : 1.0));
    return {g, w};
}

Partition halves(int k) {
    std::vector<int> labels(static_cast<std::size_t>(2 * k), 0);
    for (int i = k; i < 2 * k; ++i) labels[static_cast<std::size_t>(i)] = 1;
    return Partition(labels);
}

void check_valid(const Partition& p, std::size_t n) {
    CHECK(p.agent_count() == n);
    std::set<int> ids(p.assignment().begin(), p.assignment().end());
    CHECK(ids.size() == p.community_count());
    CHECK(*ids.begin() == 0);
    CHECK(*ids.rbegin() == static_cast<int>(p.community_count()) - 1);
    std::size_t total = 0;
    for (auto s : p.sizes()) {
        CHECK(s > 0);
        total += s;
    }
    CHECK(total == n);
}

Weighted random_weighted(std::uint64_t seed, std::size_t n) {
    TopologySpec spec{TopologyKind::SmallWorld, n};
    spec.seed = seed;
    auto g = build_topology(spec);
    Rng rng(seed);
    std::vector<TieWeight> w;
    for (std::size_t k = 0; k < g.tie_count(); ++k) w.push_back(TieWeight::from_dissimilarity(rng.uniform(0.0, 2.0)));
    return {g, w};
}

}  // namespace

TEST_CASE("partition renumbering and stats") {
    const Partition p({7, 7, 3, 9, 3, 3});
    CHECK(p.assignment() == std::vector<int>{0, 0, 1, 2, 1, 1});
    CHECK(p.community_count() == 3);
    CHECK(p.members()[1] == std::vector<int>{2, 4, 5});
    const auto s = partition_stats(Partition({0, 0, 0, 1, 1, 1, 2, 2, 2, 2}));
    CHECK(s.count == 3);
    CHECK(s.avg_size == doctest::Approx(10.0 / 3.0));
    CHECK(s.max_size == 4);
    CHECK(s.min_size == 3);
    const auto single = partition_stats(Partition::singletons(5));
    CHECK((single.count == 5 && single.max_size == 1 && single.min_size == 1));
    const auto whole = partition_stats(Partition(std::vector<int>(4, 2)));
    CHECK((whole.count == 1 && whole.avg_size == 4.0 && whole.max_size == 4 && whole.min_size == 4));
    CHECK(parse_community_algorithm("agglomerative") == CommunityAlgorithm::Agglomerative);
    CHECK_THROWS_AS(parse_community_algorithm("paris"), ConfigError);
}

TEST_CASE("chinese whispers") {
    SUBCASE("two 5-cliques") {
        const auto w = two_cliques(5);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto r = chinese_whispers(w.graph, w.weights, 50, seed);
            CHECK(r.partition == halves(5));
            CHECK(r.converged);
        }
    }
    SUBCASE("edgeless graph keeps singletons") {
        const auto r = chinese_whispers(SocialGraph(6, {}), {}, 50, 1);
        CHECK(r.partition == Partition::singletons(6));
        CHECK(r.converged);
        CHECK(r.rounds == 1);
    }
    SUBCASE("determinism and invariants") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto w = random_weighted(seed, 120);
            const auto a = chinese_whispers(w.graph, w.weights, 50, seed);
            CHECK(a.partition == chinese_whispers(w.graph, w.weights, 50, seed).partition);
            check_valid(a.partition, 120);
            CHECK(a.rounds <= 50);
            if (!a.converged) CHECK(a.rounds == 50);
        }
    }
    SUBCASE("round cap is reported") {
        const auto w = random_weighted(3, 200);
        const auto r = chinese_whispers(w.graph, w.weights, 1, 3);
        CHECK(r.rounds == 1);
        CHECK_FALSE(r.converged);
    }
}

TEST_CASE("agglomerative modularity") {
    SUBCASE("two 5-cliques") {
        const auto w = two_cliques(5);
        CHECK(agglomerative_modularity(w.graph, w.weights).partition == halves(5));
    }
    SUBCASE("single edge merges") {
        const SocialGraph g(2, {{0, 1}});
        const auto r = agglomerative_modularity(g, {with_similarity(0.5)});
        CHECK(r.partition.community_count() == 1);
        CHECK(r.modularity_trace.front() == doctest::Approx(-0.5));
        CHECK(r.modularity_trace.back() == doctest::Approx(0.0));
    }
    SUBCASE("complete uniform graph never drops below singletons") {
        std::vector<Tie> ties;
        for (int i = 0; i < 6; ++i) {
            for (int j = i + 1; j < 6; ++j) ties.emplace_back(i, j);
        }
        const SocialGraph g(6, ties);
        const std::vector<TieWeight> w(g.tie_count(), with_similarity(0.7));
        const auto r = agglomerative_modularity(g, w);
        CHECK(modularity(g, w, r.partition) >= modularity(g, w, Partition::singletons(6)) - 1e-12);
    }
    SUBCASE("trace is non-decreasing and matches the final partition") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto w = random_weighted(seed, 80);
            const auto r = agglomerative_modularity(w.graph, w.weights);
            check_valid(r.partition, 80);
            for (std::size_t i = 1; i < r.modularity_trace.size(); ++i) {
                CHECK(r.modularity_trace[i] >= r.modularity_trace[i - 1] - 1e-12);
            }
            CHECK(r.modularity_trace.back() == doctest::Approx(modularity(w.graph, w.weights, r.partition)));
            CHECK(r.modularity_trace.size() == 80 - r.partition.community_count() + 1);
        }
    }
}

TEST_CASE("modularity by hand") {
    // Path 0-1-2 with unit weights; W = 2, strengths 1, 2, 1.
    const SocialGraph g(3, {{0, 1}, {1, 2}});
    const std::vector<TieWeight> w(2, with_similarity(1.0));
    // {0,1} | {2}: (1/2 - (3/4)^2) + (0 - (1/4)^2) = 0.5 - 0.5625 - 0.0625
    CHECK(modularity(g, w, Partition({0, 0, 1})) == doctest::Approx(-0.125));
    CHECK(modularity(g, w, Partition({0, 0, 0})) == doctest::Approx(0.0));
    CHECK(modularity(SocialGraph(3, {}), {}, Partition::singletons(3)) == 0.0);
}
