#include <doctest.h>

#include <set>

#include "fcmreduce/population.hpp"
#include "fcmreduce/reduction.hpp"
#include "helpers.hpp"

using namespace fcmreduce;
using testing::flat_fcm;

namespace {

// Agent whose activation sum equals `score` (one concept set per call).
Fcm scored(double score, const std::vector<std::string>& concepts = {"a", "b"}) {
    std::vector<double> a(concepts.size(), 0.0);
    a[0] = score / 10.0;
    return flat_fcm(concepts, a);
}

}  // namespace

TEST_CASE("representatives") {
    SUBCASE("medians") {
        const auto agents = make_agents({scored(9), scored(1), scored(2), scored(3), scored(9), scored(1)});
        // Scores {9,1,2} and {3,9,1}.
        const Partition p({0, 0, 0, 1, 1, 1});
        const auto reps = select_representatives(agents, p);
        CHECK(reps == std::vector<int>{2, 3});
    }
    SUBCASE("lower middle for even sizes, id breaks score ties") {
        const auto agents = make_agents({scored(1), scored(2), scored(3), scored(9), scored(5), scored(5)});
        const auto reps = select_representatives(agents, Partition({0, 0, 0, 0, 1, 1}));
        CHECK(reps[0] == 1);
        CHECK(reps[1] == 4);
    }
    SUBCASE("singletons") {
        const auto agents = make_agents({scored(1), scored(2)});
        CHECK(select_representatives(agents, Partition::singletons(2)) == std::vector<int>{0, 1});
    }
}

TEST_CASE("contraction") {
    const std::vector<std::string> abc{"a", "b", "c"};
    std::vector<Fcm> fcms;
    for (int i = 0; i < 6; ++i) fcms.push_back(scored(i, abc));
    const auto agents = make_agents(fcms);
    const SocialGraph g(6, {{0, 1}, {1, 2}, {0, 3}, {1, 4}, {2, 5}, {3, 4}, {4, 5}}, {"a", "b", "c", "b", "a", "c", "a"});

    SUBCASE("three crossing ties collapse to one") {
        const Partition p({0, 0, 0, 1, 1, 1});
        const auto reps = select_representatives(agents, p);
        const auto r = contract(agents, g, p, reps, 1);
        CHECK(r.super_agents.size() == 2);
        CHECK(r.graph.tie_count() == 1);
        CHECK(r.removed_count == 4);
        // Lowest crossing tie is {0,3} with channel "c".
        CHECK(r.graph.channel(0) == "c");
        CHECK(r.redrawn.empty());
        for (std::size_t c = 0; c < 2; ++c) {
            const auto& prov = r.provenance[c];
            CHECK(std::find(prov.members.begin(), prov.members.end(), prov.representative) != prov.members.end());
            CHECK(r.super_agents[c].fcm == agents[static_cast<std::size_t>(prov.representative)].fcm);
        }
    }
    SUBCASE("one community") {
        const auto p = Partition(std::vector<int>(6, 0));
        const auto r = contract(agents, g, p, select_representatives(agents, p), 1);
        CHECK(r.graph.tie_count() == 0);
        CHECK(r.removed_count == 5);
    }
    SUBCASE("identity contraction") {
        const auto p = Partition::singletons(6);
        const auto r = contract(agents, g, p, select_representatives(agents, p), 1);
        CHECK(r.graph == g);
        CHECK(r.removed_count == 0);
        for (std::size_t i = 0; i < 6; ++i) CHECK(r.super_agents[i].fcm == agents[i].fcm);
    }
    SUBCASE("channel missing from a representative is redrawn") {
        std::vector<Fcm> mixed = {flat_fcm({"a", "x"}, {0.1, 0}), flat_fcm({"b", "x"}, {0.5, 0}),
                                  flat_fcm({"b", "x"}, {0.0, 0}), flat_fcm({"b", "x"}, {0.9, 0})};
        const auto ag = make_agents(mixed);
        // Agent 0 is the only member of community 0; the crossing tie {0,1}
        // uses "x", fine. Tie {2,3} inside community 1 is irrelevant.
        const SocialGraph h(4, {{0, 1}, {2, 3}, {1, 2}}, {"x", "b", "b"});
        const Partition p({0, 1, 1, 1});
        const auto r = contract(ag, h, p, select_representatives(ag, p), 7);
        CHECK(r.graph.channel(0) == "x");
        CHECK(r.redrawn.empty());

        const SocialGraph k(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}}, {"a", "a", "a", "b"});
        // Crossing ties {0,2} and {1,2} are channelled on "a", which the
        // community-1 representative (agent 2 or 3) lacks.
        const Partition q({0, 0, 1, 1});
        auto fixed = mixed;
        fixed[1] = flat_fcm({"a", "x"}, {0.5, 0});
        const auto ag2 = make_agents(fixed);
        const auto r2 = contract(ag2, k, q, select_representatives(ag2, q), 7);
        REQUIRE(r2.graph.tie_count() == 1);
        CHECK(r2.graph.channel(0) == "x");
        REQUIRE(r2.redrawn.size() == 1);
        CHECK(r2.redrawn[0].channel == "x");
    }
}

TEST_CASE("contraction soundness on random graphs") {
    const auto agents = make_agents(generate_cmaes_style(60, 3));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        TopologySpec spec{TopologyKind::Random, 60};
        spec.edge_probability = 0.08;
        spec.seed = seed;
        const auto g = assign_channels(build_topology(spec), agents, seed);
        Rng rng(seed);
        std::vector<int> labels(60);
        for (auto& l : labels) l = static_cast<int>(rng.below(7));
        const Partition p(labels);
        const auto reps = select_representatives(agents, p);
        const auto r = contract(agents, g, p, reps, seed);
        std::set<std::pair<int, int>> crossing;
        for (const auto& t : g.ties()) {
            const int a = p.community_of(static_cast<std::size_t>(t.first));
            const int b = p.community_of(static_cast<std::size_t>(t.second));
            if (a != b) crossing.insert({std::min(a, b), std::max(a, b)});
        }
        std::set<std::pair<int, int>> reduced;
        for (const auto& t : r.graph.ties()) reduced.insert({t.first, t.second});
        CHECK(reduced == crossing);
        CHECK(r.removed_count == 60 - p.community_count());
        for (std::size_t c = 0; c < p.community_count(); ++c) {
            CHECK(p.community_of(static_cast<std::size_t>(reps[c])) == static_cast<int>(c));
        }
    }
}
