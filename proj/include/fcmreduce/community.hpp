#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fcmreduce/population.hpp"
#include "fcmreduce/similarity.hpp"

namespace fcmreduce {

/// Total, non-overlapping assignment of agents to communities 0..c-1, every
/// community non-empty. Ids are numbered by first appearance in agent order.
class Partition {
public:
    Partition() = default;
    /// Accepts arbitrary labels and renumbers them densely.
    explicit Partition(const std::vector<int>& labels);

    static Partition singletons(std::size_t n);

    std::size_t agent_count() const noexcept { return assignment_.size(); }
    std::size_t community_count() const noexcept { return count_; }
    int community_of(std::size_t agent) const { return assignment_.at(agent); }
    const std::vector<int>& assignment() const noexcept { return assignment_; }

    /// Members of each community, ascending agent ids.
    std::vector<std::vector<int>> members() const;
    std::vector<std::size_t> sizes() const;

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<int> assignment_;
    std::size_t count_ = 0;
};

struct CommunityStats {
    std::size_t count = 0;
    double avg_size = 0.0;
    std::size_t max_size = 0;
    std::size_t min_size = 0;
};

CommunityStats partition_stats(const Partition& p);

enum class CommunityAlgorithm { ChineseWhispers, Agglomerative };

std::string to_string(CommunityAlgorithm algorithm);
CommunityAlgorithm parse_community_algorithm(const std::string& name);

struct ChineseWhispersResult {
    Partition partition;
    int rounds = 0;
    bool converged = false;
};

/// Label propagation: every agent starts in its own class; in each round the
/// agents are visited in a seeded random order and adopt the class with the
/// largest summed similarity among their neighbors (ties broken uniformly at
/// random). Stops after a round without changes or after max_rounds.
ChineseWhispersResult chinese_whispers(const SocialGraph& graph, const std::vector<TieWeight>& weights,
                                       int max_rounds, std::uint64_t seed);

struct AgglomerativeResult {
    Partition partition;
    /// Modularity of the singleton start followed by the value after each merge.
    std::vector<double> modularity_trace;
};

/// Greedy agglomeration: repeatedly merge the pair of communities with the
/// largest positive modularity gain, lowest id pair first on ties, until no
/// merge increases modularity.
AgglomerativeResult agglomerative_modularity(const SocialGraph& graph, const std::vector<TieWeight>& weights);

/// Similarity-weighted modularity (resolution 1). Zero for an edgeless graph.
double modularity(const SocialGraph& graph, const std::vector<TieWeight>& weights, const Partition& partition);

Partition detect_communities(CommunityAlgorithm algorithm, const SocialGraph& graph,
                             const std::vector<TieWeight>& weights, int max_rounds, std::uint64_t seed);

}  // namespace fcmreduce
