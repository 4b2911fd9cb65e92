#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "fcmreduce/community.hpp"
#include "fcmreduce/population.hpp"

namespace fcmreduce {

struct CommunityProvenance {
    int representative = 0;
    std::vector<int> members;
};

/// A reduced tie whose channel could not be inherited from any crossing tie
/// and was drawn from the representatives' shared labels instead.
struct RedrawnChannel {
    int community_a = 0;
    int community_b = 0;
    std::string channel;
};

/// Contracted population: one super-agent per community. Super-agent k
/// represents community k and is node k of `graph`; it keeps the original
/// agent id and FCM of its representative.
struct ReducedModel {
    std::vector<Agent> super_agents;
    SocialGraph graph;
    std::vector<CommunityProvenance> provenance;  // indexed by community id
    std::vector<RedrawnChannel> redrawn;
    std::size_t removed_count = 0;

    std::vector<Fcm> fcms() const;
};

/// Sum of the initial activation values.
double activation_score(const Fcm& f);

/// Per community: sort members by (score, id) and take index (size - 1) / 2.
/// Result is indexed by community id.
std::vector<int> select_representatives(const std::vector<Agent>& agents, const Partition& partition);

ReducedModel contract(const std::vector<Agent>& agents, const SocialGraph& graph, const Partition& partition,
                      const std::vector<int>& representatives, std::uint64_t seed);

}  // namespace fcmreduce
