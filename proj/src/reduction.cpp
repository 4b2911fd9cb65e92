#include "fcmreduce/reduction.hpp"

#include <algorithm>

#include "fcmreduce/rng.hpp"

namespace fcmreduce {

std::vector<Fcm> ReducedModel::fcms() const {
    std::vector<Fcm> out;
    out.reserve(super_agents.size());
    for (const auto& a : super_agents) out.push_back(a.fcm);
    return out;
}

double activation_score(const Fcm& f) { return f.initial_activation().sum(); }

std::vector<int> select_representatives(const std::vector<Agent>& agents, const Partition& partition) {
    if (partition.agent_count() != agents.size()) {
        throw ContractViolation("select_representatives: partition covers " + std::to_string(partition.agent_count()) +
                                " agents, population has " + std::to_string(agents.size()));
    }
    std::vector<int> reps;
    reps.reserve(partition.community_count());
    for (auto members : partition.members()) {
        std::vector<std::pair<double, int>> scored;
        scored.reserve(members.size());
        for (int m : members) scored.emplace_back(activation_score(agents[static_cast<std::size_t>(m)].fcm), m);
        std::sort(scored.begin(), scored.end());
        reps.push_back(scored[(scored.size() - 1) / 2].second);
    }
    return reps;
}

ReducedModel contract(const std::vector<Agent>& agents, const SocialGraph& graph, const Partition& partition,
                      const std::vector<int>& representatives, std::uint64_t seed) {
    if (agents.size() != graph.size() || partition.agent_count() != graph.size()) {
        throw ContractViolation("contract: agents, graph and partition must cover the same population");
    }
    if (representatives.size() != partition.community_count()) {
        throw ContractViolation("contract: need one representative per community");
    }
    if (!graph.has_channels()) throw ContractViolation("contract: graph has no channels assigned");

    ReducedModel model;
    const auto members = partition.members();
    for (std::size_t c = 0; c < representatives.size(); ++c) {
        const int rep = representatives[c];
        if (rep < 0 || static_cast<std::size_t>(rep) >= agents.size() ||
            partition.community_of(static_cast<std::size_t>(rep)) != static_cast<int>(c)) {
            throw ContractViolation("contract: representative " + std::to_string(rep) + " is not a member of community " +
                                    std::to_string(c));
        }
        model.super_agents.push_back(agents[static_cast<std::size_t>(rep)]);
        model.provenance.push_back(CommunityProvenance{rep, members[c]});
    }
    model.removed_count = agents.size() - representatives.size();

    // Ties are sorted, so the first crossing tie seen for a community pair is
    // the lowest one; later ones only matter if earlier labels are unusable.
    std::map<std::pair<int, int>, std::vector<std::size_t>> crossing;
    for (std::size_t k = 0; k < graph.tie_count(); ++k) {
        const auto& t = graph.tie(k);
        const int ca = partition.community_of(static_cast<std::size_t>(t.first));
        const int cb = partition.community_of(static_cast<std::size_t>(t.second));
        if (ca == cb) continue;
        crossing[{std::min(ca, cb), std::max(ca, cb)}].push_back(k);
    }

    Rng rng(seed);
    std::vector<Tie> ties;
    std::vector<std::string> channels;
    for (const auto& [pair, tie_ids] : crossing) {
        const Fcm& fa = model.super_agents[static_cast<std::size_t>(pair.first)].fcm;
        const Fcm& fb = model.super_agents[static_cast<std::size_t>(pair.second)].fcm;
        std::string channel;
        for (auto k : tie_ids) {
            const auto& label = graph.channel(k);
            if (fa.has_concept(label) && fb.has_concept(label)) {
                channel = label;
                break;
            }
        }
        if (channel.empty()) {
            const auto labels = shared_labels(fa, fb);
            if (labels.empty()) {
                throw ChannelError("contract: representatives of communities " + std::to_string(pair.first) + " and " +
                                   std::to_string(pair.second) + " share no concept");
            }
            channel = labels[rng.below(labels.size())];
            model.redrawn.push_back(RedrawnChannel{pair.first, pair.second, channel});
        }
        ties.emplace_back(pair.first, pair.second);
        channels.push_back(std::move(channel));
    }
    model.graph = SocialGraph(representatives.size(), std::move(ties), std::move(channels));
    return model;
}

}  // namespace fcmreduce
