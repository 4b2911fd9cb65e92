#include "fcmreduce/community.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "fcmreduce/rng.hpp"

namespace fcmreduce {

Partition::Partition(const std::vector<int>& labels) {
    std::unordered_map<int, int> dense;
    assignment_.reserve(labels.size());
    for (int label : labels) {
        auto [it, inserted] = dense.try_emplace(label, static_cast<int>(dense.size()));
        assignment_.push_back(it->second);
    }
    count_ = dense.size();
}

Partition Partition::singletons(std::size_t n) {
    std::vector<int> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    return Partition(labels);
}

std::vector<std::vector<int>> Partition::members() const {
    std::vector<std::vector<int>> out(count_);
    for (std::size_t i = 0; i < assignment_.size(); ++i) {
        out[static_cast<std::size_t>(assignment_[i])].push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<std::size_t> Partition::sizes() const {
    std::vector<std::size_t> out(count_, 0);
    for (int c : assignment_) ++out[static_cast<std::size_t>(c)];
    return out;
}

CommunityStats partition_stats(const Partition& p) {
    CommunityStats s;
    s.count = p.community_count();
    if (s.count == 0) return s;
    const auto sizes = p.sizes();
    s.max_size = *std::max_element(sizes.begin(), sizes.end());
    s.min_size = *std::min_element(sizes.begin(), sizes.end());
    s.avg_size = static_cast<double>(p.agent_count()) / static_cast<double>(s.count);
    return s;
}

std::string to_string(CommunityAlgorithm algorithm) {
    switch (algorithm) {
        case CommunityAlgorithm::ChineseWhispers: return "chinese_whispers";
        case CommunityAlgorithm::Agglomerative: return "agglomerative";
    }
    return "?";
}

CommunityAlgorithm parse_community_algorithm(const std::string& name) {
    if (name == "chinese_whispers") return CommunityAlgorithm::ChineseWhispers;
    if (name == "agglomerative") return CommunityAlgorithm::Agglomerative;
    throw ConfigError("unknown community algorithm '" + name + "' (valid: chinese_whispers, agglomerative)");
}

namespace {

void check_weights(const SocialGraph& graph, const std::vector<TieWeight>& weights) {
    if (weights.size() != graph.tie_count()) {
        throw ContractViolation("community: " + std::to_string(weights.size()) + " weights for " +
                                std::to_string(graph.tie_count()) + " ties");
    }
}

}  // namespace

ChineseWhispersResult chinese_whispers(const SocialGraph& graph, const std::vector<TieWeight>& weights,
                                       int max_rounds, std::uint64_t seed) {
    check_weights(graph, weights);
    if (max_rounds < 1) throw ConfigError("chinese_whispers: max_rounds must be >= 1");
    const std::size_t n = graph.size();
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (std::size_t k = 0; k < graph.tie_count(); ++k) {
        const auto& t = graph.tie(k);
        adj[static_cast<std::size_t>(t.first)].emplace_back(t.second, weights[k].similarity);
        adj[static_cast<std::size_t>(t.second)].emplace_back(t.first, weights[k].similarity);
    }

    std::vector<int> label(n);
    std::iota(label.begin(), label.end(), 0);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    Rng rng(seed);
    ChineseWhispersResult result;
    std::map<int, double> votes;
    std::vector<int> best;
    for (int round = 1; round <= max_rounds; ++round) {
        rng.shuffle(order);
        bool changed = false;
        for (int v : order) {
            const auto& nbrs = adj[static_cast<std::size_t>(v)];
            if (nbrs.empty()) continue;
            votes.clear();
            for (const auto& [u, w] : nbrs) votes[label[static_cast<std::size_t>(u)]] += w;
            double top = -1.0;
            best.clear();
            for (const auto& [cls, score] : votes) {
                if (score > top) {
                    top = score;
                    best.assign(1, cls);
                } else if (score == top) {
                    best.push_back(cls);
                }
            }
            const int pick = best.size() == 1 ? best.front() : best[rng.below(best.size())];
            if (pick != label[static_cast<std::size_t>(v)]) {
                label[static_cast<std::size_t>(v)] = pick;
                changed = true;
            }
        }
        result.rounds = round;
        if (!changed) {
            result.converged = true;
            break;
        }
    }
    result.partition = Partition(label);
    return result;
}

double modularity(const SocialGraph& graph, const std::vector<TieWeight>& weights, const Partition& partition) {
    check_weights(graph, weights);
    if (partition.agent_count() != graph.size()) throw ContractViolation("modularity: partition size mismatch");
    const std::size_t c = partition.community_count();
    std::vector<double> internal(c, 0.0);
    std::vector<double> strength(c, 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < graph.tie_count(); ++k) {
        const auto& t = graph.tie(k);
        const double w = weights[k].similarity;
        const auto ca = static_cast<std::size_t>(partition.community_of(static_cast<std::size_t>(t.first)));
        const auto cb = static_cast<std::size_t>(partition.community_of(static_cast<std::size_t>(t.second)));
        total += w;
        strength[ca] += w;
        strength[cb] += w;
        if (ca == cb) internal[ca] += w;
    }
    if (total == 0.0) return 0.0;
    double q = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
        const double s = strength[i] / (2.0 * total);
        q += internal[i] / total - s * s;
    }
    return q;
}

AgglomerativeResult agglomerative_modularity(const SocialGraph& graph, const std::vector<TieWeight>& weights) {
    check_weights(graph, weights);
    const std::size_t n = graph.size();
    // Communities are keyed by their smallest member, so ids stay stable across merges.
    std::vector<std::map<int, double>> between(n);
    std::vector<double> strength(n, 0.0);
    std::vector<double> internal(n, 0.0);
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<char> alive(n, 1);
    double total = 0.0;
    for (std::size_t k = 0; k < graph.tie_count(); ++k) {
        const auto& t = graph.tie(k);
        const double w = weights[k].similarity;
        between[static_cast<std::size_t>(t.first)][t.second] += w;
        between[static_cast<std::size_t>(t.second)][t.first] += w;
        strength[static_cast<std::size_t>(t.first)] += w;
        strength[static_cast<std::size_t>(t.second)] += w;
        total += w;
    }

    auto current_modularity = [&] {
        if (total == 0.0) return 0.0;
        double q = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            const double s = strength[i] / (2.0 * total);
            q += internal[i] / total - s * s;
        }
        return q;
    };

    AgglomerativeResult result;
    result.modularity_trace.push_back(current_modularity());
    if (total > 0.0) {
        for (;;) {
            double best_gain = 0.0;
            int best_a = -1;
            int best_b = -1;
            for (std::size_t a = 0; a < n; ++a) {
                if (!alive[a]) continue;
                for (const auto& [b, w] : between[a]) {
                    if (b <= static_cast<int>(a)) continue;
                    const double gain = w / total - strength[a] * strength[static_cast<std::size_t>(b)] / (2.0 * total * total);
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_a = static_cast<int>(a);
                        best_b = b;
                    }
                }
            }
            if (best_a < 0) break;

            const auto a = static_cast<std::size_t>(best_a);
            const auto b = static_cast<std::size_t>(best_b);
            internal[a] += internal[b] + between[a][best_b];
            strength[a] += strength[b];
            between[a].erase(best_b);
            between[b].erase(best_a);
            for (const auto& [x, w] : between[b]) {
                between[a][x] += w;
                auto& back = between[static_cast<std::size_t>(x)];
                back.erase(best_b);
                back[best_a] += w;
            }
            between[b].clear();
            alive[b] = 0;
            parent[b] = best_a;
            result.modularity_trace.push_back(current_modularity());
        }
    }

    std::vector<int> label(n);
    for (std::size_t i = 0; i < n; ++i) {
        int r = static_cast<int>(i);
        while (parent[static_cast<std::size_t>(r)] != r) r = parent[static_cast<std::size_t>(r)];
        label[i] = r;
    }
    result.partition = Partition(label);
    return result;
}

Partition detect_communities(CommunityAlgorithm algorithm, const SocialGraph& graph,
                             const std::vector<TieWeight>& weights, int max_rounds, std::uint64_t seed) {
    switch (algorithm) {
        case CommunityAlgorithm::ChineseWhispers: return chinese_whispers(graph, weights, max_rounds, seed).partition;
        case CommunityAlgorithm::Agglomerative: return agglomerative_modularity(graph, weights).partition;
    }
    throw ContractViolation("detect_communities: unknown algorithm");
}

}  // namespace fcmreduce
