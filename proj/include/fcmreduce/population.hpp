#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fcmreduce/fcm.hpp"

namespace fcmreduce {

struct Agent {
    int id = 0;
    Fcm fcm;
};

/// Builds agents with dense ids 0..N-1 in list order.
std::vector<Agent> make_agents(std::vector<Fcm> fcms);

/// Undirected social tie, stored with first < second.
struct Tie {
    int first = 0;
    int second = 0;

    Tie() = default;
    Tie(int a, int b);

    friend auto operator<=>(const Tie&, const Tie&) = default;
};

/// Undirected interaction graph over agents 0..n-1. Ties are kept sorted and
/// unique. Each tie optionally carries an interaction channel: the concept
/// label both endpoints compare when they interact.
class SocialGraph {
public:
    SocialGraph() = default;
    SocialGraph(std::size_t n, std::vector<Tie> ties);
    SocialGraph(std::size_t n, std::vector<Tie> ties, std::vector<std::string> channels);

    std::size_t size() const noexcept { return n_; }
    std::size_t tie_count() const noexcept { return ties_.size(); }
    const std::vector<Tie>& ties() const noexcept { return ties_; }
    const Tie& tie(std::size_t k) const { return ties_.at(k); }

    bool has_channels() const noexcept { return !channels_.empty() || ties_.empty(); }
    const std::vector<std::string>& channels() const noexcept { return channels_; }
    const std::string& channel(std::size_t k) const { return channels_.at(k); }

    /// Index of tie {a, b} or -1.
    long find(int a, int b) const;

    std::vector<std::size_t> degrees() const;
    std::vector<std::vector<int>> adjacency() const;

    SocialGraph with_channels(std::vector<std::string> channels) const;

    friend bool operator==(const SocialGraph&, const SocialGraph&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Tie> ties_;
    std::vector<std::string> channels_;
};

enum class TopologyKind { Random, SmallWorld, ScaleFree };

std::string to_string(TopologyKind kind);
TopologyKind parse_topology_kind(const std::string& name);

/// Generator parameters. Only the fields of the selected kind are used.
struct TopologySpec {
    TopologyKind kind = TopologyKind::SmallWorld;
    std::size_t n = 0;
    double edge_probability = 0.01;  // random
    int ring_degree = 6;             // small_world, even
    double rewiring = 0.1;           // small_world
    int attachment = 3;              // scale_free
    std::uint64_t seed = 0;
    int max_attempts = 64;
};

// Case-study FCMs -----------------------------------------------------------

/// The 13-concept, 20-edge obesity map. Every concept starts at 0.5.
Fcm build_obesity_fcm();

/// The 15 concept labels of the fruit-intake (CMA-ES) case study.
const std::vector<std::string>& cmaes_concepts();

/// Copies of `base` whose nonzero weights are jittered uniformly by up to
/// +-jitter and clamped to [-1, 1]. Zero entries stay zero.
std::vector<Fcm> generate_variants(const Fcm& base, int count, double jitter, std::uint64_t seed);

/// Fully connected 15-concept maps, weights ~ U[-1, 1] off the diagonal and
/// initial activations ~ U[0, 1].
std::vector<Fcm> generate_cmaes_style(int count, std::uint64_t seed);

/// Replaces every map's initial activation with U[0, 1] draws.
std::vector<Fcm> randomize_activations(std::vector<Fcm> fcms, std::uint64_t seed);

// Topology ------------------------------------------------------------------

/// Erdos-Renyi, Watts-Strogatz or Barabasi-Albert graph. Graphs with isolated
/// nodes are redrawn (derived seeds) up to spec.max_attempts times.
///
/// Barabasi-Albert starts from a complete graph on m nodes, then each of the
/// remaining n - m nodes attaches to m distinct existing nodes, so the tie
/// count is m(m-1)/2 + (n-m)m.
SocialGraph build_topology(const TopologySpec& spec);

/// Draws one channel per tie uniformly from the labels both endpoints share.
SocialGraph assign_channels(const SocialGraph& graph, const std::vector<Agent>& agents, std::uint64_t seed);

/// Labels of `a` that also occur in `b`, in `a`'s concept order.
std::vector<std::string> shared_labels(const Fcm& a, const Fcm& b);

}  // namespace fcmreduce
