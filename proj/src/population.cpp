#include "fcmreduce/population.hpp"

#include <algorithm>
#include <unordered_set>

#include "fcmreduce/rng.hpp"

namespace fcmreduce {

std::vector<Agent> make_agents(std::vector<Fcm> fcms) {
    std::vector<Agent> agents;
    agents.reserve(fcms.size());
    for (std::size_t i = 0; i < fcms.size(); ++i) {
        agents.push_back(Agent{static_cast<int>(i), std::move(fcms[i])});
    }
    return agents;
}

Tie::Tie(int a, int b) : first(std::min(a, b)), second(std::max(a, b)) {}

SocialGraph::SocialGraph(std::size_t n, std::vector<Tie> ties) : n_(n), ties_(std::move(ties)) {
    std::sort(ties_.begin(), ties_.end());
    for (std::size_t k = 0; k < ties_.size(); ++k) {
        const Tie& t = ties_[k];
        if (t.first == t.second) throw ContractViolation("graph: self-tie on agent " + std::to_string(t.first));
        if (t.first < 0 || static_cast<std::size_t>(t.second) >= n_) {
            throw ContractViolation("graph: tie {" + std::to_string(t.first) + "," + std::to_string(t.second) +
                                    "} out of range for " + std::to_string(n_) + " agents");
        }
        if (k > 0 && ties_[k - 1] == t) {
            throw ContractViolation("graph: duplicate tie {" + std::to_string(t.first) + "," +
                                    std::to_string(t.second) + "}");
        }
    }
}

SocialGraph::SocialGraph(std::size_t n, std::vector<Tie> ties, std::vector<std::string> channels) {
    if (channels.size() != ties.size()) throw ContractViolation("graph: one channel per tie required");
    std::vector<std::size_t> order(ties.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ties[a] < ties[b]; });
    std::vector<Tie> sorted_ties;
    std::vector<std::string> sorted_channels;
    sorted_ties.reserve(ties.size());
    sorted_channels.reserve(ties.size());
    for (auto k : order) {
        sorted_ties.push_back(ties[k]);
        sorted_channels.push_back(std::move(channels[k]));
    }
    *this = SocialGraph(n, std::move(sorted_ties));
    channels_ = std::move(sorted_channels);
}

long SocialGraph::find(int a, int b) const {
    const Tie key(a, b);
    auto it = std::lower_bound(ties_.begin(), ties_.end(), key);
    if (it == ties_.end() || *it != key) return -1;
    return static_cast<long>(it - ties_.begin());
}

std::vector<std::size_t> SocialGraph::degrees() const {
    std::vector<std::size_t> deg(n_, 0);
    for (const auto& t : ties_) {
        ++deg[static_cast<std::size_t>(t.first)];
        ++deg[static_cast<std::size_t>(t.second)];
    }
    return deg;
}

std::vector<std::vector<int>> SocialGraph::adjacency() const {
    std::vector<std::vector<int>> adj(n_);
    for (const auto& t : ties_) {
        adj[static_cast<std::size_t>(t.first)].push_back(t.second);
        adj[static_cast<std::size_t>(t.second)].push_back(t.first);
    }
    return adj;
}

SocialGraph SocialGraph::with_channels(std::vector<std::string> channels) const {
    if (channels.size() != ties_.size()) throw ContractViolation("graph: one channel per tie required");
    SocialGraph g = *this;
    g.channels_ = std::move(channels);
    return g;
}

std::string to_string(TopologyKind kind) {
    switch (kind) {
        case TopologyKind::Random: return "random";
        case TopologyKind::SmallWorld: return "small_world";
        case TopologyKind::ScaleFree: return "scale_free";
    }
    return "?";
}

TopologyKind parse_topology_kind(const std::string& name) {
    if (name == "random") return TopologyKind::Random;
    if (name == "small_world") return TopologyKind::SmallWorld;
    if (name == "scale_free") return TopologyKind::ScaleFree;
    throw ConfigError("unknown topology '" + name + "' (valid: random, small_world, scale_free)");
}

// ---------------------------------------------------------------------------

Fcm build_obesity_fcm() {
    const std::vector<std::string> concepts = {
        "Age",
        "Income",
        "Fatness perceived as negative",
        "Belief in personal responsibility",
        "Obesity",
        "Weight discrimination",
        "Exercise",
        "Depression",
        "Anti-depressants",
        "Food intake",
        "Knowledge",
        "Stress",
        "Physical health",
    };
    struct Edge {
        const char* source;
        const char* target;
        double weight;
    };
    static constexpr Edge edges[] = {
        {"Age", "Exercise", -0.44},
        {"Income", "Exercise", 0.548},
        {"Income", "Fatness perceived as negative", 0.478},
        {"Fatness perceived as negative", "Weight discrimination", 0.739},
        {"Belief in personal responsibility", "Weight discrimination", 0.578},
        {"Obesity", "Weight discrimination", 0.84},
        {"Obesity", "Physical health", -0.795},
        {"Weight discrimination", "Depression", 0.732},
        {"Exercise", "Depression", -0.649},
        {"Exercise", "Obesity", -0.638},
        {"Exercise", "Physical health", 0.860},
        {"Depression", "Anti-depressants", 0.592},
        {"Anti-depressants", "Obesity", 0.528},
        {"Anti-depressants", "Food intake", 0.526},
        {"Food intake", "Obesity", 0.637},
        {"Knowledge", "Food intake", -0.5},
        {"Knowledge", "Exercise", 0.5},
        {"Stress", "Depression", 0.54},
        {"Stress", "Food intake", 0.607},
        {"Stress", "Physical health", -0.694},
    };
    const auto n = static_cast<Index>(concepts.size());
    auto index = [&](const char* label) {
        return static_cast<Index>(std::find(concepts.begin(), concepts.end(), label) - concepts.begin());
    };
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : edges) w(index(e.source), index(e.target)) = e.weight;
    return Fcm(concepts, std::move(w), Eigen::VectorXd::Constant(n, 0.5));
}

const std::vector<std::string>& cmaes_concepts() {
    static const std::vector<std::string> labels = {
        "Awareness",
        "Attitude",
        "Attitude price",
        "Self-efficacy: can eat more fruit",
        "Self-efficacy: difficult to eat more fruit",
        "Social influence: should eat fruit",
        "Social influence: peers eat fruit",
        "Intention",
        "Action planning: when",
        "Action planning: which",
        "Action planning: how many",
        "Coping planning: interference",
        "Coping planning: difficulty",
        "Perceived availability",
        "Visibility at home",
    };
    return labels;
}

std::vector<Fcm> generate_variants(const Fcm& base, int count, double jitter, std::uint64_t seed) {
    if (count < 1) throw ConfigError("generate_variants: count must be >= 1");
    if (!(jitter >= 0.0)) throw ConfigError("generate_variants: jitter must be >= 0");
    Rng rng(seed);
    std::vector<Fcm> out;
    out.reserve(static_cast<std::size_t>(count));
    const auto n = base.size();
    for (int v = 0; v < count; ++v) {
        Eigen::MatrixXd w = base.weights();
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
                if (w(i, j) == 0.0) continue;
                const double perturbed = std::clamp(w(i, j) + rng.uniform(-jitter, jitter), -1.0, 1.0);
                // A jittered weight must not vanish, or the variant would lose an edge.
                w(i, j) = perturbed == 0.0 ? w(i, j) : perturbed;
            }
        }
        out.push_back(base.with_weights(std::move(w)));
    }
    return out;
}

std::vector<Fcm> generate_cmaes_style(int count, std::uint64_t seed) {
    if (count < 1) throw ConfigError("generate_cmaes_style: count must be >= 1");
    const auto& labels = cmaes_concepts();
    const auto n = static_cast<Index>(labels.size());
    Rng rng(seed);
    std::vector<Fcm> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int v = 0; v < count; ++v) {
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
                if (i == j) continue;
                double x = 0.0;
                while (x == 0.0) x = rng.uniform(-1.0, 1.0);
                w(i, j) = x;
            }
        }
        Eigen::VectorXd a(n);
        for (Index i = 0; i < n; ++i) a(i) = rng.uniform();
        out.emplace_back(labels, std::move(w), std::move(a));
    }
    return out;
}

std::vector<Fcm> randomize_activations(std::vector<Fcm> fcms, std::uint64_t seed) {
    Rng rng(seed);
    for (auto& f : fcms) {
        Eigen::VectorXd a(f.size());
        for (Index i = 0; i < a.size(); ++i) a(i) = rng.uniform();
        f = f.with_activation(std::move(a));
    }
    return fcms;
}

// ---------------------------------------------------------------------------

namespace {

bool has_isolated(std::size_t n, const std::vector<Tie>& ties) {
    std::vector<char> touched(n, 0);
    for (const auto& t : ties) {
        touched[static_cast<std::size_t>(t.first)] = 1;
        touched[static_cast<std::size_t>(t.second)] = 1;
    }
    return std::find(touched.begin(), touched.end(), 0) != touched.end();
}

std::vector<Tie> erdos_renyi(std::size_t n, double p, Rng& rng) {
    std::vector<Tie> ties;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (rng.bernoulli(p)) ties.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    }
    return ties;
}

std::vector<Tie> watts_strogatz(std::size_t n, int k, double beta, Rng& rng) {
    const int half = k / 2;
    std::vector<std::unordered_set<int>> adj(n);
    auto link = [&](int a, int b) {
        adj[static_cast<std::size_t>(a)].insert(b);
        adj[static_cast<std::size_t>(b)].insert(a);
    };
    auto unlink = [&](int a, int b) {
        adj[static_cast<std::size_t>(a)].erase(b);
        adj[static_cast<std::size_t>(b)].erase(a);
    };
    const int nn = static_cast<int>(n);
    for (int i = 0; i < nn; ++i) {
        for (int d = 1; d <= half; ++d) link(i, (i + d) % nn);
    }
    // Rewire each lattice edge (i, i+d) with probability beta to a uniform
    // target, avoiding self-loops and duplicates.
    for (int d = 1; d <= half; ++d) {
        for (int i = 0; i < nn; ++i) {
            if (!rng.bernoulli(beta)) continue;
            const int old_target = (i + d) % nn;
            auto& nbrs = adj[static_cast<std::size_t>(i)];
            if (!nbrs.count(old_target)) continue;
            if (static_cast<int>(nbrs.size()) >= nn - 1) continue;
            int target = i;
            while (target == i || nbrs.count(target)) target = static_cast<int>(rng.below(n));
            unlink(i, old_target);
            link(i, target);
        }
    }
    std::vector<Tie> ties;
    for (int i = 0; i < nn; ++i) {
        for (int j : adj[static_cast<std::size_t>(i)]) {
            if (i < j) ties.emplace_back(i, j);
        }
    }
    return ties;
}

std::vector<Tie> barabasi_albert(std::size_t n, int m, Rng& rng) {
    std::vector<Tie> ties;
    // Every tie contributes both endpoints; uniform draws from this list are
    // degree-proportional.
    std::vector<int> endpoints;
    const int mm = m;
    for (int i = 0; i < mm; ++i) {
        for (int j = i + 1; j < mm; ++j) {
            ties.emplace_back(i, j);
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    }
    for (int v = mm; v < static_cast<int>(n); ++v) {
        std::vector<int> targets;
        while (static_cast<int>(targets.size()) < mm) {
            const int t = endpoints.empty() ? static_cast<int>(rng.below(static_cast<std::uint64_t>(v)))
                                            : endpoints[rng.below(endpoints.size())];
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
        }
        for (int t : targets) {
            ties.emplace_back(t, v);
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
    }
    return ties;
}

void check_spec(const TopologySpec& spec) {
    if (spec.n < 2) throw ConfigError("topology: need at least 2 agents");
    if (spec.max_attempts < 1) throw ConfigError("topology: max_attempts must be >= 1");
    switch (spec.kind) {
        case TopologyKind::Random:
            if (!(spec.edge_probability >= 0.0 && spec.edge_probability <= 1.0)) {
                throw ConfigError("topology: edge probability must lie in [0, 1]");
            }
            break;
        case TopologyKind::SmallWorld:
            if (spec.ring_degree < 2 || spec.ring_degree % 2 != 0 ||
                static_cast<std::size_t>(spec.ring_degree) >= spec.n) {
                throw ConfigError("topology: small_world ring degree must be even, >= 2 and < n");
            }
            if (!(spec.rewiring >= 0.0 && spec.rewiring <= 1.0)) {
                throw ConfigError("topology: rewiring probability must lie in [0, 1]");
            }
            break;
        case TopologyKind::ScaleFree:
            if (spec.attachment < 1 || static_cast<std::size_t>(spec.attachment) >= spec.n) {
                throw ConfigError("topology: scale_free attachment count must be >= 1 and < n");
            }
            break;
    }
}

}  // namespace

SocialGraph build_topology(const TopologySpec& spec) {
    check_spec(spec);
    if (spec.kind == TopologyKind::Random && spec.edge_probability == 0.0) {
        throw GenerationError("topology: random graph with p = 0 leaves every agent isolated");
    }
    for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
        Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
        std::vector<Tie> ties;
        switch (spec.kind) {
            case TopologyKind::Random: ties = erdos_renyi(spec.n, spec.edge_probability, rng); break;
            case TopologyKind::SmallWorld: ties = watts_strogatz(spec.n, spec.ring_degree, spec.rewiring, rng); break;
            case TopologyKind::ScaleFree: ties = barabasi_albert(spec.n, spec.attachment, rng); break;
        }
        if (!has_isolated(spec.n, ties)) return SocialGraph(spec.n, std::move(ties));
    }
    throw GenerationError("topology: " + to_string(spec.kind) + " generator left isolated agents after " +
                          std::to_string(spec.max_attempts) + " attempts");
}

std::vector<std::string> shared_labels(const Fcm& a, const Fcm& b) {
    std::vector<std::string> out;
    for (const auto& label : a.concepts()) {
        if (b.has_concept(label)) out.push_back(label);
    }
    return out;
}

SocialGraph assign_channels(const SocialGraph& graph, const std::vector<Agent>& agents, std::uint64_t seed) {
    if (agents.size() != graph.size()) {
        throw ContractViolation("assign_channels: " + std::to_string(agents.size()) + " agents for a graph of " +
                                std::to_string(graph.size()));
    }
    Rng rng(seed);
    std::vector<std::string> channels;
    channels.reserve(graph.tie_count());
    for (const auto& t : graph.ties()) {
        const auto labels = shared_labels(agents[static_cast<std::size_t>(t.first)].fcm,
                                          agents[static_cast<std::size_t>(t.second)].fcm);
        if (labels.empty()) {
            throw ChannelError("assign_channels: agents " + std::to_string(t.first) + " and " +
                               std::to_string(t.second) + " share no concept");
        }
        channels.push_back(labels[rng.below(labels.size())]);
    }
    return graph.with_channels(std::move(channels));
}

}  // namespace fcmreduce
