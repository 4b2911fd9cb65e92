#include "fcmreduce/harness.hpp"

#include <numeric>

#include "fcmreduce/parallel.hpp"
#include "fcmreduce/rng.hpp"

namespace fcmreduce {

void RunSpec::validate() const {
    if (rounds < 1) throw ConfigError("run: rounds must be >= 1");
    if (repeats < 1) throw ConfigError("run: repeats must be >= 1");
    if (output_concept.empty()) throw ConfigError("run: output concept is empty");
}

namespace {

Index require_concept(const Fcm& f, const std::string& label, const char* what) {
    const auto idx = f.index_of(label);
    if (!idx) throw ContractViolation(std::string(what) + ": concept '" + label + "' missing from an agent's map");
    return *idx;
}

// Index-resolved view of a model, built once per distribution.
struct CompiledModel {
    struct Node {
        const Fcm* fcm;
        Index output;
        Index stabilization;
    };
    struct Link {
        std::size_t a;
        std::size_t b;
        Index channel_a;
        Index channel_b;
    };
    std::vector<Node> nodes;
    std::vector<Link> links;
};

CompiledModel compile(const std::vector<Agent>& agents, const SocialGraph& graph, const RunSpec& spec) {
    spec.validate();
    if (agents.size() != graph.size()) {
        throw ContractViolation("harness: " + std::to_string(agents.size()) + " agents for a graph of " +
                                std::to_string(graph.size()));
    }
    if (agents.empty()) throw ContractViolation("harness: empty population");
    if (!graph.has_channels()) throw ContractViolation("harness: graph has no channels assigned");
    CompiledModel model;
    model.nodes.reserve(agents.size());
    for (const auto& a : agents) {
        model.nodes.push_back({&a.fcm, require_concept(a.fcm, spec.output_concept, "output"),
                               require_concept(a.fcm, spec.settings.stabilization_concept(), "stabilization")});
    }
    model.links.reserve(graph.tie_count());
    for (std::size_t k = 0; k < graph.tie_count(); ++k) {
        const auto& t = graph.tie(k);
        const auto a = static_cast<std::size_t>(t.first);
        const auto b = static_cast<std::size_t>(t.second);
        model.links.push_back({a, b, require_concept(agents[a].fcm, graph.channel(k), "channel"),
                               require_concept(agents[b].fcm, graph.channel(k), "channel")});
    }
    return model;
}

double run_compiled(const CompiledModel& model, const RunSpec& spec, std::uint64_t seed) {
    std::vector<ActivationVector> state;
    state.reserve(model.nodes.size());
    for (const auto& node : model.nodes) state.push_back(node.fcm->initial_activation());

    std::vector<std::size_t> order(model.links.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    ActivationVector scratch;
    Rng rng(seed);
    for (int round = 0; round < spec.rounds; ++round) {
        rng.shuffle(order);
        for (auto k : order) {
            const auto& link = model.links[k];
            const double va = state[link.a](link.channel_a);
            const double vb = state[link.b](link.channel_b);
            if (va == vb) continue;
            const bool a_low = va < vb;
            const std::size_t low = a_low ? link.a : link.b;
            const Index channel = a_low ? link.channel_a : link.channel_b;
            auto& activation = state[low];
            activation(channel) = a_low ? vb : va;
            const auto& node = model.nodes[low];
            simulate_in_place(node.fcm->weights(), activation, scratch, node.stabilization, spec.settings);
        }
    }
    double total = 0.0;
    for (std::size_t i = 0; i < model.nodes.size(); ++i) total += state[i](model.nodes[i].output);
    return total / static_cast<double>(model.nodes.size());
}

}  // namespace

ActivationVector interact(const Fcm& low_fcm, const ActivationVector& low, const Fcm& high_fcm,
                          const ActivationVector& high, const std::string& channel,
                          const SimulationSettings& settings) {
    const Index cl = require_concept(low_fcm, channel, "interact");
    const Index ch = require_concept(high_fcm, channel, "interact");
    if (low.size() != low_fcm.size() || high.size() != high_fcm.size()) {
        throw ContractViolation("interact: activation length does not match its map");
    }
    const Index stab = require_concept(low_fcm, settings.stabilization_concept(), "interact");
    ActivationVector out = low;
    if (!(low(cl) < high(ch))) return out;
    out(cl) = high(ch);
    ActivationVector scratch;
    simulate_in_place(low_fcm.weights(), out, scratch, stab, settings);
    return out;
}

double run_once(const std::vector<Agent>& agents, const SocialGraph& graph, const RunSpec& spec,
                std::uint64_t seed) {
    return run_compiled(compile(agents, graph, spec), spec, seed);
}

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t index) {
    return derive_seed(master_seed, static_cast<std::uint64_t>(index));
}

OutputDistribution run_distribution(const std::vector<Agent>& agents, const SocialGraph& graph, const RunSpec& spec,
                                    int threads) {
    const auto model = compile(agents, graph, spec);
    OutputDistribution dist;
    dist.samples.assign(static_cast<std::size_t>(spec.repeats), 0.0);
    parallel_for(dist.samples.size(), threads, [&](std::size_t i) {
        dist.samples[i] = run_compiled(model, spec, run_seed(spec.master_seed, i));
    });
    return dist;
}

}  // namespace fcmreduce
