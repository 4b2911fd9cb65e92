#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fcmreduce/fcm.hpp"
#include "fcmreduce/population.hpp"

namespace fcmreduce {

struct RunSpec {
    int rounds = 10;
    int repeats = 100;
    std::string output_concept;
    std::uint64_t master_seed = 0;
    SimulationSettings settings{"Obesity"};

    void validate() const;
};

struct OutputDistribution {
    std::vector<double> samples;
};

/// The influence rule for one interaction over `channel`: if the low agent's
/// channel value is strictly below the high agent's, it is raised to that
/// value and the low agent's map is simulated to stabilization. Returns the
/// low agent's new activation (unchanged otherwise). The high agent never
/// changes.
ActivationVector interact(const Fcm& low_fcm, const ActivationVector& low, const Fcm& high_fcm,
                          const ActivationVector& high, const std::string& channel,
                          const SimulationSettings& settings);

/// One stochastic run: activations start from each map's initial values;
/// every round visits every tie once in a shuffled order and lets the
/// higher-valued endpoint influence the lower one. Returns the population
/// mean of the output concept after the last round.
double run_once(const std::vector<Agent>& agents, const SocialGraph& graph, const RunSpec& spec,
                std::uint64_t run_seed);

/// Seed of run `index` under `master_seed`.
std::uint64_t run_seed(std::uint64_t master_seed, std::size_t index);

/// `spec.repeats` independent runs, sample i using run_seed(master_seed, i).
/// Samples do not depend on `threads`.
OutputDistribution run_distribution(const std::vector<Agent>& agents, const SocialGraph& graph, const RunSpec& spec,
                                    int threads = 1);

}  // namespace fcmreduce
