#pragma once

// Brute-force reference implementations shared by the unit and acceptance tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "fcmreduce/similarity.hpp"

namespace testing {

using fcmreduce::Digraph;
using fcmreduce::Index;
using fcmreduce::TriadCensus;
using fcmreduce::triad_names;

// Triad oracle: each class is given by one hand-drawn representative on nodes
// {0, 1, 2}; a triple is classified by comparing canonical forms, the minimum
// adjacency code over all six relabelings.
inline int code_of(const std::array<std::array<int, 3>, 3>& a, const std::array<int, 3>& perm) {
    int code = 0;
    int bit = 0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            if (a[perm[i]][perm[j]]) code |= 1 << bit;
            ++bit;
        }
    }
    return code;
}

inline int canonical(const std::array<std::array<int, 3>, 3>& a) {
    std::array<int, 3> perm{0, 1, 2};
    int best = 1 << 10;
    do {
        best = std::min(best, code_of(a, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline std::map<int, std::string> triad_oracle_table() {
    using E = std::vector<std::pair<int, int>>;
    const std::vector<std::pair<std::string, E>> reps = {
        {"003", {}},
        {"012", {{0, 1}}},
        {"102", {{0, 1}, {1, 0}}},
        {"021D", {{1, 0}, {1, 2}}},
        {"021U", {{0, 1}, {2, 1}}},
        {"021C", {{0, 1}, {1, 2}}},
        {"111D", {{0, 1}, {1, 0}, {2, 1}}},
        {"111U", {{0, 1}, {1, 0}, {1, 2}}},
        {"030T", {{0, 1}, {1, 2}, {0, 2}}},
        {"030C", {{0, 1}, {1, 2}, {2, 0}}},
        {"201", {{0, 1}, {1, 0}, {1, 2}, {2, 1}}},
        {"120D", {{1, 0}, {1, 2}, {0, 2}, {2, 0}}},
        {"120U", {{0, 1}, {2, 1}, {0, 2}, {2, 0}}},
        {"120C", {{0, 1}, {1, 2}, {0, 2}, {2, 0}}},
        {"210", {{0, 1}, {1, 2}, {2, 1}, {0, 2}, {2, 0}}},
        {"300", {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}, {2, 0}}},
    };
    std::map<int, std::string> table;
    for (const auto& [name, edges] : reps) {
        std::array<std::array<int, 3>, 3> a{};
        for (auto [i, j] : edges) a[i][j] = 1;
        table[canonical(a)] = name;
    }
    return table;
}

inline TriadCensus brute_census(const Digraph& g) {
    static const auto table = triad_oracle_table();
    TriadCensus census{};
    const Index n = g.size();
    for (Index u = 0; u < n; ++u) {
        for (Index v = u + 1; v < n; ++v) {
            for (Index w = v + 1; w < n; ++w) {
                const std::array<Index, 3> nodes{u, v, w};
                std::array<std::array<int, 3>, 3> a{};
                for (int i = 0; i < 3; ++i) {
                    for (int j = 0; j < 3; ++j) a[i][j] = i != j && g.adj(nodes[i], nodes[j]);
                }
                const auto& name = table.at(canonical(a));
                const auto k = std::find_if(triad_names.begin(), triad_names.end(),
                                            [&](const char* s) { return name == s; }) -
                               triad_names.begin();
                census[static_cast<std::size_t>(k)]++;
            }
        }
    }
    return census;
}

// KS oracle: evaluate both empirical CDFs at every sample point.
inline double brute_ks(const std::vector<double>& a, const std::vector<double>& b) {
    auto cdf = [](const std::vector<double>& s, double x) {
        return static_cast<double>(std::count_if(s.begin(), s.end(), [&](double v) { return v <= x; })) /
               static_cast<double>(s.size());
    };
    double best = 0.0;
    for (const auto* s : {&a, &b}) {
        for (double x : *s) best = std::max(best, std::abs(cdf(a, x) - cdf(b, x)));
    }
    return best;
}

}  // namespace testing
