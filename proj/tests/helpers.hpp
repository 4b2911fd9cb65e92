#pragma once

#include <string>
#include <vector>

#include "fcmreduce/fcm.hpp"
#include "fcmreduce/rng.hpp"

namespace testing {

using fcmreduce::Fcm;

inline std::vector<std::string> labels(int n, const std::string& prefix = "c") {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

// Random FCM over a random subset of a shared label pool: size in [lo, hi],
// each off-diagonal edge present with probability p, weights in [-1, 1].
inline Fcm random_fcm(fcmreduce::Rng& rng, int lo = 3, int hi = 9, double p = 0.3) {
    const int n = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
    auto pool = labels(hi + 3);
    rng.shuffle(pool);
    pool.resize(static_cast<std::size_t>(n));
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j && rng.bernoulli(p)) w(i, j) = rng.uniform(-1.0, 1.0);
        }
    }
    Eigen::VectorXd a(n);
    for (int i = 0; i < n; ++i) a(i) = rng.uniform();
    return Fcm(pool, w, a);
}

// FCM with no edges and the given activations.
inline Fcm flat_fcm(const std::vector<std::string>& concepts, const std::vector<double>& activation) {
    const auto n = static_cast<Eigen::Index>(concepts.size());
    Eigen::VectorXd a(n);
    for (Eigen::Index i = 0; i < n; ++i) a(i) = activation[static_cast<std::size_t>(i)];
    return Fcm(concepts, Eigen::MatrixXd::Zero(n, n), a);
}

}  // namespace testing
