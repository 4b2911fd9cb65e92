#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <optional>
#include <tuple>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fcmreduce/error.hpp"

namespace fcmreduce {

using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Fuzzy cognitive map: labeled concepts, a causal weight matrix and the
/// initial activation vector. weights()(i, j) is the weight of edge i -> j.
///
/// Invariants checked on construction: labels are non-empty and pairwise
/// distinct, the matrix is square with one row per concept, every weight lies
/// in [-1, 1] and every activation lies in [0, 1].
template <typename Scalar>
class BasicFcm {
public:
    using Matrix = MatrixX<Scalar>;
    using Vector = VectorX<Scalar>;

    BasicFcm() = default;

    BasicFcm(std::vector<std::string> concepts, Matrix weights, Vector activation)
        : concepts_(std::move(concepts)), weights_(std::move(weights)), activation_(std::move(activation)) {
        validate();
    }

    /// Convenience: zero initial activation.
    BasicFcm(std::vector<std::string> concepts, Matrix weights)
        : concepts_(std::move(concepts)),
          weights_(std::move(weights)),
          activation_(Vector::Zero(static_cast<Index>(concepts_.size()))) {
        validate();
    }

    Index size() const noexcept { return static_cast<Index>(concepts_.size()); }
    const std::vector<std::string>& concepts() const noexcept { return concepts_; }
    const std::string& concept_label(Index i) const { return concepts_.at(static_cast<std::size_t>(i)); }
    const Matrix& weights() const noexcept { return weights_; }
    const Vector& initial_activation() const noexcept { return activation_; }

    std::optional<Index> index_of(const std::string& label) const {
        for (std::size_t i = 0; i < concepts_.size(); ++i) {
            if (concepts_[i] == label) return static_cast<Index>(i);
        }
        return std::nullopt;
    }

    bool has_concept(const std::string& label) const { return index_of(label).has_value(); }

    /// Number of nonzero entries in the weight matrix (diagonal included).
    Index edge_count() const { return (weights_.array() != Scalar(0)).count(); }

    BasicFcm with_weights(Matrix weights) const { return BasicFcm(concepts_, std::move(weights), activation_); }
    BasicFcm with_activation(Vector activation) const { return BasicFcm(concepts_, weights_, std::move(activation)); }

    friend bool operator==(const BasicFcm& a, const BasicFcm& b) {
        return a.concepts_ == b.concepts_ && a.weights_ == b.weights_ && a.activation_ == b.activation_;
    }

private:
    void validate() const {
        const auto n = size();
        if (weights_.rows() != n || weights_.cols() != n) {
            throw ContractViolation("fcm: weight matrix is " + std::to_string(weights_.rows()) + "x" +
                                    std::to_string(weights_.cols()) + " but there are " + std::to_string(n) +
                                    " concepts");
        }
        if (activation_.size() != n) {
            throw ContractViolation("fcm: activation length " + std::to_string(activation_.size()) +
                                    " does not match " + std::to_string(n) + " concepts");
        }
        std::unordered_set<std::string> seen;
        for (const auto& label : concepts_) {
            if (label.empty()) throw ContractViolation("fcm: empty concept label");
            if (!seen.insert(label).second) throw ContractViolation("fcm: duplicate concept label '" + label + "'");
        }
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
                const Scalar w = weights_(i, j);
                if (!(w >= Scalar(-1) && w <= Scalar(1))) {
                    throw ContractViolation("fcm: weight " + concepts_[i] + " -> " + concepts_[j] +
                                            " outside [-1, 1]");
                }
            }
            const Scalar a = activation_(i);
            if (!(a >= Scalar(0) && a <= Scalar(1))) {
                throw ContractViolation("fcm: activation of '" + concepts_[i] + "' outside [0, 1]");
            }
        }
    }

    std::vector<std::string> concepts_;
    Matrix weights_;
    Vector activation_;
};

using Fcm = BasicFcm<double>;
using ActivationVector = VectorX<double>;

enum class Transfer { RectifiedTanh };

/// How the previous activation enters the next one.
///   SelfMemory:      a'_j = f(a_j + sum_i w_ij a_i)
///   WeightedSumOnly: a'_j = f(sum_i w_ij a_i)
enum class UpdateRule { SelfMemory, WeightedSumOnly };

class SimulationSettings {
public:
    SimulationSettings(std::string stabilization_concept, int max_iterations = 100, double tolerance = 0.05,
                       Transfer transfer = Transfer::RectifiedTanh, UpdateRule rule = UpdateRule::SelfMemory)
        : stabilization_concept_(std::move(stabilization_concept)),
          max_iterations_(max_iterations),
          tolerance_(tolerance),
          transfer_(transfer),
          rule_(rule) {
        if (max_iterations_ < 1) throw ConfigError("simulation: max_iterations must be >= 1");
        if (!(tolerance_ > 0.0)) throw ConfigError("simulation: tolerance must be > 0");
        if (stabilization_concept_.empty()) throw ConfigError("simulation: stabilization concept is empty");
    }

    const std::string& stabilization_concept() const noexcept { return stabilization_concept_; }
    int max_iterations() const noexcept { return max_iterations_; }
    double tolerance() const noexcept { return tolerance_; }
    Transfer transfer() const noexcept { return transfer_; }
    UpdateRule update_rule() const noexcept { return rule_; }

private:
    std::string stabilization_concept_;
    int max_iterations_;
    double tolerance_;
    Transfer transfer_;
    UpdateRule rule_;
};

template <typename Scalar>
struct SimulationResult {
    VectorX<Scalar> activation;
    int iterations = 0;
    bool stabilized = false;
};

template <typename Scalar>
Scalar apply_transfer(Transfer, Scalar x) {
    using std::tanh;
    const Scalar y = tanh(x);
    return y < Scalar(0) ? Scalar(0) : (y > Scalar(1) ? Scalar(1) : y);
}

/// One synchronous update. Writes into `out`, which must not alias `a`.
template <typename Scalar>
void step_into(const MatrixX<Scalar>& weights, const VectorX<Scalar>& a, Transfer transfer, UpdateRule rule,
               VectorX<Scalar>& out) {
    out.noalias() = weights.transpose() * a;
    if (rule == UpdateRule::SelfMemory) out += a;
    for (Index j = 0; j < out.size(); ++j) out(j) = apply_transfer(transfer, out(j));
}

template <typename Scalar>
VectorX<Scalar> step(const BasicFcm<Scalar>& fcm, const VectorX<Scalar>& a, const SimulationSettings& settings) {
    if (a.size() != fcm.size()) {
        throw ContractViolation("step: activation has " + std::to_string(a.size()) + " entries, fcm has " +
                                std::to_string(fcm.size()) + " concepts");
    }
    VectorX<Scalar> out(a.size());
    step_into(fcm.weights(), a, settings.transfer(), settings.update_rule(), out);
    return out;
}

/// Iterates from `a` until the stabilization concept moves by less than the
/// tolerance between consecutive iterations, or max_iterations is reached.
/// `stabilization_index` must be a valid concept index.
/// In-place variant of simulate_from; `scratch` is resized as needed.
/// Returns (iterations, stabilized).
template <typename Scalar>
std::pair<int, bool> simulate_in_place(const MatrixX<Scalar>& weights, VectorX<Scalar>& a, VectorX<Scalar>& scratch,
                                       Index stabilization_index, const SimulationSettings& settings) {
    scratch.resize(a.size());
    const Scalar tolerance(settings.tolerance());
    for (int t = 1; t <= settings.max_iterations(); ++t) {
        step_into(weights, a, settings.transfer(), settings.update_rule(), scratch);
        using std::abs;
        const Scalar change = abs(scratch(stabilization_index) - a(stabilization_index));
        a.swap(scratch);
        if (change < tolerance) return {t, true};
    }
    return {settings.max_iterations(), false};
}

template <typename Scalar>
SimulationResult<Scalar> simulate_from(const MatrixX<Scalar>& weights, VectorX<Scalar> a, Index stabilization_index,
                                       const SimulationSettings& settings) {
    VectorX<Scalar> scratch;
    SimulationResult<Scalar> result;
    std::tie(result.iterations, result.stabilized) = simulate_in_place(weights, a, scratch, stabilization_index, settings);
    result.activation = std::move(a);
    return result;
}

template <typename Scalar>
SimulationResult<Scalar> simulate(const BasicFcm<Scalar>& fcm, const VectorX<Scalar>& a0,
                                  const SimulationSettings& settings) {
    const auto idx = fcm.index_of(settings.stabilization_concept());
    if (!idx) {
        throw ConfigError("simulate: stabilization concept '" + settings.stabilization_concept() +
                          "' is not in the fcm");
    }
    if (a0.size() != fcm.size()) {
        throw ContractViolation("simulate: activation has " + std::to_string(a0.size()) + " entries, fcm has " +
                                std::to_string(fcm.size()) + " concepts");
    }
    return simulate_from(fcm.weights(), a0, *idx, settings);
}

}  // namespace fcmreduce
