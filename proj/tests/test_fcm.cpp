#include <doctest.h>

#include <cmath>

#include "fcmreduce/fcm.hpp"
#include "helpers.hpp"

using namespace fcmreduce;

TEST_CASE("fcm rejects broken invariants") {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(2);
    CHECK_NOTHROW(Fcm({"a", "b"}, w, a));
    CHECK_THROWS_AS(Fcm({"a", "a"}, w, a), ContractViolation);
    CHECK_THROWS_AS(Fcm({"a", ""}, w, a), ContractViolation);
    CHECK_THROWS_AS(Fcm({"a"}, w, a), ContractViolation);
    Eigen::MatrixXd bad = w;
    bad(0, 1) = 1.5;
    CHECK_THROWS_AS(Fcm({"a", "b"}, bad, a), ContractViolation);
    Eigen::VectorXd high = a;
    high(1) = 1.01;
    CHECK_THROWS_AS(Fcm({"a", "b"}, w, high), ContractViolation);
    // A self-loop is allowed when explicitly set.
    Eigen::MatrixXd loop = w;
    loop(0, 0) = 0.3;
    CHECK(Fcm({"a", "b"}, loop, a).edge_count() == 1);
}

TEST_CASE("settings reject nonsense") {
    CHECK_THROWS_AS(SimulationSettings("x", 0), ConfigError);
    CHECK_THROWS_AS(SimulationSettings("x", 10, 0.0), ConfigError);
    CHECK_THROWS_AS(SimulationSettings("", 10, 0.05), ConfigError);
    const SimulationSettings s("x");
    CHECK(s.max_iterations() == 100);
    CHECK(s.tolerance() == 0.05);
}

TEST_CASE("step on hand-evaluated cases") {
    const SimulationSettings s("c0");
    SUBCASE("single concept") {
        const Fcm f({"c0"}, Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, 0.5));
        const auto out = step(f, f.initial_activation(), s);
        CHECK(out(0) == doctest::Approx(0.46211715726).epsilon(1e-10));
    }
    SUBCASE("one edge, both receive input 1") {
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
        w(0, 1) = 1.0;
        Eigen::VectorXd a(2);
        a << 1.0, 0.0;
        const Fcm f({"c0", "c1"}, w, a);
        const auto out = step(f, a, s);
        CHECK(out(0) == doctest::Approx(std::tanh(1.0)));
        CHECK(out(1) == doctest::Approx(0.76159415595));
        CHECK(a(0) == 1.0);  // input untouched
    }
    SUBCASE("negative input is clamped to zero") {
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
        w(0, 1) = -1.0;
        Eigen::VectorXd a(2);
        a << 1.0, 0.2;
        const auto out = step(Fcm({"c0", "c1"}, w, a), a, s);
        CHECK(out(1) == 0.0);
    }
    SUBCASE("weighted sum only drops the self term") {
        const Fcm f({"c0"}, Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, 0.5));
        const SimulationSettings ws("c0", 100, 0.05, Transfer::RectifiedTanh, UpdateRule::WeightedSumOnly);
        CHECK(step(f, f.initial_activation(), ws)(0) == 0.0);
    }
    SUBCASE("dimension mismatch") {
        const Fcm f({"c0"}, Eigen::MatrixXd::Zero(1, 1));
        CHECK_THROWS_AS(step(f, Eigen::VectorXd(Eigen::VectorXd::Zero(2)), s), ContractViolation);
    }
}

TEST_CASE("simulate stopping rule") {
    SUBCASE("zero activation stabilizes at the first iteration") {
        Rng rng(3);
        const auto f = testing::random_fcm(rng, 5, 5, 0.8);
        const SimulationSettings s(f.concept_label(0));
        const auto r = simulate(f, Eigen::VectorXd(Eigen::VectorXd::Zero(5)), s);
        CHECK(r.iterations == 1);
        CHECK(r.stabilized);
        CHECK(r.activation.isZero());
    }
    SUBCASE("single concept decays until the change drops below tolerance") {
        const Fcm f({"c0"}, Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, 0.9));
        const auto r = simulate(f, f.initial_activation(), SimulationSettings("c0"));
        // Oracle: iterate tanh by hand.
        double x = 0.9;
        int t = 0;
        for (;;) {
            const double y = std::tanh(x);
            ++t;
            const double change = std::abs(y - x);
            x = y;
            if (change < 0.05) break;
        }
        CHECK(r.iterations == t);
        CHECK(r.activation(0) == x);
        CHECK(r.stabilized);
    }
    SUBCASE("cap is honored") {
        const Fcm f({"c0"}, Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, 0.9));
        const auto r = simulate(f, f.initial_activation(), SimulationSettings("c0", 2, 1e-12));
        CHECK(r.iterations == 2);
        CHECK_FALSE(r.stabilized);
    }
    SUBCASE("unknown stabilization concept") {
        const Fcm f({"c0"}, Eigen::MatrixXd::Zero(1, 1));
        CHECK_THROWS_AS(simulate(f, f.initial_activation(), SimulationSettings("nope")), ConfigError);
    }
}

TEST_CASE("step properties over random maps") {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const auto f = testing::random_fcm(rng, 2, 12, 0.5);
        const SimulationSettings s(f.concept_label(0), 100, 0.05);
        const auto out = step(f, f.initial_activation(), s);
        CHECK((out.array() >= 0.0).all());
        CHECK((out.array() <= 1.0).all());
        CHECK(step(f, Eigen::VectorXd(Eigen::VectorXd::Zero(f.size())), s).isZero());
        const auto r1 = simulate(f, f.initial_activation(), s);
        const auto r2 = simulate(f, f.initial_activation(), s);
        CHECK(r1.activation == r2.activation);
        CHECK(r1.iterations == r2.iterations);
        CHECK(r1.iterations <= 100);
    }
}

TEST_CASE("float instantiation") {
    using F = BasicFcm<float>;
    const F f({"c0"}, Eigen::MatrixXf::Zero(1, 1), Eigen::VectorXf::Constant(1, 0.5f));
    const auto r = simulate(f, f.initial_activation(), SimulationSettings("c0"));
    CHECK(r.stabilized);
    CHECK(r.activation(0) > 0.0f);
}
