#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fcmreduce/analysis.hpp"
#include "fcmreduce/rng.hpp"

using namespace fcmreduce;

namespace {

// Sort-based oracle with linear interpolation between closest ranks.
double oracle_quantile(std::vector<double> x, double p) {
    std::sort(x.begin(), x.end());
    const double h = (static_cast<double>(x.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= x.size()) return x.back();
    return x[lo] + (h - static_cast<double>(lo)) * (x[lo + 1] - x[lo]);
}

}  // namespace

TEST_CASE("summaries") {
    SUBCASE("singleton") {
        const auto s = summarize({{0.5}});
        CHECK(s.mean == 0.5);
        CHECK(s.std == 0.0);
        CHECK((s.min == 0.5 && s.q25 == 0.5 && s.q50 == 0.5 && s.q75 == 0.5 && s.max == 0.5));
    }
    SUBCASE("two points") {
        const auto s = summarize({{1.0, 0.0}});
        CHECK(s.mean == 0.5);
        CHECK(s.min == 0.0);
        CHECK(s.max == 1.0);
        CHECK(s.std == doctest::Approx(std::sqrt(0.5)));
        CHECK(s.q25 == 0.25);
    }
    SUBCASE("against the sort oracle") {
        Rng rng(8);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> x(1 + rng.below(100));
            for (auto& v : x) v = rng.uniform();
            const auto s = summarize({x});
            double mean = 0.0;
            for (double v : x) mean += v;
            mean /= static_cast<double>(x.size());
            double ss = 0.0;
            for (double v : x) ss += (v - mean) * (v - mean);
            const double sd = x.size() > 1 ? std::sqrt(ss / (static_cast<double>(x.size()) - 1.0)) : 0.0;
            CHECK(s.mean == doctest::Approx(mean).epsilon(1e-12));
            CHECK(s.std == doctest::Approx(sd).epsilon(1e-12));
            CHECK(s.min == *std::min_element(x.begin(), x.end()));
            CHECK(s.max == *std::max_element(x.begin(), x.end()));
            CHECK(s.q25 == doctest::Approx(oracle_quantile(x, 0.25)).epsilon(1e-12));
            CHECK(s.q50 == doctest::Approx(oracle_quantile(x, 0.5)).epsilon(1e-12));
            CHECK(s.q75 == doctest::Approx(oracle_quantile(x, 0.75)).epsilon(1e-12));
            CHECK((s.min <= s.q25 && s.q25 <= s.q50 && s.q50 <= s.q75 && s.q75 <= s.max));
        }
    }
    SUBCASE("empty") { CHECK_THROWS_AS(summarize({}), UndefinedDistance); }
}

TEST_CASE("output KL") {
    const OutputDistribution a{{0.1, 0.2, 0.3, 0.4}};
    const OutputDistribution b{{0.1, 0.1, 0.4, 0.4}};
    CHECK(output_kl(a, a) == 0.0);
    CHECK(output_kl(a, b) > 0.0);
    CHECK(output_kl({{0.5, 0.5}}, {{0.5}}) == 0.0);  // zero-width range
    CHECK_THROWS_AS(output_kl({}, a), UndefinedDistance);
    // Direction: D(simplified || original).
    const OutputDistribution c{{0.1, 0.1, 0.1, 0.4}};
    CHECK(output_kl(a, c) != doctest::Approx(output_kl(c, a)));
    CHECK(output_kl(a, c) == doctest::Approx(kl_divergence(a.samples, c.samples, HistogramBins{0.1, 0.4, 20}, 1e-6)));
}

TEST_CASE("report") {
    const OutputDistribution a{{0.1, 0.2, 0.3, 0.4}};
    const auto r = build_report(a, a, 0, CommunityStats{4, 1.0, 1, 1}, {{"seed", 3}});
    CHECK(r.kl_divergence == 0.0);
    CHECK(r.removed_count == 0);
    const auto j = to_json(r);
    const auto back = report_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(nlohmann::json::parse(j.dump()) == j);
    for (const char* key : {"kl_divergence", "original", "simplified", "removed_count", "communities", "config"}) {
        CHECK(j.contains(key));
    }
}
