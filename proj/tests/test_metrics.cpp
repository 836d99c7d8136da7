#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "test_support.hpp"
#include "tracetopo/errors.hpp"
#include "tracetopo/metrics.hpp"

using namespace tracetopo;

namespace {

PersistenceDiagram diagram_with(std::vector<PersistenceBar> bars, double eps_max = 100.0,
                                bool full_merge = true) {
    PersistenceDiagram d;
    d.bars = std::move(bars);
    d.max_dim = 1;
    d.eps_max = eps_max;
    d.full_merge = full_merge;
    return d;
}

PersistenceBar bar(int dim, double birth, double death) { return {dim, birth, death, false}; }

PersistenceBar inf_bar(int dim, double birth) {
    return {dim, birth, std::numeric_limits<double>::infinity(), true};
}

}  // namespace

TEST_CASE("lifetime statistics closed forms") {
    const auto d = diagram_with({bar(0, 0.0, 1.0), bar(0, 0.0, 3.0)});
    const auto s = lifetime_statistics(d, 0, InfinitePolicy::exclude);
    CHECK(s.total == 4.0);
    CHECK(s.mean == 2.0);
    CHECK(s.max == 3.0);
    CHECK(s.variance == 1.0);

    const auto single = lifetime_statistics(diagram_with({bar(0, 0.0, 2.0)}), 0, InfinitePolicy::exclude);
    CHECK(single.total == 2.0);
    CHECK(single.mean == 2.0);
    CHECK(single.max == 2.0);
    CHECK(single.variance == 0.0);

    const auto empty = lifetime_statistics(diagram_with({}), 0, InfinitePolicy::exclude);
    CHECK(empty.total == 0.0);
    CHECK(empty.mean == 0.0);
    CHECK(empty.max == 0.0);
    CHECK(empty.variance == 0.0);
}

TEST_CASE("infinite-bar policies") {
    const auto d = diagram_with({bar(0, 0.0, 1.0), inf_bar(0, 0.0)}, 5.0);
    const auto excluded = lifetime_statistics(d, 0, InfinitePolicy::exclude);
    CHECK(excluded.sample_count == 1);
    CHECK(excluded.total == 1.0);
    const auto truncated = lifetime_statistics(d, 0, InfinitePolicy::truncate);
    CHECK(truncated.sample_count == 2);
    CHECK(truncated.total == 6.0);
    CHECK(truncated.max == 5.0);
}

TEST_CASE("persistent entropy closed forms") {
    const auto equal = diagram_with({bar(1, 0.0, 2.0), bar(1, 1.0, 3.0)});
    CHECK(persistent_entropy(equal, 1, InfinitePolicy::exclude) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));

    const auto single = diagram_with({bar(1, 0.0, 2.0)});
    CHECK(persistent_entropy(single, 1, InfinitePolicy::exclude) == 0.0);

    const auto skewed = diagram_with({bar(1, 0.0, 1.0), bar(1, 0.0, 3.0)});
    CHECK(persistent_entropy(skewed, 1, InfinitePolicy::exclude) ==
          doctest::Approx(0.5623351446188083).epsilon(1e-9));

    CHECK_THROWS_AS(persistent_entropy(diagram_with({}), 1, InfinitePolicy::exclude), NumericError);
    CHECK_THROWS_AS(persistent_entropy(diagram_with({inf_bar(1, 0.0)}), 1, InfinitePolicy::exclude),
                    NumericError);
}

TEST_CASE("entropy bounds with uniform maximizer") {
    DeterministicRng rng(51);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(1, 12);
        std::vector<PersistenceBar> bars;
        for (int i = 0; i < n; ++i) {
            const double birth = rng.uniform(0.0, 2.0);
            bars.push_back(bar(1, birth, birth + rng.uniform(0.01, 4.0)));
        }
        const double h = persistent_entropy(diagram_with(std::move(bars)), 1, InfinitePolicy::exclude);
        CHECK(h >= -1e-12);
        CHECK(h <= std::log(static_cast<double>(n)) + 1e-12);
    }
    // equality at equal lifetimes
    std::vector<PersistenceBar> uniform;
    for (int i = 0; i < 7; ++i) uniform.push_back(bar(1, static_cast<double>(i), i + 2.5));
    CHECK(persistent_entropy(diagram_with(std::move(uniform)), 1, InfinitePolicy::exclude) ==
          doctest::Approx(std::log(7.0)).epsilon(1e-12));
}

TEST_CASE("feature_count thresholds and monotonicity") {
    const auto d = diagram_with({bar(0, 0.0, 1.0), bar(0, 0.0, 1.0), bar(0, 0.0, 1.0), inf_bar(0, 0.0),
                                 bar(1, 1.0, std::sqrt(2.0))});
    CHECK(feature_count(d, 1, 0.0) == 1);
    CHECK(feature_count(d, 0, 0.0) == 4);
    CHECK(feature_count(d, 0, 1.5) == 1);  // only the essential bar survives
    CHECK_THROWS_AS(feature_count(d, 0, -1.0), ConfigError);

    DeterministicRng rng(52);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<PersistenceBar> bars;
        const int n = rng.uniform_int(0, 10);
        for (int i = 0; i < n; ++i) bars.push_back(bar(1, 0.0, rng.uniform(0.0, 3.0)));
        const auto diag = diagram_with(std::move(bars));
        int previous = feature_count(diag, 1, 0.0);
        for (double threshold : {0.5, 1.0, 2.0, 4.0}) {
            const int current = feature_count(diag, 1, threshold);
            CHECK(current <= previous);
            previous = current;
        }
    }
}

TEST_CASE("stable component count and the eps-limited flag") {
    const auto merged = diagram_with({bar(0, 0.0, 1.0), inf_bar(0, 0.0)});
    const auto sc = stable_component_count(merged);
    CHECK(sc.count == 1);
    CHECK_FALSE(sc.eps_limited);

    const auto capped = diagram_with({inf_bar(0, 0.0), inf_bar(0, 0.0)}, 1.0, false);
    const auto sc2 = stable_component_count(capped);
    CHECK(sc2.count == 2);
    CHECK(sc2.eps_limited);
}

TEST_CASE("build_report populates blocks and keeps the L = N * mean identity") {
    const auto d = diagram_with({bar(0, 0.0, 1.0), bar(0, 0.0, 1.0), bar(0, 0.0, 1.0), inf_bar(0, 0.0),
                                 bar(1, 1.0, std::sqrt(2.0))});
    ReportProvenance meta;
    const auto report = build_report(d, {0, 1}, meta);
    CHECK(report.dims.at(0).count == 4);
    CHECK(report.dims.at(1).count == 1);
    CHECK(report.dims.at(1).stats.total == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
    CHECK(report.dims.at(1).stats.max == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
    CHECK(report.stable.count == 1);
    CHECK(report.dims.at(0).entropy.has_value());

    // empty dimension: all-zero block, entropy null with reason
    const auto no_loops = diagram_with({inf_bar(0, 0.0)});
    const auto r2 = build_report(no_loops, {0, 1}, meta);
    CHECK(r2.dims.at(1).count == 0);
    CHECK(r2.dims.at(1).stats.total == 0.0);
    CHECK_FALSE(r2.dims.at(1).entropy.has_value());
    CHECK(!r2.dims.at(1).entropy_reason.empty());
    const std::string json_text = report_to_json(r2);
    CHECK(json_text.find("\"h1.entropy\": null") != std::string::npos);

    DeterministicRng rng(53);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<PersistenceBar> bars;
        const int n = rng.uniform_int(1, 9);
        for (int i = 0; i < n; ++i) bars.push_back(bar(0, 0.0, rng.uniform(0.1, 5.0)));
        const auto report3 = build_report(diagram_with(std::move(bars)), {0}, meta);
        const auto& s = report3.dims.at(0).stats;
        CHECK(s.total == doctest::Approx(s.sample_count * s.mean).epsilon(1e-9));
        CHECK(s.max >= s.mean);
        CHECK(s.variance >= 0.0);
    }
}

TEST_CASE("report flat fields carry dotted keys and a matching CSV row") {
    const auto d = diagram_with({bar(0, 0.0, 1.0), inf_bar(0, 0.0), bar(1, 1.0, 2.0)});
    ReportProvenance meta;
    const auto report = build_report(d, {0, 1}, meta, {0.5});
    const auto flat = report_flat_fields(report);
    CHECK(flat.count("h0.count") == 1);
    CHECK(flat.count("h1.entropy") == 1);
    CHECK(flat.count("h0.betti_at_0.5") == 1);
    CHECK(flat.at("h0.stable") == "1");

    const std::string header = report_csv_header(report);
    const std::string row = report_csv_row(report);
    CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
    CHECK(header.find("h0.count") != std::string::npos);
}
