#include <cmath>

#include "doctest.h"
#include "test_support.hpp"
#include "tracetopo/errors.hpp"
#include "tracetopo/oracle.hpp"

using namespace tracetopo;

TEST_CASE("suite passes on the real engine and is deterministic per seed") {
    const auto a = run_oracle_suite(0, 100);
    CHECK(a.passed());
    CHECK(a.cases_run == 100);
    CHECK(a.comparisons == a.cases_run * 10);

    const auto b = run_oracle_suite(0, 100);
    CHECK(b.comparisons == a.comparisons);

    CHECK_THROWS_AS(run_oracle_suite(0, 0), ConfigError);
}

TEST_CASE("a death-shifting mutation is caught with a counterexample") {
    // Mutant engine: shifts every finite dimension-0 death to the cap.
    const PersistenceEngine mutant = [](const DistanceMatrix& dm, double eps_max, int max_dim) {
        auto diag = compute_persistence(build_rips(dm, eps_max, max_dim));
        for (auto& bar : diag.bars)
            if (bar.dim == 0 && !bar.infinite) bar.death = diag.eps_max;
        return diag;
    };
    const auto report = run_oracle_suite(3, 200, mutant);
    REQUIRE_FALSE(report.passed());
    const auto& ce = *report.counterexample;
    CHECK(ce.engine_betti != ce.oracle_betti);
    CHECK_FALSE(ce.cloud.empty());
    CHECK_FALSE(ce.filtration_dump.empty());
    CHECK(report.summary().find("mismatch") != std::string::npos);
}

TEST_CASE("a birth-perturbing mutation is caught") {
    const PersistenceEngine mutant = [](const DistanceMatrix& dm, double eps_max, int max_dim) {
        auto diag = compute_persistence(build_rips(dm, eps_max, max_dim));
        for (auto& bar : diag.bars)
            if (bar.dim == 1) bar.birth *= 0.5;
        return diag;
    };
    const auto report = run_oracle_suite(5, 300, mutant);
    CHECK_FALSE(report.passed());
}

TEST_CASE("bundled fixtures pass") {
    const auto square = run_fixture((tt_test::fixture_dir() / "unit_square.json").string());
    CHECK(square.passed);
    CHECK(square.name == "unit-square");

    const auto weekend = run_fixture((tt_test::fixture_dir() / "weekend.json").string());
    CHECK(weekend.passed);
    if (!weekend.passed)
        for (const auto& m : weekend.messages) MESSAGE(m);
}

TEST_CASE("fixture failures carry messages") {
    const auto dir = tt_test::temp_dir("fixture");
    const auto path = (dir / "bad.json").string();
    std::ofstream(path) << R"({
      "name": "wrong-expectation",
      "points": [[0, 0], [1, 0], [1, 1], [0, 1]],
      "expected": {"eps": 1.2, "betti": {"0": 3, "1": 0}}
    })";
    const auto fixture = run_fixture(path);
    CHECK_FALSE(fixture.passed);
    CHECK(fixture.messages.size() == 2);
    std::filesystem::remove_all(dir);
}
