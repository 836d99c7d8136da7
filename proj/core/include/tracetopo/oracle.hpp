#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tracetopo/persistence.hpp"

namespace tracetopo {

// Deterministic uniform helper over the standardized mt19937_64 stream
// (the std distributions are not bit-stable across standard libraries).
struct DeterministicRng {
    explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo, double hi);
    int uniform_int(int lo, int hi);  // inclusive bounds

private:
    std::mt19937_64 engine_;
};

struct OracleCounterexample {
    std::uint64_t case_index = 0;
    int k = 0;
    double eps = 0.0;
    int engine_betti = 0;
    int oracle_betti = 0;
    std::vector<std::vector<double>> cloud;  // row-major points
    std::string filtration_dump;
};

struct OracleReport {
    std::uint64_t cases_run = 0;
    std::uint64_t comparisons = 0;
    std::optional<OracleCounterexample> counterexample;
    double seconds = 0.0;

    bool passed() const { return !counterexample.has_value(); }
    std::string summary() const;
};

// Engine hook: maps a distance matrix and cap to a diagram. Tests swap in
// mutated engines to prove the suite detects them.
using PersistenceEngine = std::function<PersistenceDiagram(const DistanceMatrix&, double eps_max, int max_dim)>;

// Random clouds (n <= 8, dimension 2..5, coordinates in [-1, 1]),
// comparing betti_number_at against brute_force_betti at 5 random scales
// for k in {0, 1}. Stops at the first mismatch and reports it with the
// cloud and the full filtration dump. Deterministic per seed.
OracleReport run_oracle_suite(std::uint64_t seed, std::uint64_t cases,
                              const PersistenceEngine& engine = {});

// A bundled hand-checkable scenario: a chain document (with recorded
// embeddings) or a raw point set, plus an expected block.
struct FixtureCase {
    std::string name;
    std::string path;
    bool passed = false;
    std::vector<std::string> messages;
};

// Runs the `expected` block of a fixture file against the pipeline.
// Supported expectations: betti numbers at a scale, exact bars, stable
// component count.
FixtureCase run_fixture(const std::string& path);

}  // namespace tracetopo
