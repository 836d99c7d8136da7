#include "tracetopo/oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tracetopo/config.hpp"
#include "tracetopo/errors.hpp"
#include "tracetopo/pipeline.hpp"

namespace tracetopo {

namespace {

constexpr const char* kModule = "oracle";

}  // namespace

double DeterministicRng::uniform(double lo, double hi) {
    // 53-bit mantissa draw in [0, 1)
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

int DeterministicRng::uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
}

std::string OracleReport::summary() const {
    char buf[160];
    if (passed()) {
        std::snprintf(buf, sizeof(buf), "oracle: %llu cases, %llu comparisons, 0 mismatches (%.2fs)",
                      static_cast<unsigned long long>(cases_run),
                      static_cast<unsigned long long>(comparisons), seconds);
        return buf;
    }
    const auto& c = *counterexample;
    std::snprintf(buf, sizeof(buf),
                  "oracle: mismatch at case %llu: betti_%d(%.17g) engine=%d oracle=%d",
                  static_cast<unsigned long long>(c.case_index), c.k, c.eps, c.engine_betti, c.oracle_betti);
    return buf;
}

OracleReport run_oracle_suite(std::uint64_t seed, std::uint64_t cases, const PersistenceEngine& engine) {
    if (cases < 1) throw ConfigError(kModule, "the oracle suite needs at least one case");

    PersistenceEngine eng = engine;
    if (!eng) {
        eng = [](const DistanceMatrix& dm, double eps_max, int max_dim) {
            return compute_persistence(build_rips(dm, eps_max, max_dim));
        };
    }

    const auto t0 = std::chrono::steady_clock::now();
    OracleReport report;
    DeterministicRng rng(seed);

    for (std::uint64_t c = 0; c < cases; ++c) {
        const int n = rng.uniform_int(1, 8);
        const int dim = rng.uniform_int(2, 5);
        std::vector<std::vector<double>> cloud(static_cast<std::size_t>(n),
                                               std::vector<double>(static_cast<std::size_t>(dim)));
        PointCloud pc;
        pc.points = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(dim));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < dim; ++j) {
                const double v = rng.uniform(-1.0, 1.0);
                cloud[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
                pc.points(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v;
            }

        const DistanceMatrix dm = euclidean_distance_matrix(pc);
        const double max_distance = dm.max_distance();
        const PersistenceDiagram diag = eng(dm, 0.0, 2);

        for (int probe = 0; probe < 5; ++probe) {
            const double eps = rng.uniform(0.0, max_distance);
            for (int k = 0; k <= 1; ++k) {
                const int engine_betti = betti_number_at(diag, eps, k);
                const int oracle_betti = brute_force_betti(dm, eps, k, 2);
                ++report.comparisons;
                if (engine_betti != oracle_betti) {
                    OracleCounterexample ce;
                    ce.case_index = c;
                    ce.k = k;
                    ce.eps = eps;
                    ce.engine_betti = engine_betti;
                    ce.oracle_betti = oracle_betti;
                    ce.cloud = cloud;
                    ce.filtration_dump = dump_filtration(build_rips(dm, 0.0, 2));
                    report.counterexample = std::move(ce);
                    report.cases_run = c + 1;
                    report.seconds =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                    return report;
                }
            }
        }
    }
    report.cases_run = cases;
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

FixtureCase run_fixture(const std::string& path) {
    FixtureCase result;
    result.path = path;

    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(kModule, "cannot open fixture: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(kModule, "fixture JSON syntax error in " + path + ": " + e.what());
    }
    result.name = doc.value("name", path);
    if (!doc.contains("expected")) throw DataError(kModule, "fixture has no 'expected' block: " + path);
    const nlohmann::json& expected = doc.at("expected");

    // Resolve the diagram either from a raw point set or a chain document.
    PersistenceDiagram diag;
    RunConfigOverlay overlay;
    if (doc.contains("config")) overlay = overlay_from_json(doc.at("config").dump());
    RunConfig config = merge_config({}, overlay, {});
    config.input = path;

    if (doc.contains("points")) {
        PointCloud pc;
        const auto rows = doc.at("points").get<std::vector<std::vector<double>>>();
        pc.points = Matrix(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < rows[i].size(); ++j) pc.points(i, j) = rows[i][j];
        const DistanceMatrix dm = (config.metric == Metric::cosine) ? cosine_distance_matrix(pc)
                                                                    : euclidean_distance_matrix(pc);
        diag = compute_persistence(build_rips(dm, config.eps_max, config.max_hom_dim + 1));
    } else if (doc.contains("chain")) {
        const ReasoningChain chain = parse_chain(doc.at("chain").dump());
        diag = analyze_chain(chain, config).diagram;
    } else {
        throw DataError(kModule, "fixture must supply 'points' or 'chain': " + path);
    }

    result.passed = true;
    auto fail = [&](const std::string& message) {
        result.passed = false;
        result.messages.push_back(message);
    };

    if (expected.contains("betti")) {
        const double eps = expected.at("eps").get<double>();
        for (const auto& [key, want] : expected.at("betti").items()) {
            const int k = std::stoi(key);
            const int got = betti_number_at(diag, eps, k);
            if (got != want.get<int>())
                fail("betti_" + key + "(" + std::to_string(eps) + ") = " + std::to_string(got) +
                     ", expected " + std::to_string(want.get<int>()));
        }
    }
    if (expected.contains("stable_components")) {
        const int got = diag.infinite_bar_count(0);
        const int want = expected.at("stable_components").get<int>();
        if (got != want)
            fail("stable components = " + std::to_string(got) + ", expected " + std::to_string(want));
    }
    if (expected.contains("bars")) {
        const double tol = expected.value("bar_tolerance", 1e-9);
        for (const auto& [key, want_bars] : expected.at("bars").items()) {
            const int k = std::stoi(key);
            auto got = diag.bars_in_dim(k);
            if (got.size() != want_bars.size()) {
                fail("dimension " + key + " has " + std::to_string(got.size()) + " bars, expected " +
                     std::to_string(want_bars.size()));
                continue;
            }
            // Expected bars are listed sorted like the diagram itself.
            for (std::size_t i = 0; i < got.size(); ++i) {
                const auto& want = want_bars.at(i);
                const double birth = want.at(0).get<double>();
                const bool want_inf = want.at(1).is_string();
                if (std::abs(got[i].birth - birth) > tol || got[i].infinite != want_inf ||
                    (!want_inf && std::abs(got[i].death - want.at(1).get<double>()) > tol)) {
                    fail("dimension " + key + " bar " + std::to_string(i) + " mismatch");
                }
            }
        }
    }
    return result;
}

}  // namespace tracetopo
