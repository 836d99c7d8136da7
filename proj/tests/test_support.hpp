#pragma once

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tracetopo/chain.hpp"
#include "tracetopo/distance.hpp"
#include "tracetopo/encoding.hpp"
#include "tracetopo/oracle.hpp"

namespace tt_test {

inline tracetopo::PointCloud cloud_from(const std::vector<std::vector<double>>& rows) {
    tracetopo::PointCloud pc;
    pc.points = tracetopo::Matrix(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) pc.points(i, j) = rows[i][j];
    return pc;
}

inline tracetopo::PointCloud random_cloud(tracetopo::DeterministicRng& rng, int n, int dim,
                                          double lo = -1.0, double hi = 1.0) {
    tracetopo::PointCloud pc;
    pc.points = tracetopo::Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(dim));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < dim; ++j)
            pc.points(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = rng.uniform(lo, hi);
    return pc;
}

// Random undirected graph as an adjacency matrix, edge probability p.
inline tracetopo::Matrix random_adjacency(tracetopo::DeterministicRng& rng, int n, double p) {
    tracetopo::Matrix a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform(0.0, 1.0) < p) {
                a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 1.0;
                a(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = 1.0;
            }
    return a;
}

inline int union_find_components(const tracetopo::Matrix& adjacency) {
    const int n = static_cast<int>(adjacency.rows);
    std::vector<int> parent(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (adjacency(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) != 0.0)
                parent[static_cast<std::size_t>(find(i))] = find(j);
    int components = 0;
    for (int i = 0; i < n; ++i)
        if (find(i) == i) ++components;
    return components;
}

// Random valid chain across all paradigms.
inline tracetopo::ReasoningChain random_chain(tracetopo::DeterministicRng& rng, int max_steps = 10) {
    using namespace tracetopo;
    ReasoningChain c;
    const int which = rng.uniform_int(0, 2);
    const int n = rng.uniform_int(which == 1 ? 1 : 1, max_steps);
    c.paradigm = which == 0 ? Paradigm::chain : (which == 1 ? Paradigm::tree : Paradigm::graph);
    for (int i = 0; i < n; ++i) {
        ReasoningStep s;
        s.id = i;
        s.text = "step " + std::to_string(i);
        c.steps.push_back(s);
    }
    if (c.paradigm == Paradigm::tree) {
        // Depth climbs by at most one per step starting from the single
        // root, so every level below a step occurred earlier and parent
        // reconstruction always succeeds.
        std::vector<int> depths(static_cast<std::size_t>(n), 0);
        for (int i = 1; i < n; ++i)
            depths[static_cast<std::size_t>(i)] = rng.uniform_int(1, depths[static_cast<std::size_t>(i - 1)] + 1);
        for (int i = 0; i < n; ++i) {
            c.steps[static_cast<std::size_t>(i)].depth = depths[static_cast<std::size_t>(i)];
            c.steps[static_cast<std::size_t>(i)].branch = rng.uniform_int(0, 3);
        }
    }
    if (c.paradigm == Paradigm::graph) {
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.uniform(0.0, 1.0) < 0.4) edges.emplace_back(i, j);
        c.edges = edges;
    }
    if (rng.uniform(0.0, 1.0) < 0.3) c.label = rng.uniform(0.0, 1.0) < 0.5 ? "correct" : "incorrect";
    return c;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::filesystem::path fixture_dir() {
    if (const char* env = std::getenv("TRACETOPO_FIXTURE_DIR")) return env;
    return "fixtures";
}

inline std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("tracetopo-test-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace tt_test
