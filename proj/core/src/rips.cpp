#include "tracetopo/rips.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tracetopo/errors.hpp"

namespace tracetopo {

namespace {

constexpr const char* kModule = "complex";

bool simplex_order(const FilteredSimplex& a, const FilteredSimplex& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
    return a.vertices < b.vertices;
}

}  // namespace

Filtration build_rips(const DistanceMatrix& dm, int max_dim) { return build_rips(dm, 0.0, max_dim); }

Filtration build_rips(const DistanceMatrix& dm, double eps_max, int max_dim) {
    const std::size_t n = dm.size();
    if (n == 0) throw DataError(kModule, "cannot build a filtration over an empty point cloud");
    if (max_dim < 1 || max_dim > 3)
        throw ConfigError(kModule, "max simplex dimension must be in [1, 3], got " + std::to_string(max_dim));

    const double max_pairwise = dm.max_distance();
    if (eps_max <= 0.0) eps_max = std::nextafter(max_pairwise, std::numeric_limits<double>::infinity());
    if (eps_max <= 0.0) eps_max = std::numeric_limits<double>::min();

    Filtration f;
    f.eps_max = eps_max;
    f.max_dim = max_dim;
    f.vertex_count = n;
    f.full_merge = eps_max >= max_pairwise;

    for (std::size_t i = 0; i < n; ++i)
        f.simplices.push_back(FilteredSimplex{{static_cast<int>(i)}, 0.0});

    // Incremental expansion: extend each k-simplex by a vertex larger than
    // its maximum, keeping the pairwise bound.
    std::vector<FilteredSimplex> frontier;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (dm.d(i, j) <= eps_max)
                frontier.push_back(FilteredSimplex{{static_cast<int>(i), static_cast<int>(j)}, dm.d(i, j)});
    f.simplices.insert(f.simplices.end(), frontier.begin(), frontier.end());

    for (int dim = 2; dim <= max_dim; ++dim) {
        std::vector<FilteredSimplex> next;
        for (const auto& s : frontier) {
            for (int w = s.vertices.back() + 1; w < static_cast<int>(n); ++w) {
                double value = s.value;
                bool ok = true;
                for (int v : s.vertices) {
                    const double dvw = dm.d(static_cast<std::size_t>(v), static_cast<std::size_t>(w));
                    if (dvw > eps_max) {
                        ok = false;
                        break;
                    }
                    value = std::max(value, dvw);
                }
                if (!ok) continue;
                FilteredSimplex ext;
                ext.vertices = s.vertices;
                ext.vertices.push_back(w);
                ext.value = value;
                next.push_back(std::move(ext));
            }
        }
        f.simplices.insert(f.simplices.end(), next.begin(), next.end());
        frontier = std::move(next);
    }

    std::sort(f.simplices.begin(), f.simplices.end(), simplex_order);
    return f;
}

std::string dump_filtration(const Filtration& f) {
    std::string out;
    char buf[64];
    for (const auto& s : f.simplices) {
        std::snprintf(buf, sizeof(buf), "%.17g %d", s.value, s.dim());
        out += buf;
        for (int v : s.vertices) {
            std::snprintf(buf, sizeof(buf), " %d", v);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

}  // namespace tracetopo
