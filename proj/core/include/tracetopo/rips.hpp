#pragma once

#include <string>
#include <vector>

#include "tracetopo/distance.hpp"

namespace tracetopo {

// One simplex in the filtration: ascending vertex ids plus the smallest
// scale at which it appears (the maximum pairwise distance among its
// vertices; 0 for singletons).
struct FilteredSimplex {
    std::vector<int> vertices;
    double value = 0.0;

    int dim() const { return static_cast<int>(vertices.size()) - 1; }
    bool operator==(const FilteredSimplex&) const = default;
};

// The Vietoris-Rips filtration: every simplex of dimension <= max_dim
// whose value is <= eps_max, sorted by (value, dimension, lexicographic
// vertices). Faces always precede cofaces.
struct Filtration {
    std::vector<FilteredSimplex> simplices;
    double eps_max = 0.0;
    int max_dim = 2;  // top simplex dimension built
    std::size_t vertex_count = 0;
    bool full_merge = false;  // eps_max covers the largest pairwise distance
};

// eps_max <= 0 selects the default cap: one ulp above the largest pairwise
// distance, so every component merge is observed. max_dim must be in
// [1, 3]. Throws DataError on an empty cloud.
Filtration build_rips(const DistanceMatrix& dm, double eps_max, int max_dim);
Filtration build_rips(const DistanceMatrix& dm, int max_dim);

// Debug/oracle text form: one line per simplex, "value dim v0 v1 ...",
// in stored order.
std::string dump_filtration(const Filtration& f);

}  // namespace tracetopo
