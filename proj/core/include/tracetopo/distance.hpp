#pragma once

#include <string>

#include "tracetopo/encoding.hpp"
#include "tracetopo/matrix.hpp"

namespace tracetopo {

enum class Metric { euclidean, cosine, combined };

std::string to_string(Metric m);
Metric metric_from_string(const std::string& s);

// Symmetric pairwise distances with an exactly-zero diagonal. Symmetry is
// exact by construction (each pair computed once).
struct DistanceMatrix {
    Matrix d;
    Metric metric = Metric::euclidean;
    double w_sem = 0.5;     // combined only
    double w_struct = 0.5;  // combined only

    std::size_t size() const { return d.rows; }
    double max_distance() const;
};

DistanceMatrix euclidean_distance_matrix(const PointCloud& cloud);

// Cosine distance 1 - cos(u, v), clamped to [0, 2]. Throws DataError
// naming the row when it has zero norm.
DistanceMatrix cosine_distance_matrix(const PointCloud& cloud);

// w_sem * cosine(semantic) + w_struct * euclidean(structural); the two
// clouds must have the same number of rows.
DistanceMatrix combined_distance_matrix(const PointCloud& semantic, const PointCloud& structural,
                                        double w_sem, double w_struct);

}  // namespace tracetopo
