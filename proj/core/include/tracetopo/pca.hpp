#pragma once

#include <vector>

#include "tracetopo/encoding.hpp"
#include "tracetopo/matrix.hpp"

namespace tracetopo {

struct PcaProjection {
    Matrix points;                        // n x target_dim scores
    std::vector<double> variance_ratios;  // descending, one per axis
    double total_variance = 0.0;          // trace of the covariance matrix
};

// Mean-centered projection onto the top principal axes, via the spectral
// decomposition of the (1/n) covariance matrix. target_dim is 2 or 3.
// A zero-variance cloud projects every point to the origin with zero
// ratios. Throws DataError for n < 2.
PcaProjection project_principal_components(const PointCloud& cloud, int target_dim);

}  // namespace tracetopo
