#include "tracetopo/pca.hpp"

#include <algorithm>
#include <cmath>

#include "tracetopo/eigen.hpp"
#include "tracetopo/errors.hpp"

namespace tracetopo {

namespace {

constexpr const char* kModule = "pca";

}  // namespace

PcaProjection project_principal_components(const PointCloud& cloud, int target_dim) {
    if (target_dim != 2 && target_dim != 3)
        throw ConfigError(kModule, "projection target must be 2 or 3 dimensions");
    const std::size_t n = cloud.size();
    const std::size_t d = cloud.dimension();
    if (n < 2) throw DataError(kModule, "projection needs at least 2 points, got " + std::to_string(n));

    Matrix centered(n, d);
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += cloud.points(i, j);
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) centered(i, j) = cloud.points(i, j) - mean;
    }

    double total_variance = 0.0;
    for (double v : centered.data) total_variance += v * v;
    total_variance /= static_cast<double>(n);

    PcaProjection out;
    out.points = Matrix(n, static_cast<std::size_t>(target_dim));
    out.variance_ratios.assign(static_cast<std::size_t>(target_dim), 0.0);
    out.total_variance = total_variance;
    if (total_variance == 0.0) return out;  // all points coincide

    // The covariance and Gram matrices share their nonzero spectrum; use
    // whichever is smaller (embeddings are usually much wider than the
    // chain is long).
    const bool use_gram = d > n;
    if (use_gram) {
        Matrix gram(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                double dot = 0.0;
                for (std::size_t k = 0; k < d; ++k) dot += centered(i, k) * centered(j, k);
                gram(i, j) = dot / static_cast<double>(n);
                gram(j, i) = gram(i, j);
            }
        const SpectralDecomposition eig = symmetric_eigendecomposition(gram);
        for (int axis = 0; axis < target_dim; ++axis) {
            const std::size_t col = n - 1 - static_cast<std::size_t>(axis);
            if (col >= n) break;
            const double lambda = std::max(0.0, eig.eigenvalues[col]);
            if (lambda <= 0.0) continue;
            out.variance_ratios[static_cast<std::size_t>(axis)] = lambda / total_variance;
            // Scores along a unit covariance eigenvector equal
            // sqrt(n * lambda) times the Gram eigenvector entries.
            const double scl = std::sqrt(static_cast<double>(n) * lambda);
            for (std::size_t i = 0; i < n; ++i)
                out.points(i, static_cast<std::size_t>(axis)) = scl * eig.eigenvectors(i, col);
        }
    } else {
        Matrix cov(d, d);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = a; b < d; ++b) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += centered(i, a) * centered(i, b);
                cov(a, b) = dot / static_cast<double>(n);
                cov(b, a) = cov(a, b);
            }
        const SpectralDecomposition eig = symmetric_eigendecomposition(cov);
        for (int axis = 0; axis < target_dim; ++axis) {
            const std::size_t col = d - 1 - static_cast<std::size_t>(axis);
            if (col >= d) break;
            const double lambda = std::max(0.0, eig.eigenvalues[col]);
            out.variance_ratios[static_cast<std::size_t>(axis)] = lambda / total_variance;
            for (std::size_t i = 0; i < n; ++i) {
                double score = 0.0;
                for (std::size_t k = 0; k < d; ++k) score += centered(i, k) * eig.eigenvectors(k, col);
                out.points(i, static_cast<std::size_t>(axis)) = score;
            }
        }
    }
    return out;
}

}  // namespace tracetopo
