#include "tracetopo/distance.hpp"

#include <algorithm>
#include <cmath>

#include "tracetopo/errors.hpp"

namespace tracetopo {

namespace {

constexpr const char* kModule = "distance";

double euclidean(const Matrix& pts, std::size_t i, std::size_t j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < pts.cols; ++k) {
        const double diff = pts(i, k) - pts(j, k);
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

}  // namespace

std::string to_string(Metric m) {
    switch (m) {
        case Metric::euclidean: return "euclidean";
        case Metric::cosine: return "cosine";
        case Metric::combined: return "combined";
    }
    return "euclidean";
}

Metric metric_from_string(const std::string& s) {
    if (s == "euclidean") return Metric::euclidean;
    if (s == "cosine") return Metric::cosine;
    if (s == "combined") return Metric::combined;
    throw ConfigError(kModule, "unknown metric '" + s + "' (expected euclidean, cosine, or combined)");
}

double DistanceMatrix::max_distance() const {
    double m = 0.0;
    for (double v : d.data) m = std::max(m, v);
    return m;
}

DistanceMatrix euclidean_distance_matrix(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    DistanceMatrix dm;
    dm.metric = Metric::euclidean;
    dm.d = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = euclidean(cloud.points, i, j);
            dm.d(i, j) = v;
            dm.d(j, i) = v;
        }
    return dm;
}

DistanceMatrix cosine_distance_matrix(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t k = 0; k < cloud.points.cols; ++k) sum += cloud.points(i, k) * cloud.points(i, k);
        norms[i] = std::sqrt(sum);
        if (norms[i] == 0.0)
            throw DataError(kModule, "cosine distance undefined: row " + std::to_string(i) + " has zero norm");
    }
    DistanceMatrix dm;
    dm.metric = Metric::cosine;
    dm.d = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < cloud.points.cols; ++k) dot += cloud.points(i, k) * cloud.points(j, k);
            const double v = std::clamp(1.0 - dot / (norms[i] * norms[j]), 0.0, 2.0);
            dm.d(i, j) = v;
            dm.d(j, i) = v;
        }
    return dm;
}

DistanceMatrix combined_distance_matrix(const PointCloud& semantic, const PointCloud& structural,
                                        double w_sem, double w_struct) {
    if (semantic.size() != structural.size())
        throw DataError(kModule, "combined metric components disagree on point count: " +
                                     std::to_string(semantic.size()) + " vs " +
                                     std::to_string(structural.size()));
    if (w_sem < 0.0 || w_struct < 0.0)
        throw ConfigError(kModule, "combined metric weights must be non-negative");

    const DistanceMatrix sem = cosine_distance_matrix(semantic);
    const DistanceMatrix str = euclidean_distance_matrix(structural);
    DistanceMatrix dm;
    dm.metric = Metric::combined;
    dm.w_sem = w_sem;
    dm.w_struct = w_struct;
    const std::size_t n = semantic.size();
    dm.d = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = w_sem * sem.d(i, j) + w_struct * str.d(i, j);
            dm.d(i, j) = v;
            dm.d(j, i) = v;
        }
    return dm;
}

}  // namespace tracetopo
