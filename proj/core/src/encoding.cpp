#include "tracetopo/encoding.hpp"

#include <cmath>
#include <string>

#include "tracetopo/eigen.hpp"
#include "tracetopo/errors.hpp"

namespace tracetopo {

namespace {

constexpr const char* kModule = "encoding";
constexpr long kBranchBankOffset = 10000;  // separates depth and branch banks

EncodingScheme resolve_scheme(EncodingScheme scheme, Paradigm paradigm) {
    if (scheme == EncodingScheme::auto_) {
        switch (paradigm) {
            case Paradigm::chain: return EncodingScheme::cot;
            case Paradigm::tree: return EncodingScheme::tot;
            case Paradigm::graph: return EncodingScheme::got;
        }
    }
    const bool ok = (scheme == EncodingScheme::cot && paradigm == Paradigm::chain) ||
                    (scheme == EncodingScheme::tot && paradigm == Paradigm::tree) ||
                    (scheme == EncodingScheme::got && paradigm == Paradigm::graph);
    if (!ok)
        throw ConfigError(kModule, "encoding scheme " + to_string(scheme) + " does not match paradigm " +
                                       to_string(paradigm));
    return scheme;
}

void require_even(int d) {
    if (d <= 0 || d % 2 != 0)
        throw ConfigError(kModule, "positional encoding dimension must be a positive even integer, got " +
                                       std::to_string(d));
}

std::vector<double> normalized_row(const std::vector<float>& row, bool normalize) {
    std::vector<double> out(row.begin(), row.end());
    if (!normalize) return out;
    double norm = 0.0;
    for (double v : out) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
        for (double& v : out) v /= norm;
    return out;
}

Matrix graph_laplacian(const Matrix& adjacency) {
    const std::size_t n = adjacency.rows;
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double degree = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            degree += adjacency(i, j);
            l(i, j) = -adjacency(i, j);
        }
        l(i, i) = degree;
    }
    return l;
}

}  // namespace

std::string to_string(EncodingScheme s) {
    switch (s) {
        case EncodingScheme::auto_: return "auto";
        case EncodingScheme::cot: return "cot";
        case EncodingScheme::tot: return "tot";
        case EncodingScheme::got: return "got";
    }
    return "auto";
}

EncodingScheme scheme_from_string(const std::string& s) {
    if (s == "auto") return EncodingScheme::auto_;
    if (s == "cot") return EncodingScheme::cot;
    if (s == "tot") return EncodingScheme::tot;
    if (s == "got") return EncodingScheme::got;
    throw ConfigError(kModule, "unknown encoding scheme '" + s + "' (expected auto, cot, tot, or got)");
}

std::vector<double> sinusoidal_position_encoding(long position, int d) {
    require_even(d);
    if (position < 0) throw ConfigError(kModule, "position must be non-negative");
    std::vector<double> pe(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        const int exponent_lane = (k % 2 == 0) ? k : k - 1;
        const double freq = std::pow(10000.0, static_cast<double>(exponent_lane) / d);
        const double arg = static_cast<double>(position) / freq;
        pe[static_cast<std::size_t>(k)] = (k % 2 == 0) ? std::sin(arg) : std::cos(arg);
    }
    return pe;
}

std::pair<std::vector<double>, std::vector<double>> depth_branch_encoding(int depth, int branch, int d) {
    if (depth < 0 || branch < 0) throw ConfigError(kModule, "depth and branch must be non-negative");
    return {sinusoidal_position_encoding(depth, d),
            sinusoidal_position_encoding(static_cast<long>(branch) + kBranchBankOffset, d)};
}

Matrix laplacian_eigenvector_encoding(const Matrix& adjacency, int d) {
    if (d <= 0) throw ConfigError(kModule, "laplacian encoding dimension must be positive");
    const std::size_t n = adjacency.rows;
    if (adjacency.cols != n) throw ConfigError(kModule, "adjacency matrix must be square");
    for (std::size_t i = 0; i < n; ++i)
        if (adjacency(i, i) != 0.0) throw ConfigError(kModule, "adjacency diagonal must be zero");

    const SpectralDecomposition eig = symmetric_eigendecomposition(graph_laplacian(adjacency));
    Matrix pe(n, static_cast<std::size_t>(d));
    const std::size_t cols = std::min<std::size_t>(static_cast<std::size_t>(d), n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < cols; ++k) pe(i, k) = eig.eigenvectors(i, k);
    return pe;  // columns beyond n-1 stay zero
}

PointCloud semantic_cloud(const EmbeddedChain& ec, const EncodingParams& params) {
    const std::size_t n = ec.embeddings.size();
    PointCloud cloud;
    cloud.paradigm = ec.chain.paradigm;
    cloud.scheme = resolve_scheme(params.scheme, ec.chain.paradigm);
    cloud.points = Matrix(n, ec.embeddings.dimension);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = normalized_row(ec.embeddings.vectors[i], params.normalize);
        for (std::size_t j = 0; j < row.size(); ++j) cloud.points(i, j) = row[j];
    }
    return cloud;
}

PointCloud structural_cloud(const ReasoningChain& chain, const EncodingParams& params) {
    EmbeddedChain zero;
    zero.chain = chain;
    zero.embeddings.dimension = static_cast<std::size_t>(params.struct_dim);
    zero.embeddings.vectors.assign(chain.steps.size(),
                                   std::vector<float>(static_cast<std::size_t>(params.struct_dim), 0.0f));
    EncodingParams p = params;
    p.laplacian_dim = std::min(params.laplacian_dim, params.struct_dim);
    return encode_chain(zero, p);
}

PointCloud encode_chain(const EmbeddedChain& ec, const EncodingParams& params) {
    const EncodingScheme scheme = resolve_scheme(params.scheme, ec.chain.paradigm);
    const std::size_t n = ec.embeddings.size();
    const std::size_t d = ec.embeddings.dimension;

    PointCloud cloud = semantic_cloud(ec, params);
    cloud.scheme = scheme;
    const double scale = params.scale;

    switch (scheme) {
        case EncodingScheme::cot: {
            require_even(static_cast<int>(d));
            for (std::size_t i = 0; i < n; ++i) {
                const auto pe = sinusoidal_position_encoding(static_cast<long>(i), static_cast<int>(d));
                for (std::size_t j = 0; j < d; ++j) cloud.points(i, j) += scale * pe[j];
            }
            break;
        }
        case EncodingScheme::tot: {
            require_even(static_cast<int>(d));
            for (std::size_t i = 0; i < n; ++i) {
                const auto& step = ec.chain.steps[i];
                if (!step.depth || !step.branch)
                    throw DataError(kModule,
                                    "tree encoding requires depth/branch on step " + std::to_string(step.id));
                const auto [pe_depth, pe_branch] =
                    depth_branch_encoding(*step.depth, *step.branch, static_cast<int>(d));
                for (std::size_t j = 0; j < d; ++j)
                    cloud.points(i, j) -= scale * (pe_depth[j] + pe_branch[j]);
            }
            break;
        }
        case EncodingScheme::got: {
            if (static_cast<std::size_t>(params.laplacian_dim) > d)
                throw ConfigError(kModule, "laplacian encoding dimension " +
                                               std::to_string(params.laplacian_dim) +
                                               " exceeds the embedding dimension " + std::to_string(d));
            const Matrix pe = laplacian_eigenvector_encoding(adjacency_matrix(ec.chain), params.laplacian_dim);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < pe.cols; ++j) cloud.points(i, j) += scale * pe(i, j);
            break;
        }
        case EncodingScheme::auto_:
            throw InternalError(kModule, "scheme should have been resolved");
    }
    return cloud;
}

}  // namespace tracetopo
