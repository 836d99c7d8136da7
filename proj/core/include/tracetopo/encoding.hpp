#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tracetopo/embedding.hpp"
#include "tracetopo/matrix.hpp"

namespace tracetopo {

// Which structural encoding to apply. auto_ maps the paradigm directly:
// chain -> cot, tree -> tot, graph -> got.
enum class EncodingScheme { auto_, cot, tot, got };

std::string to_string(EncodingScheme s);
EncodingScheme scheme_from_string(const std::string& s);

// Structure-aware point cloud: one row per step, 64-bit entries.
struct PointCloud {
    Matrix points;
    Paradigm paradigm = Paradigm::chain;
    EncodingScheme scheme = EncodingScheme::cot;

    std::size_t size() const { return points.rows; }
    std::size_t dimension() const { return points.cols; }
};

struct EncodingParams {
    EncodingScheme scheme = EncodingScheme::auto_;
    int laplacian_dim = 8;   // eigenvector coordinates used for graph encoding
    int struct_dim = 4;      // dimension of the standalone structural cloud
    double scale = 1.0;      // multiplier applied to every positional term
    bool normalize = false;  // L2-normalize semantic rows before combining
};

// Transformer-style sinusoidal lanes: sin(i / 10000^(k/d)) on even lanes,
// cos with the preceding exponent on odd lanes. d must be even; entries
// lie in [-1, 1].
std::vector<double> sinusoidal_position_encoding(long position, int d);

// Depth/branch encodings for tree steps: the depth bank is the sinusoidal
// encoding itself, the branch bank is the same family offset by 10^4 so
// the two stay distinguishable.
std::pair<std::vector<double>, std::vector<double>> depth_branch_encoding(int depth, int branch, int d);

// Rows are node coordinates in the d smallest-eigenvalue eigenvectors of
// the unnormalized Laplacian L = D - A; columns beyond n-1 are zero.
Matrix laplacian_eigenvector_encoding(const Matrix& adjacency, int d);

// Builds the structure-aware cloud for an embedded chain:
//   cot: x + PE(position)      tot: x - PE_depth - PE_branch
//   got: x + zero-padded Laplacian coordinates
// The cloud keeps the semantic dimension.
PointCloud encode_chain(const EmbeddedChain& ec, const EncodingParams& params);

// The pure structural cloud (semantic part zero) in struct_dim lanes;
// this is the Euclidean component of the combined metric.
PointCloud structural_cloud(const ReasoningChain& chain, const EncodingParams& params);

// Raw semantic vectors as a cloud (normalize honored), for the cosine
// component of the combined metric.
PointCloud semantic_cloud(const EmbeddedChain& ec, const EncodingParams& params);

}  // namespace tracetopo
