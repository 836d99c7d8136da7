#pragma once

#include "tracetopo/matrix.hpp"

#include <vector>

namespace tracetopo {

// Eigendecomposition of a symmetric matrix: ascending eigenvalues and the
// matching orthonormal eigenvector columns.
//
// Output is deterministic: each eigenvector is flipped so its first entry
// of magnitude > 1e-12 is positive, and within a block of (numerically)
// repeated eigenvalues the columns are ordered lexicographically.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;  // ascending
    Matrix eigenvectors;              // column k pairs with eigenvalues[k]
};

// Cyclic Jacobi rotations. Converges when the off-diagonal Frobenius norm
// drops below 1e-12 times the Frobenius norm of the input; hard cap of
// 100 sweeps. Throws NumericError on asymmetric input (relative tolerance
// 1e-10) or non-convergence, reporting the residual.
SpectralDecomposition symmetric_eigendecomposition(const Matrix& m);

}  // namespace tracetopo
