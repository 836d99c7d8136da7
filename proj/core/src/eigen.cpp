#include "tracetopo/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tracetopo/errors.hpp"

namespace tracetopo {

namespace {

constexpr const char* kModule = "eigen";
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const Matrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            if (i != j) sum += a(i, j) * a(i, j);
    return std::sqrt(sum);
}

double frobenius_norm(const Matrix& a) {
    double sum = std::inner_product(a.data.begin(), a.data.end(), a.data.begin(), 0.0);
    return std::sqrt(sum);
}

void check_symmetric(const Matrix& m) {
    if (m.rows != m.cols) throw NumericError(kModule, "matrix is not square");
    double scale = 0.0;
    for (double v : m.data) scale = std::max(scale, std::abs(v));
    const double tol = 1e-10 * std::max(1.0, scale);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = i + 1; j < m.cols; ++j)
            if (std::abs(m(i, j) - m(j, i)) > tol)
                throw NumericError(kModule, "matrix is not symmetric at (" + std::to_string(i) + ", " +
                                                std::to_string(j) + ")");
}

void sign_fix(Matrix& vecs) {
    for (std::size_t k = 0; k < vecs.cols; ++k) {
        double lead = 0.0;
        for (std::size_t i = 0; i < vecs.rows; ++i) {
            if (std::abs(vecs(i, k)) > 1e-12) {
                lead = vecs(i, k);
                break;
            }
        }
        if (lead < 0.0)
            for (std::size_t i = 0; i < vecs.rows; ++i) vecs(i, k) = -vecs(i, k);
    }
}

}  // namespace

SpectralDecomposition symmetric_eigendecomposition(const Matrix& m) {
    check_symmetric(m);
    const std::size_t n = m.rows;

    // Work on the exactly-symmetrized copy.
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
    Matrix v = Matrix::identity(n);

    const double norm = frobenius_norm(a);
    const double threshold = 1e-12 * norm;

    bool converged = norm == 0.0 || n < 2;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        if (off_diagonal_norm(a) <= threshold) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 1.0 / (2.0 * theta);  // avoid theta^2 overflow
                } else {
                    t = ((theta >= 0.0) ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p);
                const double aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = a(r, p);
                        const double arq = a(r, q);
                        a(r, p) = arp - s * (arq + tau * arp);
                        a(p, r) = a(r, p);
                        a(r, q) = arq + s * (arp - tau * arq);
                        a(q, r) = a(r, q);
                    }
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
        if (off_diagonal_norm(a) <= threshold) converged = true;
    }
    if (!converged) {
        throw NumericError(kModule, "Jacobi sweep cap reached; off-diagonal residual " +
                                        std::to_string(off_diagonal_norm(a)) + " vs threshold " +
                                        std::to_string(threshold));
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    sign_fix(out.eigenvectors);

    // Deterministic ordering inside numerically repeated eigenvalue blocks.
    const double group_tol = 1e-8 * std::max(1.0, std::abs(out.eigenvalues.empty() ? 0.0 : out.eigenvalues.back()));
    std::size_t lo = 0;
    while (lo < n) {
        std::size_t hi = lo + 1;
        while (hi < n && std::abs(out.eigenvalues[hi] - out.eigenvalues[lo]) <= group_tol) ++hi;
        if (hi - lo > 1) {
            std::vector<std::size_t> idx(hi - lo);
            std::iota(idx.begin(), idx.end(), lo);
            auto column = [&](std::size_t k) {
                std::vector<double> col(n);
                for (std::size_t i = 0; i < n; ++i) col[i] = out.eigenvectors(i, k);
                return col;
            };
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::size_t x, std::size_t y) { return column(x) < column(y); });
            Matrix reordered(n, hi - lo);
            std::vector<double> vals(hi - lo);
            for (std::size_t k = 0; k < idx.size(); ++k) {
                vals[k] = out.eigenvalues[idx[k]];
                for (std::size_t i = 0; i < n; ++i) reordered(i, k) = out.eigenvectors(i, idx[k]);
            }
            for (std::size_t k = 0; k < idx.size(); ++k) {
                out.eigenvalues[lo + k] = vals[k];
                for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, lo + k) = reordered(i, k);
            }
        }
        lo = hi;
    }
    return out;
}

}  // namespace tracetopo
