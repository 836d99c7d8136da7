#include <algorithm>
#include <cmath>
#include <utility>

#include "doctest.h"
#include "test_support.hpp"
#include "tracetopo/eigen.hpp"
#include "tracetopo/encoding.hpp"
#include "tracetopo/errors.hpp"

using namespace tracetopo;

TEST_CASE("position 0: even lanes 0, odd lanes 1") {
    for (int d : {2, 8, 64}) {
        const auto pe = sinusoidal_position_encoding(0, d);
        for (int k = 0; k < d; ++k) CHECK(pe[static_cast<std::size_t>(k)] == (k % 2 == 0 ? 0.0 : 1.0));
    }
}

TEST_CASE("position 1, d=2 is [sin 1, cos 1]") {
    const auto pe = sinusoidal_position_encoding(1, 2);
    CHECK(pe[0] == doctest::Approx(0.8414709848078965).epsilon(1e-12));
    CHECK(pe[1] == doctest::Approx(0.5403023058681398).epsilon(1e-12));
}

TEST_CASE("exponent convention: lane 0 divides by 10000^0") {
    const auto pe = sinusoidal_position_encoding(10000, 2);
    CHECK(pe[0] == doctest::Approx(std::sin(10000.0)).epsilon(1e-12));
}

TEST_CASE("odd dimension is rejected") {
    CHECK_THROWS_AS(sinusoidal_position_encoding(3, 5), ConfigError);
    CHECK_THROWS_AS(depth_branch_encoding(1, 1, 3), ConfigError);
}

TEST_CASE("entries stay in [-1, 1] across positions and dimensions") {
    DeterministicRng rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const long i = static_cast<long>(rng.uniform_int(0, 1000000));
        const int d = 2 * rng.uniform_int(1, 32);
        for (double v : sinusoidal_position_encoding(i, d)) {
            CHECK(v <= 1.0);
            CHECK(v >= -1.0);
        }
    }
}

TEST_CASE("depth bank equals the plain encoding; banks never collide") {
    const auto [depth0, branch0] = depth_branch_encoding(0, 0, 6);
    CHECK(depth0 == sinusoidal_position_encoding(0, 6));

    const auto [d2, b2] = depth_branch_encoding(2, 2, 4);
    for (std::size_t k = 0; k < 4; ++k) CHECK(d2[k] != b2[k]);

    CHECK_THROWS_AS(depth_branch_encoding(-1, 0, 4), ConfigError);
}

TEST_CASE("laplacian encoding of the 3-path: constant column and Fiedler vector") {
    Matrix adj(3, 3);
    adj(0, 1) = adj(1, 0) = 1.0;
    adj(1, 2) = adj(2, 1) = 1.0;
    const Matrix pe = laplacian_eigenvector_encoding(adj, 2);
    const double c = 1.0 / std::sqrt(3.0);
    const double f = 1.0 / std::sqrt(2.0);
    CHECK(pe(0, 0) == doctest::Approx(c).epsilon(1e-9));
    CHECK(pe(1, 0) == doctest::Approx(c).epsilon(1e-9));
    CHECK(pe(2, 0) == doctest::Approx(c).epsilon(1e-9));
    CHECK(pe(0, 1) == doctest::Approx(f).epsilon(1e-9));
    CHECK(pe(1, 1) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(pe(2, 1) == doctest::Approx(-f).epsilon(1e-9));
}

TEST_CASE("zero-eigenvalue multiplicity equals component count on random graphs") {
    DeterministicRng rng(22);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = rng.uniform_int(2, 32);
        const Matrix adj = tt_test::random_adjacency(rng, n, rng.uniform(0.05, 0.5));
        Matrix lap(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            double degree = 0.0;
            for (int j = 0; j < n; ++j) {
                degree += adj(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                lap(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                    -adj(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            }
            lap(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = degree;
        }
        const auto e = symmetric_eigendecomposition(lap);
        int zero_multiplicity = 0;
        for (double v : e.eigenvalues)
            if (std::abs(v) < 1e-8 * std::max(1.0, std::abs(e.eigenvalues.back()))) ++zero_multiplicity;
        CHECK(zero_multiplicity == tt_test::union_find_components(adj));
    }
}

TEST_CASE("laplacian encoding pads columns beyond n-1 with zeros") {
    Matrix adj(2, 2);
    adj(0, 1) = adj(1, 0) = 1.0;
    const Matrix pe = laplacian_eigenvector_encoding(adj, 5);
    CHECK(pe.cols == 5);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 2; k < 5; ++k) CHECK(pe(i, k) == 0.0);
}

namespace {

EmbeddedChain zero_embedded(const ReasoningChain& chain, std::size_t d) {
    EmbeddedChain ec;
    ec.chain = chain;
    ec.embeddings.dimension = d;
    ec.embeddings.vectors.assign(chain.steps.size(), std::vector<float>(d, 0.0f));
    return ec;
}

}  // namespace

TEST_CASE("zero semantics: cot rows equal the positional encoding") {
    const auto chain = parse_chain(R"({"paradigm": "chain", "steps": ["a", "b", "c"]})");
    const auto cloud = encode_chain(zero_embedded(chain, 4), {});
    for (std::size_t i = 0; i < 3; ++i) {
        const auto pe = sinusoidal_position_encoding(static_cast<long>(i), 4);
        for (std::size_t j = 0; j < 4; ++j) CHECK(cloud.points(i, j) == doctest::Approx(pe[j]).epsilon(1e-15));
    }
}

TEST_CASE("zero semantics: tot rows equal the negated depth+branch banks") {
    const auto chain = parse_chain(R"({"paradigm": "tree", "steps": [
        {"text": "r", "depth": 0, "branch": 0},
        {"text": "x", "depth": 1, "branch": 2}]})");
    const auto cloud = encode_chain(zero_embedded(chain, 4), {});
    const auto [pd, pb] = depth_branch_encoding(1, 2, 4);
    for (std::size_t j = 0; j < 4; ++j)
        CHECK(cloud.points(1, j) == doctest::Approx(-(pd[j] + pb[j])).epsilon(1e-15));
}

TEST_CASE("zero semantics: got rows equal zero-padded laplacian coordinates") {
    const auto chain = parse_chain(
        R"({"paradigm": "graph", "steps": ["a", "b", "c"], "edges": [[0, 1], [1, 2]]})");
    EncodingParams params;
    params.laplacian_dim = 2;
    const auto cloud = encode_chain(zero_embedded(chain, 6), params);
    const Matrix pe = laplacian_eigenvector_encoding(adjacency_matrix(chain), 2);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 2; ++j) CHECK(cloud.points(i, j) == doctest::Approx(pe(i, j)));
        for (std::size_t j = 2; j < 6; ++j) CHECK(cloud.points(i, j) == 0.0);
    }
}

TEST_CASE("scheme/paradigm mismatch and missing annotations") {
    const auto chain = parse_chain(R"({"paradigm": "chain", "steps": ["a"]})");
    EncodingParams params;
    params.scheme = EncodingScheme::got;
    CHECK_THROWS_AS(encode_chain(zero_embedded(chain, 4), params), ConfigError);
}

TEST_CASE("got laplacian dimension must fit the embedding") {
    const auto chain = parse_chain(R"({"paradigm": "graph", "steps": ["a", "b"], "edges": [[0, 1]]})");
    EncodingParams params;
    params.laplacian_dim = 8;
    CHECK_THROWS_AS(encode_chain(zero_embedded(chain, 4), params), ConfigError);
}

TEST_CASE("got structural distances are permutation-equivariant") {
    DeterministicRng rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = rng.uniform_int(3, 8);
        Matrix adj = tt_test::random_adjacency(rng, n, 0.5);

        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i) std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(rng.uniform_int(0, i))]);

        Matrix relabeled(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                relabeled(static_cast<std::size_t>(perm[static_cast<std::size_t>(i)]),
                          static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])) =
                    adj(static_cast<std::size_t>(i), static_cast<std::size_t>(j));

        const Matrix pe1 = laplacian_eigenvector_encoding(adj, n);
        const Matrix pe2 = laplacian_eigenvector_encoding(relabeled, n);

        // Pairwise distances between rows are the sign-free invariant.
        auto row_distance = [](const Matrix& m, int a, int b) {
            double sum = 0.0;
            for (std::size_t k = 0; k < m.cols; ++k) {
                const double diff = m(static_cast<std::size_t>(a), k) - m(static_cast<std::size_t>(b), k);
                sum += diff * diff;
            }
            return std::sqrt(sum);
        };
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                CHECK(row_distance(pe1, a, b) ==
                      doctest::Approx(row_distance(pe2, perm[static_cast<std::size_t>(a)],
                                                   perm[static_cast<std::size_t>(b)]))
                          .epsilon(1e-7));
    }
}

TEST_CASE("normalize flag rescales semantic rows to unit norm") {
    const auto chain = parse_chain(R"({"paradigm": "chain", "steps": ["a", "b"]})");
    EmbeddedChain ec;
    ec.chain = chain;
    ec.embeddings = embeddings_from_rows({{3.0f, 0.0f}, {0.0f, 5.0f}}, EmbeddingSource::fixture);
    EncodingParams params;
    params.normalize = true;
    params.scale = 0.0;  // isolate the semantic part
    const auto cloud = encode_chain(ec, params);
    CHECK(cloud.points(0, 0) == doctest::Approx(1.0));
    CHECK(cloud.points(1, 1) == doctest::Approx(1.0));
}
