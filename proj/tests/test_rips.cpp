#include <cmath>
#include <set>

#include "doctest.h"
#include "test_support.hpp"
#include "tracetopo/errors.hpp"
#include "tracetopo/rips.hpp"

using namespace tracetopo;
using tt_test::cloud_from;

namespace {

int count_dim(const Filtration& f, int dim) {
    int c = 0;
    for (const auto& s : f.simplices)
        if (s.dim() == dim) ++c;
    return c;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

}  // namespace

TEST_CASE("distance matrices: identical, euclidean, cosine") {
    const auto same = cloud_from({{1.0, 2.0}, {1.0, 2.0}});
    CHECK(euclidean_distance_matrix(same).d(0, 1) == 0.0);

    const auto pythagoras = cloud_from({{0.0, 0.0}, {3.0, 4.0}});
    CHECK(euclidean_distance_matrix(pythagoras).d(0, 1) == doctest::Approx(5.0).epsilon(1e-15));

    const auto orthogonal = cloud_from({{1.0, 0.0}, {0.0, 1.0}});
    CHECK(cosine_distance_matrix(orthogonal).d(0, 1) == doctest::Approx(1.0).epsilon(1e-15));

    const auto with_zero = cloud_from({{0.0, 0.0}, {1.0, 0.0}});
    CHECK_THROWS_WITH_AS(cosine_distance_matrix(with_zero), doctest::Contains("row 0"), DataError);
}

TEST_CASE("combined metric weights components") {
    const auto sem = cloud_from({{1.0, 0.0}, {0.0, 1.0}});
    const auto str = cloud_from({{0.0}, {3.0}});
    const auto dm = combined_distance_matrix(sem, str, 0.5, 0.5);
    CHECK(dm.d(0, 1) == doctest::Approx(0.5 * 1.0 + 0.5 * 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(combined_distance_matrix(sem, cloud_from({{0.0}}), 0.5, 0.5), DataError);
}

TEST_CASE("3 equidistant points at eps 2: 3 vertices, 3 edges, 1 triangle") {
    const double h = std::sqrt(3.0) / 2.0;
    const auto dm = euclidean_distance_matrix(cloud_from({{0.0, 0.0}, {1.0, 0.0}, {0.5, h}}));
    const Filtration f = build_rips(dm, 2.0, 2);
    CHECK(count_dim(f, 0) == 3);
    CHECK(count_dim(f, 1) == 3);
    CHECK(count_dim(f, 2) == 1);
    for (const auto& s : f.simplices)
        if (s.dim() > 0) CHECK(s.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unit square filtration composition") {
    const auto dm = euclidean_distance_matrix(cloud_from({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    const double diag = std::sqrt(2.0);

    const Filtration f2 = build_rips(dm, 2.0, 2);
    CHECK(count_dim(f2, 0) == 4);
    CHECK(count_dim(f2, 1) == 6);
    CHECK(count_dim(f2, 2) == 4);
    int side_edges = 0, diag_edges = 0, diag_triangles = 0;
    for (const auto& s : f2.simplices) {
        if (s.dim() == 1 && s.value == doctest::Approx(1.0)) ++side_edges;
        if (s.dim() == 1 && s.value == doctest::Approx(diag)) ++diag_edges;
        if (s.dim() == 2) {
            CHECK(s.value == doctest::Approx(diag));
            ++diag_triangles;
        }
    }
    CHECK(side_edges == 4);
    CHECK(diag_edges == 2);
    CHECK(diag_triangles == 4);

    const Filtration f3 = build_rips(dm, 2.0, 3);
    CHECK(count_dim(f3, 3) == 1);

    const Filtration tight = build_rips(dm, 0.5, 2);
    CHECK(tight.simplices.size() == 4);
}

TEST_CASE("empty cloud and bad max_dim are rejected") {
    DistanceMatrix dm;
    CHECK_THROWS_AS(build_rips(dm, 1.0, 2), DataError);
    const auto one = euclidean_distance_matrix(cloud_from({{0.0}}));
    CHECK_THROWS_AS(build_rips(one, 1.0, 0), ConfigError);
    CHECK_THROWS_AS(build_rips(one, 1.0, 4), ConfigError);
}

TEST_CASE("sorted stream is monotone with faces before cofaces") {
    DeterministicRng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = rng.uniform_int(2, 10);
        const auto dm = euclidean_distance_matrix(tt_test::random_cloud(rng, n, rng.uniform_int(2, 4)));
        const Filtration f = build_rips(dm, rng.uniform_int(0, 1) ? 0.0 : rng.uniform(0.2, 2.0),
                                        rng.uniform_int(1, 3));

        std::set<std::vector<int>> seen;
        double last = -1.0;
        for (const auto& s : f.simplices) {
            CHECK(s.value >= last);
            last = s.value;
            CHECK(seen.insert(s.vertices).second);  // no duplicates
            CHECK(s.value <= f.eps_max);
            // every facet is already present with value <= the coface's
            if (s.dim() > 0) {
                for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
                    std::vector<int> face;
                    for (std::size_t t = 0; t < s.vertices.size(); ++t)
                        if (t != drop) face.push_back(s.vertices[t]);
                    CHECK(seen.count(face) == 1);
                }
            }
        }
    }
}

TEST_CASE("filtration values equal the max pairwise distance") {
    DeterministicRng rng(32);
    const auto cloud = tt_test::random_cloud(rng, 7, 3);
    const auto dm = euclidean_distance_matrix(cloud);
    const Filtration f = build_rips(dm, 0.0, 3);
    for (const auto& s : f.simplices) {
        double want = 0.0;
        for (std::size_t a = 0; a < s.vertices.size(); ++a)
            for (std::size_t b = a + 1; b < s.vertices.size(); ++b)
                want = std::max(want, dm.d(static_cast<std::size_t>(s.vertices[a]),
                                           static_cast<std::size_t>(s.vertices[b])));
        CHECK(s.value == want);
    }
}

TEST_CASE("complete complex sizes match binomial sums on equidistant clouds") {
    // n points mutually at distance sqrt(2): the standard-basis cloud
    for (int n = 2; n <= 8; ++n) {
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(n),
                                              std::vector<double>(static_cast<std::size_t>(n), 0.0));
        for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
        const auto dm = euclidean_distance_matrix(cloud_from(rows));
        for (int m = 1; m <= 3; ++m) {
            const Filtration f = build_rips(dm, 0.0, m);
            std::uint64_t want = 0;
            for (int k = 1; k <= m + 1; ++k) want += binomial(n, k);
            CHECK(f.simplices.size() == want);
        }
    }
}

TEST_CASE("dump format: value dim vertices per line") {
    const auto dm = euclidean_distance_matrix(cloud_from({{0.0}, {1.0}}));
    const Filtration f = build_rips(dm, 2.0, 1);
    CHECK(dump_filtration(f) == "0 0 0\n0 0 1\n1 1 0 1\n");
}
