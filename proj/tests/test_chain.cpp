#include "doctest.h"
#include "test_support.hpp"
#include "tracetopo/chain.hpp"
#include "tracetopo/errors.hpp"

using namespace tracetopo;

TEST_CASE("minimal chain document parses") {
    const auto c = parse_chain(R"({"paradigm": "chain", "steps": ["a", "b"]})");
    CHECK(c.paradigm == Paradigm::chain);
    CHECK(c.steps.size() == 2);
    CHECK(c.edges.empty());
    CHECK(c.steps[0].text == "a");
    CHECK(c.steps[1].id == 1);
}

TEST_CASE("weekend tree document reconstructs the expected tree") {
    // single root, three depth-1 branches, a merge at depth 2, a conclusion
    const char* doc = R"({
      "paradigm": "tree",
      "steps": [
        {"text": "root", "depth": 0, "branch": 0},
        {"text": "study", "depth": 1, "branch": 0},
        {"text": "exercise", "depth": 1, "branch": 1},
        {"text": "relax", "depth": 1, "branch": 2},
        {"text": "compare", "depth": 2, "branch": 3},
        {"text": "conclude", "depth": 3, "branch": 3}
      ]})";
    const auto c = parse_chain(doc);
    CHECK(c.steps.size() == 6);
    int roots = 0;
    for (const auto& s : c.steps)
        if (*s.depth == 0) ++roots;
    CHECK(roots == 1);

    // parent = nearest preceding step one level up: 4 hangs off 3, 5 off 4
    const auto edges = chain_edges(c);
    const std::vector<std::pair<int, int>> expected{{0, 1}, {0, 2}, {0, 3}, {3, 4}, {4, 5}};
    CHECK(edges == expected);

    const Matrix a = adjacency_matrix(c);
    CHECK(a(0, 1) == 1.0);
    CHECK(a(1, 0) == 1.0);
    CHECK(a(3, 4) == 1.0);
    CHECK(a(4, 5) == 1.0);
    CHECK(a(1, 2) == 0.0);
}

TEST_CASE("out-of-range edge is rejected with the offending id") {
    const char* doc = R"({"paradigm": "graph", "steps": ["a", "b", "c"], "edges": [[0, 7]]})";
    CHECK_THROWS_WITH_AS(parse_chain(doc), doctest::Contains("7"), DataError);
}

TEST_CASE("self-loops and duplicate edges") {
    CHECK_THROWS_AS(parse_chain(R"({"paradigm": "graph", "steps": ["a", "b"], "edges": [[1, 1]]})"),
                    DataError);
    const auto c =
        parse_chain(R"({"paradigm": "graph", "steps": ["a", "b"], "edges": [[1, 0], [0, 1], [0, 1]]})");
    CHECK(c.edges.size() == 1);
    CHECK(c.edges[0] == std::pair<int, int>{0, 1});
}

TEST_CASE("unknown paradigm is named in the error") {
    CHECK_THROWS_WITH_AS(parse_chain(R"({"paradigm": "dag", "steps": []})"), doctest::Contains("dag"),
                         DataError);
}

TEST_CASE("syntax errors report a position") {
    CHECK_THROWS_WITH_AS(parse_chain("{\"paradigm\": "), doctest::Contains("byte"), DataError);
}

TEST_CASE("tree invariants: single root, reachable parents, chain purity") {
    CHECK_THROWS_AS(parse_chain(R"({"paradigm": "tree", "steps": [
        {"text": "a", "depth": 0, "branch": 0}, {"text": "b", "depth": 0, "branch": 1}]})"),
                    DataError);
    CHECK_THROWS_AS(parse_chain(R"({"paradigm": "tree", "steps": [
        {"text": "a", "depth": 0, "branch": 0}, {"text": "b", "depth": 2, "branch": 0}]})"),
                    DataError);
    CHECK_THROWS_AS(parse_chain(R"({"paradigm": "tree", "steps": [{"text": "a", "depth": 0}]})"), DataError);
    CHECK_THROWS_AS(parse_chain(R"({"paradigm": "chain", "steps": ["a", "b"], "edges": [[0, 1]]})"),
                    DataError);
    CHECK_THROWS_AS(
        parse_chain(R"({"paradigm": "chain", "steps": [{"text": "a", "depth": 1, "branch": 0}]})"),
        DataError);
}

TEST_CASE("3-step chain adjacency is the path graph") {
    const auto c = parse_chain(R"({"paradigm": "chain", "steps": ["a", "b", "c"]})");
    const Matrix a = adjacency_matrix(c);
    const std::vector<double> expected{0, 1, 0, 1, 0, 1, 0, 1, 0};
    CHECK(a.data == expected);
}

TEST_CASE("two steps with one edge") {
    const auto c = parse_chain(R"({"paradigm": "graph", "steps": ["a", "b"], "edges": [[0, 1]]})");
    const Matrix a = adjacency_matrix(c);
    CHECK(a.data == std::vector<double>{0, 1, 1, 0});
}

TEST_CASE("select_view: identity, restriction, missing annotation") {
    const auto g = parse_chain(R"({
      "paradigm": "graph",
      "steps": ["a", "b", "c", "d", "e"],
      "edges": [[0, 1], [1, 2], [2, 4], [0, 2], [3, 4]],
      "final_path": [0, 2, 4]})");

    CHECK(select_view(g, View::full_graph) == g);

    std::vector<int> kept;
    const auto r = select_view(g, View::final_path, &kept);
    CHECK(kept == std::vector<int>{0, 2, 4});
    CHECK(r.steps.size() == 3);
    CHECK(r.steps[1].text == "c");
    // induced edges (0,2) -> (0,1) and (2,4) -> (1,2)
    CHECK(r.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});

    const auto plain = parse_chain(R"({"paradigm": "chain", "steps": ["a"]})");
    CHECK_THROWS_AS(select_view(plain, View::final_path), DataError);
}

TEST_CASE("final_path must reference valid unique ids") {
    CHECK_THROWS_AS(parse_chain(R"({"paradigm": "chain", "steps": ["a"], "final_path": [0, 0]})"), DataError);
    CHECK_THROWS_AS(parse_chain(R"({"paradigm": "chain", "steps": ["a"], "final_path": [3]})"), DataError);
}

TEST_CASE("serialize/parse round-trip on random chains") {
    DeterministicRng rng(7);
    for (int i = 0; i < 200; ++i) {
        const auto c = tt_test::random_chain(rng);
        const auto back = parse_chain(serialize_chain(c));
        CHECK(back == c);
    }
}

TEST_CASE("adjacency is symmetric with zero diagonal on random chains") {
    DeterministicRng rng(8);
    for (int i = 0; i < 200; ++i) {
        const auto c = tt_test::random_chain(rng);
        if (c.steps.empty()) continue;
        const Matrix a = adjacency_matrix(c);
        for (std::size_t r = 0; r < a.rows; ++r) {
            CHECK(a(r, r) == 0.0);
            for (std::size_t s = r + 1; s < a.cols; ++s) CHECK(a(r, s) == a(s, r));
        }
    }
}

TEST_CASE("reconstructed trees have n-1 edges and are connected") {
    DeterministicRng rng(9);
    int seen = 0;
    while (seen < 100) {
        const auto c = tt_test::random_chain(rng);
        if (c.paradigm != Paradigm::tree) continue;
        ++seen;
        const auto edges = chain_edges(c);
        CHECK(edges.size() == c.steps.size() - 1);
        CHECK(tt_test::union_find_components(adjacency_matrix(c)) == 1);
    }
}

TEST_CASE("empty chain paradigm parses; empty tree does not") {
    const auto c = parse_chain(R"({"paradigm": "chain", "steps": []})");
    CHECK(c.steps.empty());
    CHECK_THROWS_AS(parse_chain(R"({"paradigm": "tree", "steps": []})"), DataError);
}

TEST_CASE("batch parsing") {
    const auto chains = parse_batch(R"([
      {"paradigm": "chain", "steps": ["a"]},
      {"paradigm": "graph", "steps": ["a", "b"], "edges": [[0, 1]], "label": "correct"}
    ])");
    CHECK(chains.size() == 2);
    CHECK(chains[1].label == "correct");
    CHECK_THROWS_AS(parse_batch(R"({"paradigm": "chain"})"), DataError);
}
