#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tracetopo/matrix.hpp"

namespace tracetopo {

enum class Paradigm { chain, tree, graph };
enum class View { full_graph, final_path };

std::string to_string(Paradigm p);
Paradigm paradigm_from_string(const std::string& s);

// One step of a reasoning trace. depth/branch are present exactly for
// the tree paradigm.
struct ReasoningStep {
    int id = 0;
    std::string text;
    std::optional<int> depth;
    std::optional<int> branch;

    bool operator==(const ReasoningStep&) const = default;
};

// A parsed reasoning trace: an ordered step list plus the structural
// annotations of its paradigm (implicit linear order, depth/branch tree,
// or an explicit undirected edge list). Immutable after construction.
struct ReasoningChain {
    Paradigm paradigm = Paradigm::chain;
    std::vector<ReasoningStep> steps;
    std::vector<std::pair<int, int>> edges;  // normalized (a < b), sorted, deduplicated
    std::optional<std::string> label;
    std::optional<std::vector<int>> final_path;
    View view = View::full_graph;

    // Optional batch metadata carried through from the input document.
    std::optional<std::string> id;
    std::optional<std::string> dataset;
    std::optional<long> token_count;
    std::optional<double> wall_time;
    std::optional<std::vector<std::vector<float>>> inline_embeddings;
    std::optional<std::string> embeddings_file;

    std::size_t size() const { return steps.size(); }

    bool operator==(const ReasoningChain&) const = default;
};

// Parses and validates one chain document (JSON, see README for the
// schema). Throws DataError with the violated rule and offending step id.
ReasoningChain parse_chain(const std::string& document);
ReasoningChain load_chain(const std::string& path);

// Parses a batch file: a JSON array of chain documents.
std::vector<ReasoningChain> parse_batch(const std::string& document);
std::vector<ReasoningChain> load_batch(const std::string& path);

// Canonical serialization; parse_chain(serialize_chain(c)) == c.
std::string serialize_chain(const ReasoningChain& chain);

// Symmetric 0/1 adjacency with zero diagonal. Chains yield the path
// graph, trees the reconstructed parent/child edges, graphs their edge
// list.
Matrix adjacency_matrix(const ReasoningChain& chain);

// Undirected edge list matching adjacency_matrix, normalized and sorted.
std::vector<std::pair<int, int>> chain_edges(const ReasoningChain& chain);

// Restriction of a chain to a view. final_path keeps the annotated step
// subset in relative order with induced edges only; the result carries
// graph-paradigm structure. kept_ids (when non-null) receives the
// original ids of the surviving steps, in output order.
ReasoningChain select_view(const ReasoningChain& chain, View view, std::vector<int>* kept_ids = nullptr);

}  // namespace tracetopo
