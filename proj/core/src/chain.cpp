#include "tracetopo/chain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tracetopo/errors.hpp"

namespace tracetopo {

using nlohmann::json;

namespace {

constexpr const char* kModule = "chain";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(kModule, "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(const std::string& document) {
    try {
        return json::parse(document);
    } catch (const json::parse_error& e) {
        throw DataError(kModule, "syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

void validate_tree(const ReasoningChain& c) {
    int roots = 0;
    std::set<int> depths;
    for (const auto& s : c.steps) {
        if (!s.depth || !s.branch)
            throw DataError(kModule, "tree paradigm requires depth and branch on every step; missing on step " +
                                         std::to_string(s.id));
        if (*s.depth < 0 || *s.branch < 0)
            throw DataError(kModule, "negative depth/branch on step " + std::to_string(s.id));
        if (*s.depth == 0) ++roots;
        depths.insert(*s.depth);
    }
    if (roots != 1)
        throw DataError(kModule, "tree paradigm requires exactly one step with depth 0, found " +
                                     std::to_string(roots));
    // Parent reconstruction needs a preceding step one level up.
    for (const auto& s : c.steps) {
        if (*s.depth == 0) continue;
        bool found = false;
        for (int j = s.id - 1; j >= 0; --j) {
            if (*c.steps[j].depth == *s.depth - 1) {
                found = true;
                break;
            }
        }
        if (!found)
            throw DataError(kModule, "tree parent reconstruction is ambiguous: step " + std::to_string(s.id) +
                                         " at depth " + std::to_string(*s.depth) +
                                         " has no preceding step at depth " + std::to_string(*s.depth - 1));
    }
}

std::vector<std::pair<int, int>> normalize_edges(std::vector<std::pair<int, int>> edges, int n) {
    for (auto& [a, b] : edges) {
        if (a == b) throw DataError(kModule, "self-loop on step id " + std::to_string(a));
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw DataError(kModule, "edge references unknown step id " + std::to_string(std::max(a, b)) +
                                         " (chain has " + std::to_string(n) + " steps)");
        if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

bool is_connected(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n == 0) return true;
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (auto [a, b] : edges) parent[find(a)] = find(b);
    for (int i = 1; i < n; ++i)
        if (find(i) != find(0)) return false;
    return true;
}

void validate(const ReasoningChain& c) {
    const int n = static_cast<int>(c.steps.size());
    switch (c.paradigm) {
        case Paradigm::chain:
            if (!c.edges.empty()) throw DataError(kModule, "chain paradigm must not carry explicit edges");
            for (const auto& s : c.steps)
                if (s.depth || s.branch)
                    throw DataError(kModule, "depth/branch annotations are tree-only; found on step " +
                                                 std::to_string(s.id));
            break;
        case Paradigm::tree:
            if (n == 0) throw DataError(kModule, "tree paradigm requires at least one step");
            validate_tree(c);
            if (!c.edges.empty()) {
                // Explicit edges override reconstruction; they must still form a tree.
                if (static_cast<int>(c.edges.size()) != n - 1 || !is_connected(n, c.edges))
                    throw DataError(kModule, "explicit tree edges must form a connected tree on " +
                                                 std::to_string(n) + " steps");
            }
            break;
        case Paradigm::graph:
            for (const auto& s : c.steps)
                if (s.depth || s.branch)
                    throw DataError(kModule, "depth/branch annotations are tree-only; found on step " +
                                                 std::to_string(s.id));
            break;
    }
    if (c.final_path) {
        std::set<int> seen;
        for (int id : *c.final_path) {
            if (id < 0 || id >= n)
                throw DataError(kModule, "final_path references unknown step id " + std::to_string(id));
            if (!seen.insert(id).second)
                throw DataError(kModule, "final_path repeats step id " + std::to_string(id));
        }
    }
}

ReasoningChain chain_from_json(const json& doc) {
    if (!doc.is_object()) throw DataError(kModule, "chain document must be a JSON object");
    // Fixture-style wrapper: the chain sits under a "chain" key next to
    // "config"/"expected" blocks.
    if (!doc.contains("paradigm") && doc.contains("chain")) return chain_from_json(doc.at("chain"));
    ReasoningChain c;

    if (!doc.contains("paradigm")) throw DataError(kModule, "missing required field 'paradigm'");
    c.paradigm = paradigm_from_string(doc.at("paradigm").get<std::string>());

    if (!doc.contains("steps") || !doc.at("steps").is_array())
        throw DataError(kModule, "missing required array field 'steps'");
    int id = 0;
    for (const auto& s : doc.at("steps")) {
        ReasoningStep step;
        step.id = id++;
        if (s.is_string()) {
            step.text = s.get<std::string>();
        } else if (s.is_object()) {
            step.text = s.value("text", std::string{});
            if (s.contains("depth")) step.depth = s.at("depth").get<int>();
            if (s.contains("branch")) step.branch = s.at("branch").get<int>();
        } else {
            throw DataError(kModule, "step " + std::to_string(step.id) + " must be a string or an object");
        }
        c.steps.push_back(std::move(step));
    }

    if (doc.contains("edges")) {
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 2)
                throw DataError(kModule, "each edge must be a [from, to] pair");
            edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        }
        c.edges = normalize_edges(std::move(edges), static_cast<int>(c.steps.size()));
    }
    if (doc.contains("label") && !doc.at("label").is_null()) c.label = doc.at("label").get<std::string>();
    if (doc.contains("final_path") && !doc.at("final_path").is_null())
        c.final_path = doc.at("final_path").get<std::vector<int>>();
    if (doc.contains("id") && !doc.at("id").is_null()) c.id = doc.at("id").get<std::string>();
    if (doc.contains("dataset") && !doc.at("dataset").is_null()) c.dataset = doc.at("dataset").get<std::string>();
    if (doc.contains("tokens") && !doc.at("tokens").is_null()) c.token_count = doc.at("tokens").get<long>();
    if (doc.contains("time") && !doc.at("time").is_null()) c.wall_time = doc.at("time").get<double>();
    if (doc.contains("embeddings") && !doc.at("embeddings").is_null())
        c.inline_embeddings = doc.at("embeddings").get<std::vector<std::vector<float>>>();
    if (doc.contains("embeddings_file") && !doc.at("embeddings_file").is_null())
        c.embeddings_file = doc.at("embeddings_file").get<std::string>();

    validate(c);
    return c;
}

json chain_to_json(const ReasoningChain& c) {
    json doc;
    doc["paradigm"] = to_string(c.paradigm);
    json steps = json::array();
    for (const auto& s : c.steps) {
        if (s.depth || s.branch) {
            json o;
            o["text"] = s.text;
            if (s.depth) o["depth"] = *s.depth;
            if (s.branch) o["branch"] = *s.branch;
            steps.push_back(o);
        } else {
            steps.push_back(s.text);
        }
    }
    doc["steps"] = steps;
    if (!c.edges.empty()) {
        json edges = json::array();
        for (auto [a, b] : c.edges) edges.push_back(json::array({a, b}));
        doc["edges"] = edges;
    }
    if (c.label) doc["label"] = *c.label;
    if (c.final_path) doc["final_path"] = *c.final_path;
    if (c.id) doc["id"] = *c.id;
    if (c.dataset) doc["dataset"] = *c.dataset;
    if (c.token_count) doc["tokens"] = *c.token_count;
    if (c.wall_time) doc["time"] = *c.wall_time;
    if (c.inline_embeddings) doc["embeddings"] = *c.inline_embeddings;
    if (c.embeddings_file) doc["embeddings_file"] = *c.embeddings_file;
    return doc;
}

// Nearest preceding step (by id) whose depth is exactly one less.
int tree_parent(const ReasoningChain& c, int i) {
    const int depth = *c.steps[i].depth;
    for (int j = i - 1; j >= 0; --j)
        if (*c.steps[j].depth == depth - 1) return j;
    throw InternalError(kModule, "validated tree lost its parent for step " + std::to_string(i));
}

}  // namespace

std::string to_string(Paradigm p) {
    switch (p) {
        case Paradigm::chain: return "chain";
        case Paradigm::tree: return "tree";
        case Paradigm::graph: return "graph";
    }
    return "chain";
}

Paradigm paradigm_from_string(const std::string& s) {
    if (s == "chain") return Paradigm::chain;
    if (s == "tree") return Paradigm::tree;
    if (s == "graph") return Paradigm::graph;
    throw DataError(kModule, "unknown paradigm '" + s + "' (expected chain, tree, or graph)");
}

ReasoningChain parse_chain(const std::string& document) { return chain_from_json(parse_json(document)); }

ReasoningChain load_chain(const std::string& path) { return parse_chain(read_file(path)); }

std::vector<ReasoningChain> parse_batch(const std::string& document) {
    json doc = parse_json(document);
    if (!doc.is_array()) throw DataError(kModule, "batch file must be a JSON array of chain documents");
    std::vector<ReasoningChain> out;
    out.reserve(doc.size());
    for (const auto& entry : doc) out.push_back(chain_from_json(entry));
    return out;
}

std::vector<ReasoningChain> load_batch(const std::string& path) { return parse_batch(read_file(path)); }

std::string serialize_chain(const ReasoningChain& chain) { return chain_to_json(chain).dump(2); }

std::vector<std::pair<int, int>> chain_edges(const ReasoningChain& chain) {
    const int n = static_cast<int>(chain.steps.size());
    std::vector<std::pair<int, int>> edges;
    switch (chain.paradigm) {
        case Paradigm::chain:
            for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
            break;
        case Paradigm::tree:
            if (!chain.edges.empty()) {
                edges = chain.edges;  // explicit edges override reconstruction
            } else {
                for (int i = 0; i < n; ++i) {
                    if (*chain.steps[i].depth == 0) continue;
                    int p = tree_parent(chain, i);
                    edges.emplace_back(std::min(p, i), std::max(p, i));
                }
                std::sort(edges.begin(), edges.end());
            }
            break;
        case Paradigm::graph:
            edges = chain.edges;
            break;
    }
    return edges;
}

Matrix adjacency_matrix(const ReasoningChain& chain) {
    const std::size_t n = chain.steps.size();
    Matrix a(n, n);
    for (auto [i, j] : chain_edges(chain)) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
    }
    return a;
}

ReasoningChain select_view(const ReasoningChain& chain, View view, std::vector<int>* kept_ids) {
    if (view == View::full_graph) {
        if (kept_ids) {
            kept_ids->resize(chain.steps.size());
            for (std::size_t i = 0; i < chain.steps.size(); ++i) (*kept_ids)[i] = static_cast<int>(i);
        }
        return chain;
    }
    if (!chain.final_path)
        throw DataError(kModule, "final_path view requested but the chain carries no final_path annotation");

    std::vector<int> kept = *chain.final_path;
    std::sort(kept.begin(), kept.end());  // relative step order
    std::vector<int> new_id(chain.steps.size(), -1);
    for (std::size_t i = 0; i < kept.size(); ++i) new_id[kept[i]] = static_cast<int>(i);

    ReasoningChain out;
    out.paradigm = Paradigm::graph;  // restricted structure is a general induced subgraph
    out.view = View::final_path;
    out.label = chain.label;
    out.id = chain.id;
    out.dataset = chain.dataset;
    out.token_count = chain.token_count;
    out.wall_time = chain.wall_time;
    for (int old : kept) {
        ReasoningStep s;
        s.id = new_id[old];
        s.text = chain.steps[old].text;
        out.steps.push_back(std::move(s));
    }
    for (auto [a, b] : chain_edges(chain))
        if (new_id[a] >= 0 && new_id[b] >= 0) out.edges.emplace_back(new_id[a], new_id[b]);
    std::sort(out.edges.begin(), out.edges.end());

    if (kept_ids) *kept_ids = kept;
    return out;
}

}  // namespace tracetopo
