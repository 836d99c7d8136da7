#include "tracetopo/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "json.hpp"
#include "tracetopo/errors.hpp"

namespace tracetopo {

namespace {

constexpr const char* kModule = "persistence";

struct VertexVectorHash {
    std::size_t operator()(const std::vector<int>& v) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

// Symmetric difference of two ascending index lists (column addition over
// the two-element field).
std::vector<int> xor_columns(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) out.push_back(a[i++]);
        else if (a[i] > b[j]) out.push_back(b[j++]);
        else { ++i; ++j; }
    }
    out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
    out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
    return out;
}

void sort_bars(std::vector<PersistenceBar>& bars) {
    std::sort(bars.begin(), bars.end(), [](const PersistenceBar& a, const PersistenceBar& b) {
        if (a.dim != b.dim) return a.dim < b.dim;
        if (a.birth != b.birth) return a.birth < b.birth;
        if (a.infinite != b.infinite) return !a.infinite;  // finite deaths first
        return a.death < b.death;
    });
}

}  // namespace

std::vector<PersistenceBar> PersistenceDiagram::bars_in_dim(int k) const {
    std::vector<PersistenceBar> out;
    for (const auto& b : bars)
        if (b.dim == k) out.push_back(b);
    return out;
}

int PersistenceDiagram::infinite_bar_count(int k) const {
    int count = 0;
    for (const auto& b : bars)
        if (b.dim == k && b.infinite) ++count;
    return count;
}

PersistenceDiagram compute_persistence(const Filtration& f) {
    const std::size_t m = f.simplices.size();

    std::unordered_map<std::vector<int>, int, VertexVectorHash> index_of;
    index_of.reserve(m * 2);
    for (std::size_t i = 0; i < m; ++i) {
        auto [it, inserted] = index_of.emplace(f.simplices[i].vertices, static_cast<int>(i));
        if (!inserted) throw InternalError(kModule, "duplicate simplex in filtration");
    }

    // Boundary columns as ascending filtration indices.
    auto boundary = [&](std::size_t j) {
        const auto& verts = f.simplices[j].vertices;
        std::vector<int> col;
        col.reserve(verts.size());
        for (std::size_t drop = 0; drop < verts.size(); ++drop) {
            // face = verts without verts[verts.size()-1-drop]
            std::vector<int> fverts;
            fverts.reserve(verts.size() - 1);
            for (std::size_t t = 0; t < verts.size(); ++t)
                if (t != verts.size() - 1 - drop) fverts.push_back(verts[t]);
            auto it = index_of.find(fverts);
            if (it == index_of.end()) throw InternalError(kModule, "filtration is not closed under faces");
            if (it->second >= static_cast<int>(j))
                throw InternalError(kModule, "filtration violates face-before-coface ordering");
            col.push_back(it->second);
        }
        std::sort(col.begin(), col.end());
        return col;
    };

    std::vector<int> killer(m, -1);       // creator index -> column that kills it
    std::vector<char> cleared(m, 0);      // known-positive creators, paired in a higher round
    std::vector<int> pivot_owner(m, -1);  // low row -> reduced column living there
    std::unordered_map<int, std::vector<int>> reduced;  // column index -> reduced column

    // Clearing: process dimensions descending so pivots at dimension k+1
    // remove work at dimension k.
    for (int dim = f.max_dim; dim >= 1; --dim) {
        for (std::size_t j = 0; j < m; ++j) {
            if (f.simplices[j].dim() != dim || cleared[j]) continue;
            std::vector<int> col = boundary(j);
            while (!col.empty()) {
                const int low = col.back();
                const int owner = pivot_owner[static_cast<std::size_t>(low)];
                if (owner < 0) break;
                col = xor_columns(col, reduced.at(owner));
            }
            if (!col.empty()) {
                const int low = col.back();
                pivot_owner[static_cast<std::size_t>(low)] = static_cast<int>(j);
                killer[static_cast<std::size_t>(low)] = static_cast<int>(j);
                cleared[static_cast<std::size_t>(low)] = 1;
                reduced.emplace(static_cast<int>(j), std::move(col));
            }
            // empty column: j creates a dim-cycle; pairing (if any) was or
            // will never be found in this scheme only via higher dimensions,
            // which ran first, so j is essential in this complex.
        }
    }

    PersistenceDiagram diag;
    diag.max_dim = f.max_dim - 1;
    diag.partial_dim = f.max_dim;
    diag.eps_max = f.eps_max;
    diag.full_merge = f.full_merge;

    for (std::size_t i = 0; i < m; ++i) {
        const int dim = f.simplices[i].dim();
        const bool is_negative = reduced.contains(static_cast<int>(i));
        if (is_negative) continue;  // kills a (dim-1)-class, creates nothing
        PersistenceBar bar;
        bar.dim = dim;
        bar.birth = f.simplices[i].value;
        if (killer[i] >= 0) {
            bar.death = f.simplices[static_cast<std::size_t>(killer[i])].value;
            bar.infinite = false;
            if (bar.death == bar.birth) continue;  // zero-persistence artifact
        } else {
            bar.infinite = true;
            bar.death = std::numeric_limits<double>::infinity();
        }
        diag.bars.push_back(bar);
    }
    sort_bars(diag.bars);
    return diag;
}

int betti_number_at(const PersistenceDiagram& diag, double eps, int k) {
    if (k < 0 || k > diag.max_dim)
        throw ConfigError(kModule, "homology dimension " + std::to_string(k) +
                                       " outside the observed range [0, " + std::to_string(diag.max_dim) + "]");
    if (eps > diag.eps_max)
        throw ConfigError(kModule, "scale " + std::to_string(eps) + " exceeds the filtration cap " +
                                       std::to_string(diag.eps_max) + "; deaths beyond it are unknown");
    int count = 0;
    for (const auto& b : diag.bars)
        if (b.dim == k && b.birth <= eps && (b.infinite || eps < b.death)) ++count;
    return count;
}

namespace {

// All subsets of {0..n-1} with |s| = size whose pairwise distances are
// <= eps, in lexicographic order.
void enumerate_simplices(const DistanceMatrix& dm, double eps, int size, std::vector<int>& cur,
                         int next, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == size) {
        out.push_back(cur);
        return;
    }
    for (int v = next; v < static_cast<int>(dm.size()); ++v) {
        bool ok = true;
        for (int u : cur)
            if (dm.d(static_cast<std::size_t>(u), static_cast<std::size_t>(v)) > eps) {
                ok = false;
                break;
            }
        if (!ok) continue;
        cur.push_back(v);
        enumerate_simplices(dm, eps, size, cur, v + 1, out);
        cur.pop_back();
    }
}

// Rank of the boundary operator from (size)-vertex simplices to their
// facets, over the two-element field. Columns are bitsets over row
// indices.
int boundary_rank(const std::vector<std::vector<int>>& rows, const std::vector<std::vector<int>>& cols) {
    if (rows.empty() || cols.empty()) return 0;
    std::map<std::vector<int>, int> row_index;
    for (std::size_t i = 0; i < rows.size(); ++i) row_index.emplace(rows[i], static_cast<int>(i));

    const std::size_t words = (rows.size() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> pivots;  // reduced columns
    std::vector<int> pivot_row;

    int rank = 0;
    for (const auto& simplex : cols) {
        std::vector<std::uint64_t> col(words, 0);
        for (std::size_t drop = 0; drop < simplex.size(); ++drop) {
            std::vector<int> face;
            face.reserve(simplex.size() - 1);
            for (std::size_t t = 0; t < simplex.size(); ++t)
                if (t != drop) face.push_back(simplex[t]);
            const int r = row_index.at(face);
            col[static_cast<std::size_t>(r) / 64] ^= 1ull << (static_cast<std::size_t>(r) % 64);
        }
        auto highest = [&]() -> int {
            for (std::size_t w = words; w-- > 0;)
                if (col[w]) return static_cast<int>(w * 64 + 63 - static_cast<std::size_t>(__builtin_clzll(col[w])));
            return -1;
        };
        int h = highest();
        while (h >= 0) {
            bool hit = false;
            for (std::size_t p = 0; p < pivots.size(); ++p) {
                if (pivot_row[p] == h) {
                    for (std::size_t w = 0; w < words; ++w) col[w] ^= pivots[p][w];
                    hit = true;
                    break;
                }
            }
            if (!hit) break;
            h = highest();
        }
        if (h >= 0) {
            pivots.push_back(col);
            pivot_row.push_back(h);
            ++rank;
        }
    }
    return rank;
}

}  // namespace

int brute_force_betti(const DistanceMatrix& dm, double eps, int k, int max_dim) {
    if (dm.size() > 12)
        throw ConfigError(kModule, "brute-force oracle refuses n = " + std::to_string(dm.size()) +
                                       " (cap is 12; it enumerates every simplex)");
    if (k < 0) throw ConfigError(kModule, "homology dimension must be non-negative");

    auto simplices_of_size = [&](int size) {
        std::vector<std::vector<int>> out;
        if (size >= 1 && size <= static_cast<int>(dm.size())) {
            std::vector<int> cur;
            enumerate_simplices(dm, eps, size, cur, 0, out);
        }
        return out;
    };

    const auto s_k = simplices_of_size(k + 1);
    if (s_k.empty()) return 0;
    const auto s_km1 = simplices_of_size(k);
    const auto s_kp1 = (k + 1 <= max_dim) ? simplices_of_size(k + 2) : std::vector<std::vector<int>>{};

    const int rank_dk = (k == 0) ? 0 : boundary_rank(s_km1, s_k);
    const int rank_dk1 = boundary_rank(s_k, s_kp1);
    return static_cast<int>(s_k.size()) - rank_dk - rank_dk1;
}

std::string diagram_to_json(const PersistenceDiagram& diag) {
    nlohmann::json dims = nlohmann::json::object();
    nlohmann::json partial = nlohmann::json::object();
    for (const auto& b : diag.bars) {
        const std::string key = std::to_string(b.dim);
        nlohmann::json bar = nlohmann::json::array();
        bar.push_back(b.birth);
        if (b.infinite) bar.push_back("inf");
        else bar.push_back(b.death);
        // deaths above max_dim need simplices the complex never built
        nlohmann::json& bucket = (b.dim <= diag.max_dim) ? dims : partial;
        if (!bucket.contains(key)) bucket[key] = nlohmann::json::array();
        bucket[key].push_back(bar);
    }
    nlohmann::json doc;
    doc["dims"] = dims;
    if (!partial.empty()) doc["partial_dims"] = partial;
    doc["eps_max"] = diag.eps_max;
    doc["max_dim"] = diag.max_dim;
    doc["full_merge"] = diag.full_merge;
    return doc.dump(2);
}

PersistenceDiagram diagram_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(kModule, std::string("diagram JSON syntax error: ") + e.what());
    }
    PersistenceDiagram diag;
    diag.eps_max = doc.at("eps_max").get<double>();
    diag.max_dim = doc.value("max_dim", 1);
    diag.partial_dim = diag.max_dim + 1;
    diag.full_merge = doc.value("full_merge", false);
    auto read_bucket = [&](const nlohmann::json& bucket) {
        for (const auto& [key, bars] : bucket.items()) {
            const int dim = std::stoi(key);
            for (const auto& bar : bars) {
                PersistenceBar b;
                b.dim = dim;
                b.birth = bar.at(0).get<double>();
                if (bar.at(1).is_string()) {
                    if (bar.at(1).get<std::string>() != "inf")
                        throw DataError(kModule,
                                        "unknown death sentinel '" + bar.at(1).get<std::string>() + "'");
                    b.infinite = true;
                    b.death = std::numeric_limits<double>::infinity();
                } else {
                    b.death = bar.at(1).get<double>();
                }
                diag.bars.push_back(b);
            }
        }
    };
    read_bucket(doc.at("dims"));
    if (doc.contains("partial_dims")) read_bucket(doc.at("partial_dims"));
    sort_bars(diag.bars);
    return diag;
}

std::string diagram_to_csv(const PersistenceDiagram& diag) {
    std::string out = "dim,birth,death\n";
    char buf[96];
    for (const auto& b : diag.bars) {
        if (b.dim > diag.max_dim) continue;
        if (b.infinite) {
            std::snprintf(buf, sizeof(buf), "%d,%.17g,inf\n", b.dim, b.birth);
        } else {
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", b.dim, b.birth, b.death);
        }
        out += buf;
    }
    return out;
}

}  // namespace tracetopo
