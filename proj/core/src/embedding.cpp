#include "tracetopo/embedding.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tracetopo/errors.hpp"

namespace tracetopo {

namespace {

constexpr const char* kModule = "embedding";

bool has_json_extension(const std::string& path) {
    return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

void check_rows(const std::vector<std::vector<float>>& rows) {
    if (rows.empty()) return;
    const std::size_t d = rows.front().size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != d)
            throw DataError(kModule, "ragged rows: row " + std::to_string(i) + " has " +
                                         std::to_string(rows[i].size()) + " entries, expected " +
                                         std::to_string(d));
        for (float v : rows[i])
            if (!std::isfinite(v))
                throw DataError(kModule, "non-finite entry in row " + std::to_string(i));
    }
}

std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff), static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

float f32_from_le(const unsigned char* p) {
    std::uint32_t bits = read_u32_le(p);
    float f;
    std::memcpy(&f, &bits, sizeof(f));
    return f;
}

void write_f32_le(std::ostream& out, float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, sizeof(bits));
    write_u32_le(out, bits);
}

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big,
              "mixed-endian platforms unsupported");

}  // namespace

EmbeddingSet embeddings_from_rows(std::vector<std::vector<float>> rows, EmbeddingSource source) {
    check_rows(rows);
    EmbeddingSet set;
    set.dimension = rows.empty() ? 0 : rows.front().size();
    set.vectors = std::move(rows);
    set.source = source;
    return set;
}

EmbeddingSet load_embeddings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(kModule, "cannot open embedding file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();

    if (bytes.empty()) return embeddings_from_rows({}, EmbeddingSource::file);

    if (has_json_extension(path)) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(bytes);
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError(kModule, "embedding JSON syntax error in " + path + ": " + e.what());
        }
        if (!doc.is_array()) throw DataError(kModule, "embedding JSON must be an array of arrays: " + path);
        std::vector<std::vector<float>> rows;
        rows.reserve(doc.size());
        for (const auto& row : doc) rows.push_back(row.get<std::vector<float>>());
        return embeddings_from_rows(std::move(rows), EmbeddingSource::file);
    }

    if (bytes.size() < 8) throw DataError(kModule, "binary embedding file too short for header: " + path);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint32_t n = read_u32_le(p);
    const std::uint32_t d = read_u32_le(p + 4);
    const std::size_t expected = 8 + static_cast<std::size_t>(n) * d * 4;
    if (bytes.size() != expected)
        throw DataError(kModule, "binary embedding size mismatch in " + path + ": header says " +
                                     std::to_string(n) + "x" + std::to_string(d) + " (" +
                                     std::to_string(expected) + " bytes), file has " +
                                     std::to_string(bytes.size()));
    std::vector<std::vector<float>> rows(n, std::vector<float>(d));
    const unsigned char* cur = p + 8;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < d; ++j, cur += 4) rows[i][j] = f32_from_le(cur);
    return embeddings_from_rows(std::move(rows), EmbeddingSource::file);
}

void save_embeddings_binary(const std::string& path, const EmbeddingSet& set) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(kModule, "cannot write embedding file: " + path);
    write_u32_le(out, static_cast<std::uint32_t>(set.vectors.size()));
    write_u32_le(out, static_cast<std::uint32_t>(set.dimension));
    for (const auto& row : set.vectors)
        for (float v : row) write_f32_le(out, v);
}

void save_embeddings_json(const std::string& path, const EmbeddingSet& set) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(kModule, "cannot write embedding file: " + path);
    out << nlohmann::json(set.vectors).dump() << '\n';
}

EmbeddedChain attach(ReasoningChain chain, EmbeddingSet set) {
    if (chain.steps.size() != set.vectors.size())
        throw DataError(kModule, "cardinality mismatch: chain has " + std::to_string(chain.steps.size()) +
                                     " steps, embedding set has " + std::to_string(set.vectors.size()) +
                                     " rows");
    return EmbeddedChain{std::move(chain), std::move(set)};
}

}  // namespace tracetopo
