#include "tracetopo/embed_client.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "tracetopo/errors.hpp"
#include "tracetopo/hash.hpp"

namespace tracetopo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kModule = "embedding";

fs::path cache_path(const EmbedClientConfig& config, const std::string& text) {
    const std::string key = sha256_hex(config.endpoint + '\0' + text);
    return fs::path(config.cache_dir) / (key + ".vec");
}

std::optional<std::vector<float>> cache_read(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();
    if (bytes.size() < 4 || (bytes.size() - 4) % 4 != 0) return std::nullopt;
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    std::uint32_t d = static_cast<std::uint32_t>(p[0]) | p[1] << 8 | p[2] << 16 | p[3] << 24;
    if (bytes.size() != 4 + static_cast<std::size_t>(d) * 4) return std::nullopt;
    std::vector<float> row(d);
    std::memcpy(row.data(), bytes.data() + 4, static_cast<std::size_t>(d) * 4);
    return row;
}

// Write to a temp file then rename, so concurrent writers of the same key
// never expose a torn entry.
void cache_write(const fs::path& path, const std::vector<float>& row) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) return;  // cache is best effort; the fetch already succeeded
        std::uint32_t d = static_cast<std::uint32_t>(row.size());
        unsigned char hdr[4] = {static_cast<unsigned char>(d & 0xff), static_cast<unsigned char>((d >> 8) & 0xff),
                                static_cast<unsigned char>((d >> 16) & 0xff),
                                static_cast<unsigned char>((d >> 24) & 0xff)};
        out.write(reinterpret_cast<const char*>(hdr), 4);
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * 4));
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) fs::remove(tmp, ec);
}

std::vector<std::vector<float>> post_batch(const EmbedClientConfig& config,
                                           const std::vector<std::string>& texts) {
    httplib::Client client(config.endpoint);
    client.set_connection_timeout(config.timeout_seconds, 0);
    client.set_read_timeout(config.timeout_seconds, 0);
    httplib::Headers headers;
    if (config.auth_token) headers.emplace("Authorization", "Bearer " + *config.auth_token);

    json body;
    body["texts"] = texts;
    const std::string payload = body.dump();

    httplib::Result res;
    for (int attempt = 0; attempt < std::max(1, config.retries); ++attempt) {
        res = client.Post("/embed", headers, payload, "application/json");
        if (res) break;  // HTTP-level errors are not retried, only transport failures
    }
    if (!res)
        throw DataError(kModule, "transport failure reaching " + config.endpoint + " after " +
                                     std::to_string(std::max(1, config.retries)) +
                                     " attempts: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw DataError(kModule, "embedding service returned status " + std::to_string(res->status) + ": " +
                                     res->body);

    json doc;
    try {
        doc = json::parse(res->body);
    } catch (const json::parse_error& e) {
        throw DataError(kModule, std::string("embedding service returned invalid JSON: ") + e.what());
    }
    if (!doc.contains("dimension") || !doc.contains("vectors"))
        throw DataError(kModule, "embedding service response missing 'dimension' or 'vectors'");
    const auto dimension = doc.at("dimension").get<std::size_t>();
    auto vectors = doc.at("vectors").get<std::vector<std::vector<float>>>();
    if (vectors.size() != texts.size())
        throw DataError(kModule, "cardinality mismatch: sent " + std::to_string(texts.size()) +
                                     " texts, received " + std::to_string(vectors.size()) + " vectors");
    for (const auto& row : vectors)
        if (row.size() != dimension)
            throw DataError(kModule, "embedding service row length " + std::to_string(row.size()) +
                                         " disagrees with reported dimension " + std::to_string(dimension));
    return vectors;
}

}  // namespace

EmbeddingSet fetch_embeddings(const EmbedClientConfig& config, const std::vector<std::string>& texts) {
    if (texts.empty()) return embeddings_from_rows({}, EmbeddingSource::service);
    if (config.endpoint.empty()) throw ConfigError(kModule, "no embedding service endpoint configured");
    for (const auto& t : texts)
        if (t.empty()) throw DataError(kModule, "cannot embed an empty text");

    std::vector<std::vector<float>> rows(texts.size());
    std::vector<std::size_t> misses;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (auto hit = cache_read(cache_path(config, texts[i]))) {
            rows[i] = std::move(*hit);
        } else {
            misses.push_back(i);
        }
    }

    const int batch = std::max(1, config.max_batch);
    for (std::size_t start = 0; start < misses.size(); start += static_cast<std::size_t>(batch)) {
        const std::size_t end = std::min(misses.size(), start + static_cast<std::size_t>(batch));
        std::vector<std::string> chunk;
        chunk.reserve(end - start);
        for (std::size_t k = start; k < end; ++k) chunk.push_back(texts[misses[k]]);
        auto fetched = post_batch(config, chunk);
        for (std::size_t k = start; k < end; ++k) {
            rows[misses[k]] = std::move(fetched[k - start]);
            cache_write(cache_path(config, texts[misses[k]]), rows[misses[k]]);
        }
    }

    auto set = embeddings_from_rows(std::move(rows), EmbeddingSource::service);
    return set;
}

}  // namespace tracetopo
