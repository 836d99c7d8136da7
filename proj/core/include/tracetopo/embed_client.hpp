#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tracetopo/embedding.hpp"

namespace tracetopo {

// Remote embedding service access. Wire protocol: HTTP POST /embed with
// body {"texts": [...]}, response {"dimension": d, "vectors": [[...], ...]}.
// Responses are written through to an on-disk cache keyed by
// (endpoint, text) content hashes, so identical requests replay
// byte-identically without touching the network.
struct EmbedClientConfig {
    std::string endpoint;                // e.g. http://localhost:8089
    std::optional<std::string> auth_token;  // sent as "Authorization: Bearer <token>"
    std::string cache_dir = ".tracetopo-cache";
    int max_batch = 32;
    int retries = 3;          // transport failures only; HTTP errors pass through
    int timeout_seconds = 30;
};

// One vector per text, order preserved. Empty input returns the empty set
// without a network call. Throws DataError on transport failure after the
// retry budget, on non-200 responses (status and body included), and on
// cardinality or dimension mismatches.
EmbeddingSet fetch_embeddings(const EmbedClientConfig& config, const std::vector<std::string>& texts);

}  // namespace tracetopo
