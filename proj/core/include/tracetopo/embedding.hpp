#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tracetopo/chain.hpp"

namespace tracetopo {

enum class EmbeddingSource { file, service, fixture };

// Per-step semantic vectors, 32-bit floats end to end; all topology math
// upconverts to 64-bit. Rows are indexed by step id.
struct EmbeddingSet {
    std::size_t dimension = 0;
    std::vector<std::vector<float>> vectors;
    EmbeddingSource source = EmbeddingSource::file;

    std::size_t size() const { return vectors.size(); }
};

// Loads a ".json" file (array of arrays) or the flat binary format
// (u32 n, u32 d little-endian header, then n*d little-endian f32).
// An empty file is the valid empty set.
EmbeddingSet load_embeddings(const std::string& path);

// Writes the flat binary format; load(save(x)) is bit-exact.
void save_embeddings_binary(const std::string& path, const EmbeddingSet& set);
void save_embeddings_json(const std::string& path, const EmbeddingSet& set);

// Builds a set from in-memory rows, validating rectangularity/finiteness.
EmbeddingSet embeddings_from_rows(std::vector<std::vector<float>> rows, EmbeddingSource source);

// A chain plus its attached semantic vectors.
struct EmbeddedChain {
    ReasoningChain chain;
    EmbeddingSet embeddings;
};

// Pairs step i with vector i; throws DataError on cardinality mismatch.
EmbeddedChain attach(ReasoningChain chain, EmbeddingSet set);

}  // namespace tracetopo
