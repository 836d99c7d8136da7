#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tracetopo/batch.hpp"
#include "tracetopo/config.hpp"
#include "tracetopo/pca.hpp"
#include "tracetopo/persistence.hpp"

namespace tracetopo {

// Everything produced for one chain.
struct ChainAnalysis {
    ReasoningChain chain;  // after view selection
    std::string method;    // cot | tot | got from the original paradigm
    PersistenceDiagram diagram;
    TopologyReport report;
    std::optional<PcaProjection> projection;
};

// Resolves embeddings per config (inline fixture rows, file, or service),
// applies the view, encodes, builds the filtration, reduces, and reports.
ChainAnalysis analyze_chain(const ReasoningChain& chain, const RunConfig& config);

// Embedding resolution alone (used by the fetch subcommand).
EmbeddingSet resolve_embeddings(const ReasoningChain& chain, const RunConfig& config);

struct BatchFailure {
    std::string chain_id;
    std::string reason;
};

struct BatchOutcome {
    std::vector<BatchRecord> records;        // full-graph records, input order
    std::vector<BatchRecord> final_records;  // final-path records where annotated
    std::vector<ChainAnalysis> analyses;     // aligned with records
    std::vector<BatchFailure> failures;
    std::vector<BatchFailure> skipped;  // e.g. final-path view without annotation
};

// Runs every chain of a batch (in parallel up to config.jobs), collecting
// per-chain records plus the final-path re-analysis where annotated.
// Failures are collected, not thrown.
BatchOutcome run_batch(const std::vector<ReasoningChain>& chains, const RunConfig& config);

BatchRecord record_from_analysis(const ChainAnalysis& analysis, const ReasoningChain& original,
                                 std::size_t index);

}  // namespace tracetopo
