#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tracetopo/metrics.hpp"

namespace tracetopo {

// One analyzed chain in a batch study.
struct BatchRecord {
    std::string chain_id;
    std::string method;   // cot | tot | got, from the original paradigm
    std::string dataset;
    std::optional<int> outcome;  // 1 = correct, 0 = incorrect
    std::optional<long> token_count;
    std::optional<double> wall_time;
    TopologyReport report;

    // Numeric value of a named variable: "acc", "tokens", "time", or any
    // flat report key such as "h1.count" or "h0.entropy". Missing
    // optionals resolve to nullopt and drop the record pairwise.
    std::optional<double> variable(const std::string& name) const;
};

struct CorrelationMatrix {
    std::vector<std::string> variables;
    std::vector<std::vector<std::optional<double>>> r;  // symmetric; nullopt = undefined
    std::vector<std::vector<int>> pair_counts;          // records used per pair
};

// Pearson product-moment over the resolvable records, pairwise deletion.
// Entries with fewer than 2 usable records or zero variance are
// undefined, never NaN. Throws DataError with fewer than 2 records.
CorrelationMatrix pearson_correlation_matrix(const std::vector<BatchRecord>& records,
                                             const std::vector<std::string>& variables);

std::string correlation_to_json(const CorrelationMatrix& m);
std::string correlation_to_csv(const CorrelationMatrix& m);

// One row per (dataset, method): record count, mean outcome, mean feature
// counts, and means of the per-chain max/average lifetimes.
struct AggregateRow {
    std::string dataset;
    std::string method;
    int records = 0;
    std::optional<double> accuracy;
    double h0_count_mean = 0.0;
    double h1_count_mean = 0.0;
    double h0_max_lifetime_mean = 0.0;
    double h0_avg_lifetime_mean = 0.0;
    double h1_max_lifetime_mean = 0.0;
    double h1_avg_lifetime_mean = 0.0;
};

std::vector<AggregateRow> aggregate_batch(const std::vector<BatchRecord>& records);

std::string aggregate_to_csv(const std::vector<AggregateRow>& rows);
std::string aggregate_to_json(const std::vector<AggregateRow>& rows);

// Per-record flat CSV (ids, tags, outcome, and all report fields).
std::string records_to_csv(const std::vector<BatchRecord>& records);

}  // namespace tracetopo
