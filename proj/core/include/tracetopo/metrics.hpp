#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tracetopo/persistence.hpp"

namespace tracetopo {

// How infinite bars enter lifetime statistics: dropped, or truncated at
// the filtration cap.
enum class InfinitePolicy { exclude, truncate };

std::string to_string(InfinitePolicy p);
InfinitePolicy infinite_policy_from_string(const std::string& s);

struct LifetimeStats {
    double total = 0.0;
    double mean = 0.0;
    double max = 0.0;
    double variance = 0.0;  // population (1/N) form
    int sample_count = 0;   // bars entering the statistics under the policy
};

// Statistics over the dimension-k lifetimes under the policy. An empty
// bar set yields all zeros.
LifetimeStats lifetime_statistics(const PersistenceDiagram& diag, int k, InfinitePolicy policy);

// Shannon entropy of normalized lifetimes (natural log). Throws
// NumericError when no positive finite lifetime exists under the policy,
// to keep "undefined" distinct from the single-bar value 0.
double persistent_entropy(const PersistenceDiagram& diag, int k, InfinitePolicy policy);

// Bars with lifetime strictly above min_persistence; infinite bars always
// count.
int feature_count(const PersistenceDiagram& diag, int k, double min_persistence);

struct StableComponents {
    int count = 0;
    bool eps_limited = false;  // cap below the largest distance: count is a lower bound
};

// The component count once merging stops: the infinite dimension-0 bars.
StableComponents stable_component_count(const PersistenceDiagram& diag);

struct DimensionMetrics {
    int count = 0;           // feature_count at the configured min_persistence
    int infinite_count = 0;
    LifetimeStats stats;
    std::optional<double> entropy;
    std::string entropy_reason;          // set when entropy is undefined
    std::map<double, int> betti_at_eps;  // optional scale grid evaluations
};

struct ReportProvenance {
    std::string metric = "euclidean";
    std::string scheme = "auto";
    double eps_max = 0.0;
    double min_persistence = 0.0;
    InfinitePolicy infinite_policy = InfinitePolicy::exclude;
    std::size_t point_count = 0;
    std::size_t point_dimension = 0;
    bool top_dim_partial = false;  // bars at the filtration's top dimension were dropped
};

// The per-chain metric bundle.
struct TopologyReport {
    std::map<int, DimensionMetrics> dims;
    StableComponents stable;
    ReportProvenance meta;
};

// Populates every block for the requested homology dimensions.
// betti_grid entries are evaluated per dimension via betti_number_at.
TopologyReport build_report(const PersistenceDiagram& diag, const std::vector<int>& dims,
                            const ReportProvenance& meta, const std::vector<double>& betti_grid = {});

// Flat JSON with dotted keys ("h0.count", "h1.entropy", ...) and a CSV
// row form sharing the same column set.
std::string report_to_json(const TopologyReport& report);
std::map<std::string, std::string> report_flat_fields(const TopologyReport& report);
std::string report_csv_header(const TopologyReport& report);
std::string report_csv_row(const TopologyReport& report);

}  // namespace tracetopo
