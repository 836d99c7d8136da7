#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tracetopo/distance.hpp"
#include "tracetopo/encoding.hpp"
#include "tracetopo/metrics.hpp"

namespace tracetopo {

enum class EmbeddingSourceKind { file, service, fixture };

// Everything one run needs. Field-by-field precedence is
// CLI flags > config file > environment > defaults; merging happens in
// merge_config, the CLI layer only records which flags were set.
struct RunConfig {
    std::string input;  // chain or batch document

    EmbeddingSourceKind embedding_source = EmbeddingSourceKind::fixture;
    std::string embeddings_path;
    std::string endpoint;
    std::optional<std::string> auth_token;
    std::string cache_dir = ".tracetopo-cache";
    int max_batch = 32;

    EncodingParams encoding;

    Metric metric = Metric::euclidean;
    double w_sem = 0.5;
    double w_struct = 0.5;

    double eps_max = 0.0;  // <= 0: one ulp above the largest pairwise distance
    int max_hom_dim = 1;   // highest homology dimension; the complex goes one higher
    std::vector<int> dims = {0, 1};
    bool dims_explicit = false;
    std::vector<double> betti_grid;
    double min_persistence = 0.0;
    InfinitePolicy infinite_policy = InfinitePolicy::exclude;

    View view = View::full_graph;
    std::optional<int> project_dim;  // 2 or 3: also emit a PCA projection

    std::string out_dir = "out";
    bool render_barcode = false;
    bool render_diagram = false;
    int jobs = 0;  // 0: hardware concurrency

    std::vector<std::string> variables = {"acc", "tokens", "time", "h0.count", "h1.count"};
};

// Partial overlay: only the fields present in the source. Produced from
// the config file and from CLI flags.
struct RunConfigOverlay {
    std::optional<std::string> input;
    std::optional<std::string> embedding_source;
    std::optional<std::string> embeddings_path;
    std::optional<std::string> endpoint;
    std::optional<std::string> auth_token;
    std::optional<std::string> cache_dir;
    std::optional<int> max_batch;
    std::optional<std::string> scheme;
    std::optional<int> laplacian_dim;
    std::optional<int> struct_dim;
    std::optional<double> scale;
    std::optional<bool> normalize;
    std::optional<std::string> metric;
    std::optional<double> w_sem;
    std::optional<double> w_struct;
    std::optional<double> eps_max;
    std::optional<int> max_hom_dim;
    std::optional<std::vector<int>> dims;
    std::optional<std::vector<double>> betti_grid;
    std::optional<double> min_persistence;
    std::optional<std::string> infinite_policy;
    std::optional<std::string> view;
    std::optional<int> project_dim;
    std::optional<std::string> out_dir;
    std::optional<bool> render_barcode;
    std::optional<bool> render_diagram;
    std::optional<int> jobs;
    std::optional<std::vector<std::string>> variables;
};

RunConfigOverlay overlay_from_json(const std::string& text);
RunConfigOverlay load_config_file(const std::string& path);

// Environment source: endpoint/auth token from TRACETOPO_EMBED_ENDPOINT
// and TRACETOPO_EMBED_TOKEN.
RunConfigOverlay overlay_from_environment();

// defaults <- env <- file <- cli, validating ranges at the end.
RunConfig merge_config(const RunConfigOverlay& environment, const RunConfigOverlay& file,
                       const RunConfigOverlay& cli);

// Range/consistency checks; throws ConfigError.
void validate_config(const RunConfig& config);

// Resolved-config echo for the run manifest.
std::string config_to_json(const RunConfig& config);

}  // namespace tracetopo
