#include "tracetopo/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tracetopo/errors.hpp"

namespace tracetopo {

using nlohmann::json;

namespace {

constexpr const char* kModule = "config";

template <typename T>
void take(std::optional<T>& dst, const std::optional<T>& src) {
    if (src) dst = src;
}

}  // namespace

RunConfigOverlay overlay_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(kModule, std::string("config file syntax error: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError(kModule, "config file must hold a JSON object");

    RunConfigOverlay o;
    auto get = [&](const char* key, auto& field) {
        using T = typename std::decay_t<decltype(field)>::value_type;
        if (doc.contains(key) && !doc.at(key).is_null()) field = doc.at(key).get<T>();
    };
    get("input", o.input);
    get("embedding_source", o.embedding_source);
    get("embeddings_path", o.embeddings_path);
    get("endpoint", o.endpoint);
    get("auth_token", o.auth_token);
    get("cache_dir", o.cache_dir);
    get("max_batch", o.max_batch);
    get("scheme", o.scheme);
    get("laplacian_dim", o.laplacian_dim);
    get("struct_dim", o.struct_dim);
    get("scale", o.scale);
    get("normalize", o.normalize);
    get("metric", o.metric);
    get("w_sem", o.w_sem);
    get("w_struct", o.w_struct);
    get("eps_max", o.eps_max);
    get("max_dim", o.max_hom_dim);
    get("dims", o.dims);
    get("betti_grid", o.betti_grid);
    get("min_persistence", o.min_persistence);
    get("infinite_policy", o.infinite_policy);
    get("view", o.view);
    get("project_dim", o.project_dim);
    get("out_dir", o.out_dir);
    get("render_barcode", o.render_barcode);
    get("render_diagram", o.render_diagram);
    get("jobs", o.jobs);
    get("variables", o.variables);
    return o;
}

RunConfigOverlay load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(kModule, "cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return overlay_from_json(ss.str());
}

RunConfigOverlay overlay_from_environment() {
    RunConfigOverlay o;
    if (const char* endpoint = std::getenv("TRACETOPO_EMBED_ENDPOINT")) o.endpoint = std::string(endpoint);
    if (const char* token = std::getenv("TRACETOPO_EMBED_TOKEN")) o.auth_token = std::string(token);
    return o;
}

RunConfig merge_config(const RunConfigOverlay& environment, const RunConfigOverlay& file,
                       const RunConfigOverlay& cli) {
    RunConfigOverlay merged;
    for (const auto* layer : {&environment, &file, &cli}) {
        take(merged.input, layer->input);
        take(merged.embedding_source, layer->embedding_source);
        take(merged.embeddings_path, layer->embeddings_path);
        take(merged.endpoint, layer->endpoint);
        take(merged.auth_token, layer->auth_token);
        take(merged.cache_dir, layer->cache_dir);
        take(merged.max_batch, layer->max_batch);
        take(merged.scheme, layer->scheme);
        take(merged.laplacian_dim, layer->laplacian_dim);
        take(merged.struct_dim, layer->struct_dim);
        take(merged.scale, layer->scale);
        take(merged.normalize, layer->normalize);
        take(merged.metric, layer->metric);
        take(merged.w_sem, layer->w_sem);
        take(merged.w_struct, layer->w_struct);
        take(merged.eps_max, layer->eps_max);
        take(merged.max_hom_dim, layer->max_hom_dim);
        take(merged.dims, layer->dims);
        take(merged.betti_grid, layer->betti_grid);
        take(merged.min_persistence, layer->min_persistence);
        take(merged.infinite_policy, layer->infinite_policy);
        take(merged.view, layer->view);
        take(merged.project_dim, layer->project_dim);
        take(merged.out_dir, layer->out_dir);
        take(merged.render_barcode, layer->render_barcode);
        take(merged.render_diagram, layer->render_diagram);
        take(merged.jobs, layer->jobs);
        take(merged.variables, layer->variables);
    }

    RunConfig c;
    if (merged.input) c.input = *merged.input;
    if (merged.embedding_source) {
        const std::string& s = *merged.embedding_source;
        if (s == "file") c.embedding_source = EmbeddingSourceKind::file;
        else if (s == "service") c.embedding_source = EmbeddingSourceKind::service;
        else if (s == "fixture") c.embedding_source = EmbeddingSourceKind::fixture;
        else throw ConfigError(kModule, "unknown embedding source '" + s + "' (file, service, or fixture)");
    }
    if (merged.embeddings_path) {
        c.embeddings_path = *merged.embeddings_path;
        if (!merged.embedding_source) c.embedding_source = EmbeddingSourceKind::file;
    }
    if (merged.endpoint) {
        c.endpoint = *merged.endpoint;
        if (!merged.embedding_source && !merged.embeddings_path)
            c.embedding_source = EmbeddingSourceKind::service;
    }
    if (merged.auth_token) c.auth_token = merged.auth_token;
    if (merged.cache_dir) c.cache_dir = *merged.cache_dir;
    if (merged.max_batch) c.max_batch = *merged.max_batch;
    if (merged.scheme) c.encoding.scheme = scheme_from_string(*merged.scheme);
    if (merged.laplacian_dim) c.encoding.laplacian_dim = *merged.laplacian_dim;
    if (merged.struct_dim) c.encoding.struct_dim = *merged.struct_dim;
    if (merged.scale) c.encoding.scale = *merged.scale;
    if (merged.normalize) c.encoding.normalize = *merged.normalize;
    if (merged.metric) c.metric = metric_from_string(*merged.metric);
    if (merged.w_sem) c.w_sem = *merged.w_sem;
    if (merged.w_struct) c.w_struct = *merged.w_struct;
    if (merged.eps_max) c.eps_max = *merged.eps_max;
    if (merged.max_hom_dim) c.max_hom_dim = *merged.max_hom_dim;
    if (merged.dims) {
        c.dims = *merged.dims;
        c.dims_explicit = true;
    } else if (c.max_hom_dim > 1) {
        c.dims.clear();
        for (int k = 0; k <= c.max_hom_dim; ++k) c.dims.push_back(k);
    }
    if (merged.betti_grid) c.betti_grid = *merged.betti_grid;
    if (merged.min_persistence) c.min_persistence = *merged.min_persistence;
    if (merged.infinite_policy) c.infinite_policy = infinite_policy_from_string(*merged.infinite_policy);
    if (merged.view) {
        if (*merged.view == "full-graph" || *merged.view == "full_graph") c.view = View::full_graph;
        else if (*merged.view == "final-path" || *merged.view == "final_path") c.view = View::final_path;
        else throw ConfigError(kModule, "unknown view '" + *merged.view + "' (full-graph or final-path)");
    }
    if (merged.project_dim) c.project_dim = *merged.project_dim;
    if (merged.out_dir) c.out_dir = *merged.out_dir;
    if (merged.render_barcode) c.render_barcode = *merged.render_barcode;
    if (merged.render_diagram) c.render_diagram = *merged.render_diagram;
    if (merged.jobs) c.jobs = *merged.jobs;
    if (merged.variables) c.variables = *merged.variables;

    validate_config(c);
    return c;
}

void validate_config(const RunConfig& c) {
    if (c.max_hom_dim < 0 || c.max_hom_dim > 2)
        throw ConfigError(kModule, "max homology dimension must be 0, 1, or 2");
    if (c.dims.empty()) throw ConfigError(kModule, "at least one homology dimension must be reported");
    for (int k : c.dims) {
        if (k < 0 || k > 2) throw ConfigError(kModule, "report dimensions must be 0, 1, or 2");
        if (k > c.max_hom_dim)
            throw ConfigError(kModule, "reporting H" + std::to_string(k) + " needs --max-dim >= " +
                                           std::to_string(k) + " (the default report includes H1; pass " +
                                           "--dims to restrict it)");
    }
    if (c.encoding.struct_dim <= 0 || c.encoding.struct_dim % 2 != 0)
        throw ConfigError(kModule, "struct_dim must be a positive even integer");
    if (c.encoding.laplacian_dim <= 0) throw ConfigError(kModule, "laplacian_dim must be positive");
    if (c.encoding.scale < 0.0) throw ConfigError(kModule, "scale must be non-negative");
    if (c.w_sem < 0.0 || c.w_struct < 0.0)
        throw ConfigError(kModule, "combined metric weights must be non-negative");
    if (c.min_persistence < 0.0) throw ConfigError(kModule, "min_persistence must be non-negative");
    if (c.max_batch <= 0) throw ConfigError(kModule, "max_batch must be positive");
    if (c.jobs < 0) throw ConfigError(kModule, "jobs must be non-negative");
    if (c.project_dim && *c.project_dim != 2 && *c.project_dim != 3)
        throw ConfigError(kModule, "project_dim must be 2 or 3");
    for (double eps : c.betti_grid)
        if (eps < 0.0) throw ConfigError(kModule, "betti grid scales must be non-negative");
}

std::string config_to_json(const RunConfig& c) {
    json doc;
    doc["input"] = c.input;
    switch (c.embedding_source) {
        case EmbeddingSourceKind::file: doc["embedding_source"] = "file"; break;
        case EmbeddingSourceKind::service: doc["embedding_source"] = "service"; break;
        case EmbeddingSourceKind::fixture: doc["embedding_source"] = "fixture"; break;
    }
    doc["embeddings_path"] = c.embeddings_path;
    doc["endpoint"] = c.endpoint;
    doc["cache_dir"] = c.cache_dir;
    doc["max_batch"] = c.max_batch;
    doc["scheme"] = to_string(c.encoding.scheme);
    doc["laplacian_dim"] = c.encoding.laplacian_dim;
    doc["struct_dim"] = c.encoding.struct_dim;
    doc["scale"] = c.encoding.scale;
    doc["normalize"] = c.encoding.normalize;
    doc["metric"] = to_string(c.metric);
    doc["w_sem"] = c.w_sem;
    doc["w_struct"] = c.w_struct;
    doc["eps_max"] = c.eps_max;
    doc["max_dim"] = c.max_hom_dim;
    doc["dims"] = c.dims;
    doc["betti_grid"] = c.betti_grid;
    doc["min_persistence"] = c.min_persistence;
    doc["infinite_policy"] = to_string(c.infinite_policy);
    doc["view"] = c.view == View::full_graph ? "full-graph" : "final-path";
    if (c.project_dim) doc["project_dim"] = *c.project_dim;
    doc["out_dir"] = c.out_dir;
    doc["render_barcode"] = c.render_barcode;
    doc["render_diagram"] = c.render_diagram;
    doc["jobs"] = c.jobs;
    doc["variables"] = c.variables;
    return doc.dump(2);
}

}  // namespace tracetopo
