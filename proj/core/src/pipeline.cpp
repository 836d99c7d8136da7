#include "tracetopo/pipeline.hpp"

#include <atomic>
#include <filesystem>
#include <thread>

#include "tracetopo/embed_client.hpp"
#include "tracetopo/errors.hpp"

namespace tracetopo {

namespace {

constexpr const char* kModule = "pipeline";

std::string method_tag(Paradigm p) {
    switch (p) {
        case Paradigm::chain: return "cot";
        case Paradigm::tree: return "tot";
        case Paradigm::graph: return "got";
    }
    return "cot";
}

// Embedding files referenced by a chain resolve relative to the batch
// document's directory.
std::string resolve_relative(const std::string& base_input, const std::string& path) {
    namespace fs = std::filesystem;
    fs::path p(path);
    if (p.is_absolute()) return path;
    fs::path base = fs::path(base_input).parent_path();
    return (base / p).string();
}

}  // namespace

EmbeddingSet resolve_embeddings(const ReasoningChain& chain, const RunConfig& config) {
    switch (config.embedding_source) {
        case EmbeddingSourceKind::fixture: {
            if (chain.inline_embeddings)
                return embeddings_from_rows(*chain.inline_embeddings, EmbeddingSource::fixture);
            if (chain.embeddings_file)
                return load_embeddings(resolve_relative(config.input, *chain.embeddings_file));
            throw DataError(kModule,
                            "embedding source is 'fixture' but the chain document carries neither an "
                            "'embeddings' array nor an 'embeddings_file' reference");
        }
        case EmbeddingSourceKind::file: {
            if (chain.inline_embeddings)
                return embeddings_from_rows(*chain.inline_embeddings, EmbeddingSource::fixture);
            std::string path = config.embeddings_path;
            if (chain.embeddings_file) path = resolve_relative(config.input, *chain.embeddings_file);
            if (path.empty()) throw ConfigError(kModule, "embedding source is 'file' but no path was given");
            return load_embeddings(path);
        }
        case EmbeddingSourceKind::service: {
            EmbedClientConfig cc;
            cc.endpoint = config.endpoint;
            cc.auth_token = config.auth_token;
            cc.cache_dir = config.cache_dir;
            cc.max_batch = config.max_batch;
            std::vector<std::string> texts;
            texts.reserve(chain.steps.size());
            for (const auto& s : chain.steps) texts.push_back(s.text);
            return fetch_embeddings(cc, texts);
        }
    }
    throw InternalError(kModule, "unhandled embedding source");
}

ChainAnalysis analyze_chain(const ReasoningChain& chain, const RunConfig& config) {
    ChainAnalysis out;
    out.method = method_tag(chain.paradigm);

    EmbeddingSet embeddings = resolve_embeddings(chain, config);
    EmbeddedChain embedded = attach(chain, std::move(embeddings));

    std::vector<int> kept;
    ReasoningChain viewed = select_view(embedded.chain, config.view, &kept);
    if (config.view == View::final_path) {
        EmbeddingSet restricted;
        restricted.dimension = embedded.embeddings.dimension;
        restricted.source = embedded.embeddings.source;
        for (int old : kept) restricted.vectors.push_back(embedded.embeddings.vectors[static_cast<std::size_t>(old)]);
        embedded = attach(viewed, std::move(restricted));
    }
    out.chain = embedded.chain;

    DistanceMatrix dm;
    std::string scheme_used;
    if (config.metric == Metric::combined) {
        const PointCloud semantic = semantic_cloud(embedded, config.encoding);
        const PointCloud structural = structural_cloud(embedded.chain, config.encoding);
        scheme_used = to_string(structural.scheme);
        dm = combined_distance_matrix(semantic, structural, config.w_sem, config.w_struct);
    } else {
        const PointCloud cloud = encode_chain(embedded, config.encoding);
        scheme_used = to_string(cloud.scheme);
        dm = (config.metric == Metric::cosine) ? cosine_distance_matrix(cloud) : euclidean_distance_matrix(cloud);
        if (config.project_dim) out.projection = project_principal_components(cloud, *config.project_dim);
    }
    if (config.metric == Metric::combined && config.project_dim) {
        const PointCloud cloud = encode_chain(embedded, config.encoding);
        out.projection = project_principal_components(cloud, *config.project_dim);
    }

    const Filtration filtration = build_rips(dm, config.eps_max, config.max_hom_dim + 1);
    out.diagram = compute_persistence(filtration);

    ReportProvenance meta;
    meta.metric = to_string(config.metric);
    meta.scheme = scheme_used;
    meta.min_persistence = config.min_persistence;
    meta.infinite_policy = config.infinite_policy;
    meta.point_count = embedded.chain.steps.size();
    meta.point_dimension = embedded.embeddings.dimension;
    meta.top_dim_partial = true;  // bars at the top simplex dimension are never fully observed

    for (double eps : config.betti_grid)
        if (eps > filtration.eps_max)
            throw ConfigError(kModule, "betti grid scale " + std::to_string(eps) +
                                           " exceeds the filtration cap " + std::to_string(filtration.eps_max));

    out.report = build_report(out.diagram, config.dims, meta, config.betti_grid);
    return out;
}

BatchRecord record_from_analysis(const ChainAnalysis& analysis, const ReasoningChain& original,
                                 std::size_t index) {
    BatchRecord rec;
    rec.chain_id = original.id ? *original.id : ("chain-" + std::to_string(index));
    rec.method = analysis.method;
    rec.dataset = original.dataset ? *original.dataset : "default";
    if (original.label) {
        if (*original.label == "correct") rec.outcome = 1;
        else if (*original.label == "incorrect") rec.outcome = 0;
        // other labels stay unmapped; the vocabulary is open
    }
    rec.token_count = original.token_count;
    rec.wall_time = original.wall_time;
    rec.report = analysis.report;
    return rec;
}

BatchOutcome run_batch(const std::vector<ReasoningChain>& chains, const RunConfig& config) {
    BatchOutcome out;
    const std::size_t n = chains.size();

    struct Slot {
        std::optional<ChainAnalysis> full;
        std::optional<ChainAnalysis> final_view;
        std::optional<BatchFailure> failure;
        std::optional<BatchFailure> skip;
    };
    std::vector<Slot> slots(n);

    auto chain_name = [&](std::size_t i) {
        return chains[i].id ? *chains[i].id : ("chain-" + std::to_string(i));
    };

    auto work = [&](std::size_t i) {
        const ReasoningChain& chain = chains[i];
        try {
            if (config.view == View::final_path && !chain.final_path) {
                slots[i].skip = BatchFailure{chain_name(i), "no final_path annotation for the requested view"};
                return;
            }
            slots[i].full = analyze_chain(chain, config);
            if (config.view == View::full_graph && chain.final_path) {
                RunConfig final_config = config;
                final_config.view = View::final_path;
                slots[i].final_view = analyze_chain(chain, final_config);
            }
        } catch (const Error& e) {
            slots[i].failure = BatchFailure{chain_name(i), e.what()};
        }
    };

    unsigned jobs = config.jobs > 0 ? static_cast<unsigned>(config.jobs) : std::thread::hardware_concurrency();
    if (jobs == 0) jobs = 1;
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1)));

    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (unsigned t = 0; t < jobs; ++t) {
            pool.emplace_back([&]() {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) work(i);
            });
        }
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (slots[i].failure) {
            out.failures.push_back(*slots[i].failure);
            continue;
        }
        if (slots[i].skip) {
            out.skipped.push_back(*slots[i].skip);
            continue;
        }
        out.records.push_back(record_from_analysis(*slots[i].full, chains[i], i));
        out.analyses.push_back(std::move(*slots[i].full));
        if (slots[i].final_view)
            out.final_records.push_back(record_from_analysis(*slots[i].final_view, chains[i], i));
    }
    return out;
}

}  // namespace tracetopo
