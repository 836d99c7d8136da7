// tracetopo: structural quality analysis for reasoning traces.
//
// Subcommands:
//   analyze           one chain -> topology report, diagram, optional SVGs
//   batch             many chains -> aggregates + correlation matrices
//   render            diagram JSON -> barcode/diagram SVGs
//   oracle            randomized engine-vs-brute-force verification
//   fetch-embeddings  pull vectors from an embedding service into a file

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tracetopo/batch.hpp"
#include "tracetopo/config.hpp"
#include "tracetopo/embed_client.hpp"
#include "tracetopo/errors.hpp"
#include "tracetopo/hash.hpp"
#include "tracetopo/oracle.hpp"
#include "tracetopo/pipeline.hpp"
#include "tracetopo/render.hpp"
#include "tracetopo/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tracetopo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitPartial = 4;
constexpr int kExitCounterexample = 5;

struct CliState {
    RunConfigOverlay cli;
    std::string config_file;
};

// Registers the shared pipeline flags on a subcommand; each maps to
// exactly one RunConfig field.
void add_pipeline_flags(CLI::App* cmd, CliState& state) {
    cmd->add_option("--config", state.config_file, "JSON config file (same schema as the manifest echo)");
    cmd->add_option("--embeddings", state.cli.embeddings_path, "embedding file (.json or flat binary)");
    cmd->add_option("--embedding-source", state.cli.embedding_source, "file | service | fixture");
    cmd->add_option("--endpoint", state.cli.endpoint, "embedding service base URL");
    cmd->add_option("--auth-token", state.cli.auth_token, "bearer token for the embedding service");
    cmd->add_option("--cache-dir", state.cli.cache_dir, "embedding cache directory");
    cmd->add_option("--max-batch", state.cli.max_batch, "texts per service request");
    cmd->add_option("--scheme", state.cli.scheme, "encoding scheme: auto | cot | tot | got");
    cmd->add_option("--laplacian-dim,--d-pe", state.cli.laplacian_dim,
                    "graph-encoding eigenvector count (the paper's d)");
    cmd->add_option("--struct-dim", state.cli.struct_dim, "structural-cloud dimension for the combined metric");
    cmd->add_option("--scale", state.cli.scale, "positional-encoding magnitude");
    cmd->add_flag("--normalize", [&state](std::int64_t) { state.cli.normalize = true; },
                  "L2-normalize semantic vectors");
    cmd->add_option("--metric", state.cli.metric, "euclidean | cosine | combined");
    cmd->add_option("--w-sem", state.cli.w_sem, "combined metric: semantic weight");
    cmd->add_option("--w-struct", state.cli.w_struct, "combined metric: structural weight");
    cmd->add_option("--eps-max,--epsilon", state.cli.eps_max,
                    "filtration cap (the scale parameter; default: just above the largest distance)");
    cmd->add_option("--max-dim", state.cli.max_hom_dim, "highest homology dimension (0..2, default 1)");
    cmd->add_option("--dims", state.cli.dims, "homology dimensions to report (default 0 1)");
    cmd->add_option("--betti-at", state.cli.betti_grid, "scales at which to report Betti numbers");
    cmd->add_option("--min-persistence", state.cli.min_persistence, "feature-count lifetime threshold");
    cmd->add_option("--infinite-policy", state.cli.infinite_policy,
                    "infinite bars in statistics: exclude | truncate");
    cmd->add_option("--view", state.cli.view, "full-graph | final-path");
    cmd->add_option("--project", state.cli.project_dim, "also emit a 2D/3D principal-component projection");
    cmd->add_option("--out", state.cli.out_dir, "output directory");
    cmd->add_flag("--render-barcode", [&state](std::int64_t) { state.cli.render_barcode = true; },
                  "write barcode.svg");
    cmd->add_flag("--render-diagram", [&state](std::int64_t) { state.cli.render_diagram = true; },
                  "write diagram.svg");
    cmd->add_flag("--render", [&state](std::int64_t) {
        state.cli.render_barcode = true;
        state.cli.render_diagram = true;
    }, "write both SVG renders");
    cmd->add_option("--jobs", state.cli.jobs, "parallel chains in batch mode (0 = hardware)");
    cmd->add_option("--variables", state.cli.variables, "correlation variable names");
}

RunConfig resolve_config(const CliState& state, const std::string& input = {}) {
    RunConfigOverlay file;
    if (!state.config_file.empty()) {
        file = load_config_file(state.config_file);
    } else if (!input.empty()) {
        // Fixture-style inputs may carry their own config block; an explicit
        // --config file outranks it.
        std::ifstream in(input, std::ios::binary);
        if (in) {
            std::ostringstream ss;
            ss << in.rdbuf();
            json doc = json::parse(ss.str(), nullptr, false);
            if (doc.is_object() && doc.contains("config")) file = overlay_from_json(doc.at("config").dump());
        }
    }
    return merge_config(overlay_from_environment(), file, state.cli);
}

void write_text(const fs::path& path, const std::string& text, std::vector<std::string>& outputs,
                const fs::path& root) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cli", "cannot write output file: " + path.string());
    out << text;
    outputs.push_back(fs::relative(path, root).generic_string());
}

json input_digest(const std::string& path) {
    json j;
    j["path"] = path;
    j["sha256"] = sha256_file_hex(path);
    return j;
}

void write_manifest(const fs::path& out_dir, const std::string& command, const RunConfig& config,
                    const json& inputs, std::vector<std::string> outputs) {
    json manifest;
    manifest["tool"] = "tracetopo";
    manifest["version"] = kVersion;
    manifest["command"] = command;
    manifest["inputs"] = inputs;
    manifest["config"] = json::parse(config_to_json(config));
    std::sort(outputs.begin(), outputs.end());
    manifest["outputs"] = outputs;
    std::ofstream out(out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
    out << manifest.dump(2) << '\n';
}

json projection_json(const PcaProjection& projection) {
    json doc;
    json points = json::array();
    for (std::size_t i = 0; i < projection.points.rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < projection.points.cols; ++j) row.push_back(projection.points(i, j));
        points.push_back(row);
    }
    doc["points"] = points;
    doc["variance_ratios"] = projection.variance_ratios;
    doc["total_variance"] = projection.total_variance;
    return doc;
}

void write_analysis_outputs(const fs::path& dir, const ChainAnalysis& analysis, const RunConfig& config,
                            std::vector<std::string>& outputs, const fs::path& root) {
    write_text(dir / "report.json", report_to_json(analysis.report) + "\n", outputs, root);
    write_text(dir / "diagram.json", diagram_to_json(analysis.diagram) + "\n", outputs, root);
    write_text(dir / "diagram.csv", diagram_to_csv(analysis.diagram), outputs, root);
    if (config.render_barcode)
        write_text(dir / "barcode.svg", render_barcode_svg(analysis.diagram), outputs, root);
    if (config.render_diagram)
        write_text(dir / "diagram.svg", render_diagram_svg(analysis.diagram), outputs, root);
    if (analysis.projection)
        write_text(dir / "projection.json", projection_json(*analysis.projection).dump(2) + "\n", outputs,
                   root);
}

int cmd_analyze(const CliState& state, const std::string& input) {
    RunConfig config = resolve_config(state, input);
    config.input = input;
    const ReasoningChain chain = load_chain(input);
    const ChainAnalysis analysis = analyze_chain(chain, config);

    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);
    std::vector<std::string> outputs;
    write_analysis_outputs(out_dir, analysis, config, outputs, out_dir);
    write_manifest(out_dir, "analyze", config, json::array({input_digest(input)}), outputs);

    const auto flat = report_flat_fields(analysis.report);
    std::cout << "analyzed " << (chain.id ? *chain.id : input) << ": ";
    bool first = true;
    for (const char* key : {"h0.count", "h1.count", "h0.stable", "h1.entropy"}) {
        auto it = flat.find(key);
        if (it == flat.end() || it->second.empty()) continue;
        if (!first) std::cout << ", ";
        std::cout << key << "=" << it->second;
        first = false;
    }
    std::cout << "\n" << "outputs in " << out_dir.string() << std::endl;
    return kExitOk;
}

int cmd_batch(const CliState& state, const std::string& input) {
    RunConfig config = resolve_config(state);
    config.input = input;
    const std::vector<ReasoningChain> chains = load_batch(input);
    if (chains.empty()) throw DataError("cli", "batch file contains no chains: " + input);

    const BatchOutcome outcome = run_batch(chains, config);

    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);
    std::vector<std::string> outputs;

    for (std::size_t i = 0; i < outcome.records.size(); ++i) {
        std::string leaf = outcome.records[i].chain_id;
        for (char& c : leaf)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
        fs::path dir = out_dir / "chains" / (leaf + "-" + std::to_string(i));
        write_analysis_outputs(dir, outcome.analyses[i], config, outputs, out_dir);
    }

    if (!outcome.records.empty()) {
        write_text(out_dir / "records.csv", records_to_csv(outcome.records), outputs, out_dir);
        write_text(out_dir / "aggregate.csv", aggregate_to_csv(aggregate_batch(outcome.records)), outputs,
                   out_dir);
        write_text(out_dir / "aggregate.json", aggregate_to_json(aggregate_batch(outcome.records)) + "\n",
                   outputs, out_dir);
        if (outcome.records.size() >= 2) {
            const CorrelationMatrix full = pearson_correlation_matrix(outcome.records, config.variables);
            write_text(out_dir / "correlation_full.json", correlation_to_json(full) + "\n", outputs, out_dir);
            write_text(out_dir / "correlation_full.csv", correlation_to_csv(full), outputs, out_dir);
        }
        if (outcome.final_records.size() >= 2) {
            const CorrelationMatrix fin = pearson_correlation_matrix(outcome.final_records, config.variables);
            write_text(out_dir / "correlation_final.json", correlation_to_json(fin) + "\n", outputs, out_dir);
            write_text(out_dir / "correlation_final.csv", correlation_to_csv(fin), outputs, out_dir);
        }
    }

    if (!outcome.failures.empty() || !outcome.skipped.empty()) {
        json errors;
        errors["failures"] = json::array();
        for (const auto& f : outcome.failures)
            errors["failures"].push_back({{"chain", f.chain_id}, {"reason", f.reason}});
        errors["skipped"] = json::array();
        for (const auto& s : outcome.skipped)
            errors["skipped"].push_back({{"chain", s.chain_id}, {"reason", s.reason}});
        write_text(out_dir / "errors.json", errors.dump(2) + "\n", outputs, out_dir);
    }

    write_manifest(out_dir, "batch", config, json::array({input_digest(input)}), outputs);

    std::cout << "batch: " << outcome.records.size() << " analyzed";
    if (!outcome.skipped.empty()) std::cout << ", " << outcome.skipped.size() << " skipped";
    if (!outcome.failures.empty()) std::cout << ", " << outcome.failures.size() << " failed";
    std::cout << "; outputs in " << out_dir.string() << std::endl;
    for (const auto& f : outcome.failures) std::cerr << "  failed " << f.chain_id << ": " << f.reason << "\n";
    for (const auto& s : outcome.skipped) std::cerr << "  skipped " << s.chain_id << ": " << s.reason << "\n";

    return outcome.failures.empty() ? kExitOk : kExitPartial;
}

int cmd_render(const CliState& state, const std::string& input) {
    RunConfig config = resolve_config(state);
    config.input = input;
    std::ifstream in(input, std::ios::binary);
    if (!in) throw DataError("cli", "cannot open diagram file: " + input);
    std::ostringstream ss;
    ss << in.rdbuf();
    const PersistenceDiagram diag = diagram_from_json(ss.str());

    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);
    std::vector<std::string> outputs;
    write_text(out_dir / "barcode.svg", render_barcode_svg(diag), outputs, out_dir);
    write_text(out_dir / "diagram.svg", render_diagram_svg(diag), outputs, out_dir);
    write_manifest(out_dir, "render", config, json::array({input_digest(input)}), outputs);
    std::cout << "rendered " << input << " into " << out_dir.string() << std::endl;
    return kExitOk;
}

int cmd_oracle(std::uint64_t seed, std::uint64_t cases, const std::vector<std::string>& fixtures) {
    bool all_passed = true;
    for (const auto& path : fixtures) {
        const FixtureCase fixture = run_fixture(path);
        std::cout << "fixture " << fixture.name << ": " << (fixture.passed ? "pass" : "FAIL") << "\n";
        for (const auto& m : fixture.messages) std::cout << "  " << m << "\n";
        all_passed = all_passed && fixture.passed;
    }

    const OracleReport report = run_oracle_suite(seed, cases);
    std::cout << report.summary() << std::endl;
    if (!report.passed()) {
        const auto& ce = *report.counterexample;
        std::cout << "cloud:\n";
        for (const auto& row : ce.cloud) {
            std::cout << " ";
            for (double v : row) std::cout << " " << v;
            std::cout << "\n";
        }
        std::cout << "filtration:\n" << ce.filtration_dump;
        return kExitCounterexample;
    }
    return all_passed ? kExitOk : kExitCounterexample;
}

int cmd_fetch(const CliState& state, const std::string& input, const std::string& out_path) {
    RunConfig config = resolve_config(state);
    config.input = input;
    if (config.endpoint.empty())
        throw ConfigError("cli", "fetch-embeddings needs --endpoint or TRACETOPO_EMBED_ENDPOINT");
    const ReasoningChain chain = load_chain(input);

    EmbedClientConfig cc;
    cc.endpoint = config.endpoint;
    cc.auth_token = config.auth_token;
    cc.cache_dir = config.cache_dir;
    cc.max_batch = config.max_batch;
    std::vector<std::string> texts;
    for (const auto& s : chain.steps) texts.push_back(s.text);
    const EmbeddingSet set = fetch_embeddings(cc, texts);

    if (out_path.size() >= 5 && out_path.compare(out_path.size() - 5, 5, ".json") == 0)
        save_embeddings_json(out_path, set);
    else
        save_embeddings_binary(out_path, set);
    std::cout << "fetched " << set.size() << " vectors (dimension " << set.dimension << ") into " << out_path
              << std::endl;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"topological quality metrics for chain/tree/graph reasoning traces"};
    app.set_version_flag("--version", std::string("tracetopo ") + kVersion);
    app.require_subcommand(1);

    CliState state;

    auto* analyze = app.add_subcommand("analyze", "analyze one chain document");
    std::string analyze_input;
    analyze->add_option("input", analyze_input, "chain JSON document")->required();
    add_pipeline_flags(analyze, state);

    auto* batch = app.add_subcommand("batch", "analyze a batch of chain documents");
    std::string batch_input;
    batch->add_option("input", batch_input, "JSON array of chain documents")->required();
    add_pipeline_flags(batch, state);

    auto* render = app.add_subcommand("render", "render a stored diagram JSON to SVG");
    std::string render_input;
    render->add_option("input", render_input, "diagram JSON file")->required();
    add_pipeline_flags(render, state);

    auto* oracle = app.add_subcommand("oracle", "run the brute-force verification suite");
    std::uint64_t seed = 0;
    std::uint64_t cases = 500;
    std::vector<std::string> fixtures;
    oracle->add_option("--seed", seed, "suite seed");
    auto* cases_opt = oracle->add_option("--cases", cases, "number of random clouds");
    oracle->add_option("--fixture", fixtures, "fixture files to check before the random suite");

    auto* fetch = app.add_subcommand("fetch-embeddings", "fetch vectors from an embedding service");
    std::string fetch_input, fetch_out = "embeddings.bin";
    fetch->add_option("input", fetch_input, "chain JSON document")->required();
    fetch->add_option("--out-file", fetch_out, "output file (.json or flat binary)");
    add_pipeline_flags(fetch, state);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmd_analyze(state, analyze_input);
        if (batch->parsed()) return cmd_batch(state, batch_input);
        if (render->parsed()) return cmd_render(state, render_input);
        if (oracle->parsed()) {
            if (cases_opt->count() > 0 && cases == 0) {
                std::cerr << "[config] --cases must be at least 1" << std::endl;
                return kExitConfig;
            }
            return cmd_oracle(seed, cases, fixtures);
        }
        if (fetch->parsed()) return cmd_fetch(state, fetch_input, fetch_out);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << std::endl;
        return kExitConfig;
    } catch (const DataError& e) {
        std::cerr << e.what() << std::endl;
        return kExitData;
    } catch (const NumericError& e) {
        std::cerr << e.what() << std::endl;
        return kExitNumeric;
    } catch (const Error& e) {
        std::cerr << e.what() << std::endl;
        return kExitNumeric;
    }
    return kExitConfig;
}
