// tabtag: subject tags for CSV datasets from a word-embedding model and a type
// ontology.
#include "tabtag/tabtag.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace tabtag;

namespace {

struct RunConfig {
    std::string model_path;
    std::string model_format = "binary";
    std::string ontology_path;
    std::string ontology_format = "ntriples";
    std::string type_template = "{}";
    std::string column_agg = "mean";
    std::string tree_agg = "meanmax";
    std::string dataset_agg = "mean";
    bool tree_after_dataset = false;
    std::size_t k = 3;
    bool headers = true;
    std::string delimiter = ",";
    std::size_t row_cap = 1000;
    std::uint64_t seed = 0;
    std::string output = "text";
    unsigned threads = 1;
    bool no_timings = false;
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void require_file(const std::string& path, Stage stage, const char* what) {
    if (path.empty()) throw Error(stage, std::string("no ") + what + " given");
    if (!fs::is_regular_file(path)) throw Error(stage, std::string(what) + " file '" + path + "' not found");
}

AggregationConfig aggregation(const RunConfig& run) {
    AggregationConfig c{parse_reduce_fn(run.column_agg), parse_tree_fn(run.tree_agg),
                        parse_reduce_fn(run.dataset_agg)};
    c.tree_after_dataset = run.tree_after_dataset;
    return c;
}

IngestOptions ingest_options(const RunConfig& run) {
    if (run.row_cap < 1) throw Error(Stage::config, "--row-cap must be at least 1");
    if (run.delimiter.size() != 1) throw Error(Stage::config, "--delimiter must be a single character");
    IngestOptions o;
    o.has_header = run.headers;
    o.delimiter = run.delimiter == "\\t" ? '\t' : run.delimiter[0];
    o.row_cap = run.row_cap;
    o.seed = run.seed;
    return o;
}

// Model, ontology and type vectors, loaded once per process.
struct Resources {
    EmbeddingModel model;
    TypeOntology ontology;
    TypeVectorTable types;
    Scorer scorer;
    double load_ms;

    static std::unique_ptr<Resources> load(const RunConfig& run) {
        if (run.k < 1) throw Error(Stage::config, "--k must be at least 1");
        const auto model_format = parse_model_format(run.model_format);
        const auto ontology_format = parse_ontology_format(run.ontology_format);
        require_file(run.model_path, Stage::model, "model");
        require_file(run.ontology_path, Stage::ontology, "ontology");
        const auto start = Clock::now();
        auto model = load_model(run.model_path, model_format);
        auto ontology = load_ontology(run.ontology_path, ontology_format);
        return std::unique_ptr<Resources>(
            new Resources(std::move(model), std::move(ontology), TypeTokenMapping{run.type_template}, start));
    }

private:
    Resources(EmbeddingModel m, TypeOntology o, const TypeTokenMapping& mapping, Clock::time_point start)
        : model(std::move(m)),
          ontology(std::move(o)),
          types(ontology, model, mapping),
          scorer(model, types),
          load_ms(ms_since(start)) {}
};

void report_warnings(const Resources& res) {
    const auto& r = res.model.report();
    if (r.duplicate_tokens) std::cerr << "warning: model: " << r.duplicate_tokens << " duplicate tokens ignored\n";
    if (r.zero_norm_tokens) std::cerr << "warning: model: " << r.zero_norm_tokens << " zero-norm vectors rejected\n";
    for (const auto& w : res.ontology.warnings()) std::cerr << "warning: ontology: " << w << '\n';
}

int cmd_summarize(const RunConfig& run, std::vector<std::string> inputs, bool warm, const std::string& metadata) {
    const auto format = parse_output_format(run.output);
    const auto config = aggregation(run);
    auto options = ingest_options(run);
    if (!metadata.empty()) {
        if (inputs.size() != 1 || warm) throw Error(Stage::config, "--metadata applies to a single CSV");
        options.metadata = metadata;
    }
    if (inputs.empty() && !warm) throw Error(Stage::config, "no CSV file given");

    const auto res = Resources::load(run);
    report_warnings(*res);

    int status = 0;
    auto run_one = [&](const std::string& csv) {
        try {
            const auto start = Clock::now();
            const auto table = extract_text(csv, options);
            const auto summary = summarize(table, res->ontology, res->scorer, config, run.k, run.threads);
            Timings t{res->load_ms, ms_since(start)};
            if (run.no_timings) t = {};
            const bool named = warm || inputs.size() > 1;
            std::cout << format_summary(summary, res->ontology, format, t, named ? csv : std::string{});
            std::cout.flush();
        } catch (const Error& e) {
            if (!warm && inputs.size() == 1) throw;
            std::cerr << "error: " << csv << ": " << e.what() << '\n';
            status = 1;
        }
    };
    for (const auto& csv : inputs) run_one(csv);
    if (warm) {
        std::string line;
        while (std::getline(std::cin, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) run_one(line);
        }
    }
    return status;
}

std::vector<AggregationConfig> grid_configs(const RunConfig& run, const std::vector<std::string>& labels,
                                            bool full, bool single) {
    if (single) return {aggregation(run)};
    if (!labels.empty()) {
        std::vector<AggregationConfig> out;
        for (const auto& l : labels) out.push_back(parse_config(l));
        return out;
    }
    return full ? full_grid() : default_grid();
}

int cmd_grid(const RunConfig& run, const std::string& manifest, const std::vector<AggregationConfig>& configs,
             const std::string& plot_csv, bool evaluate_only) {
    const auto format = parse_output_format(run.output);
    const auto options = ingest_options(run);
    const auto res = Resources::load(run);
    report_warnings(*res);

    const auto corpus = load_manifest(manifest, res->ontology);
    if (corpus.empty()) throw Error(Stage::harness, "manifest '" + manifest + "' lists no datasets");
    const PreparedCorpus prepared(corpus, res->scorer, options, run.threads);
    for (const auto& f : prepared.failures()) std::cerr << "warning: skipped " << f << '\n';

    const auto grid = grid_search(prepared, res->ontology, configs, run.k);
    if (evaluate_only && format == OutputFormat::text) {
        const auto& row = grid.rows.front();
        std::cout << row.config.label() << "  match rate (top " << run.k << "): " << row.result.match_rate
                  << "  (n=" << row.result.evaluated << ", skipped=" << row.result.skipped << ")\n";
    } else {
        std::cout << format_grid(grid, format, run.k);
    }
    if (!plot_csv.empty()) {
        std::ofstream out(plot_csv);
        if (!out) throw Error(Stage::harness, "cannot write '" + plot_csv + "'");
        out << format_grid_plot_csv(grid);
    }
    return prepared.size() == 0 ? 1 : 0;
}

void add_run_options(CLI::App& app, RunConfig& run) {
    app.add_option("--model", run.model_path, "word2vec model file");
    app.add_option("--model-format", run.model_format, "binary or text")->capture_default_str();
    app.add_option("--ontology", run.ontology_path, "type hierarchy file");
    app.add_option("--ontology-format", run.ontology_format, "ntriples or tsv")->capture_default_str();
    app.add_option("--type-template", run.type_template, "vocabulary token for a type id; {} is the id")
        ->capture_default_str();
    app.add_option("--column-agg", run.column_agg, "mean or max")->capture_default_str();
    app.add_option("--tree-agg", run.tree_agg, "mean, max, meanmax, maxmean or none")->capture_default_str();
    app.add_option("--dataset-agg", run.dataset_agg, "mean or max")->capture_default_str();
    app.add_flag("--tree-after-dataset", run.tree_after_dataset, "apply the tree update after dataset aggregation");
    app.add_option("--k", run.k, "number of tags")->capture_default_str();
    app.add_flag("--headers,!--no-headers", run.headers, "first CSV row holds column names")->capture_default_str();
    app.add_option("--delimiter", run.delimiter, "CSV field delimiter")->capture_default_str();
    app.add_option("--row-cap", run.row_cap, "max cells sampled per column")->capture_default_str();
    app.add_option("--seed", run.seed, "sampling seed")->capture_default_str();
    app.add_option("--output", run.output, "json, tsv or text")
        ->check(CLI::IsMember({"json", "tsv", "text"}))
        ->capture_default_str();
    app.add_option("--threads", run.threads, "worker threads")->capture_default_str();
    app.add_flag("--no-timings", run.no_timings, "report zero timings (byte-stable output)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tag CSV datasets with ontology types using a word-embedding model"};
    app.require_subcommand(1);
    RunConfig run;

    auto* summarize_cmd = app.add_subcommand("summarize", "rank ontology types for one or more CSV files");
    std::vector<std::string> inputs;
    bool warm = false;
    std::string metadata;
    add_run_options(*summarize_cmd, run);
    summarize_cmd->add_option("csv", inputs, "CSV files");
    summarize_cmd->add_flag("--warm", warm, "after the listed files, read more CSV paths from stdin");
    summarize_cmd->add_option("--metadata", metadata, "plain-text metadata sidecar, scored as an extra column");

    auto* grid_cmd = app.add_subcommand("grid", "match rate of aggregation configs over a labeled corpus");
    std::string manifest;
    std::vector<std::string> config_labels;
    bool full = false;
    std::string plot_csv;
    add_run_options(*grid_cmd, run);
    grid_cmd->add_option("manifest", manifest, "JSON-lines corpus manifest")->required();
    grid_cmd->add_option("--config", config_labels, "column,tree,dataset triple (repeatable)");
    grid_cmd->add_flag("--full-grid", full, "all 20 function combinations");
    grid_cmd->add_option("--plot-csv", plot_csv, "also write label,match_rate rows here");

    auto* eval_cmd = app.add_subcommand("evaluate", "match rate of the selected config over a labeled corpus");
    std::string eval_manifest;
    add_run_options(*eval_cmd, run);
    eval_cmd->add_option("manifest", eval_manifest, "JSON-lines corpus manifest")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (summarize_cmd->parsed()) return cmd_summarize(run, inputs, warm, metadata);
        if (grid_cmd->parsed())
            return cmd_grid(run, manifest, grid_configs(run, config_labels, full, false), plot_csv, false);
        if (eval_cmd->parsed()) return cmd_grid(run, eval_manifest, grid_configs(run, {}, false, true), {}, true);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
