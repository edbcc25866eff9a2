#include "tabtag/report.hpp"

#include "tabtag/error.hpp"

#include <charconv>
#include <cstdio>
#include <json.hpp>
#include <sstream>

namespace tabtag {

OutputFormat parse_output_format(std::string_view name) {
    if (name == "json") return OutputFormat::json;
    if (name == "tsv") return OutputFormat::tsv;
    if (name == "text") return OutputFormat::text;
    throw Error(Stage::config, "unknown output format '" + std::string(name) + "'");
}

namespace {

// Shortest representation that round-trips.
std::string number(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string joined(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += ',';
        out += s;
    }
    return out;
}

std::string label_of(const TypeOntology& ontology, const std::string& id) {
    const auto idx = ontology.find(id);
    return idx ? ontology.node(*idx).label : id;
}

}  // namespace

std::string format_summary(const Summary& summary, const TypeOntology& ontology, OutputFormat format,
                           const Timings& timings, std::string_view input) {
    const auto& diag = summary.diagnostics;
    if (format == OutputFormat::json) {
        nlohmann::ordered_json j;
        j["schema_version"] = kReportSchemaVersion;
        if (!input.empty()) j["input"] = std::string(input);
        j["tags"] = nlohmann::ordered_json::array();
        for (const auto& t : summary.prediction.tags)
            j["tags"].push_back({{"type", t.type}, {"label", label_of(ontology, t.type)}, {"score", t.score}});
        j["diagnostics"] = {{"oov_cells", diag.oov_cells},
                            {"dropped_columns", diag.dropped_columns},
                            {"unscorable_types", diag.unscorable_types},
                            {"load_ms", timings.load_ms},
                            {"score_ms", timings.score_ms}};
        return j.dump() + "\n";
    }

    std::ostringstream out;
    if (format == OutputFormat::tsv) {
        if (!input.empty()) out << "#input\t" << input << '\n';
        out << "rank\ttype\tlabel\tscore\n";
        std::size_t rank = 1;
        for (const auto& t : summary.prediction.tags)
            out << rank++ << '\t' << t.type << '\t' << label_of(ontology, t.type) << '\t' << number(t.score) << '\n';
        out << "#oov_cells\t" << diag.oov_cells << '\n'
            << "#dropped_columns\t" << joined(diag.dropped_columns) << '\n'
            << "#unscorable_types\t" << joined(diag.unscorable_types) << '\n'
            << "#load_ms\t" << number(timings.load_ms) << '\n'
            << "#score_ms\t" << number(timings.score_ms) << '\n';
        return out.str();
    }

    if (!input.empty()) out << input << '\n';
    std::size_t rank = 1;
    for (const auto& t : summary.prediction.tags)
        out << "  " << rank++ << ". " << label_of(ontology, t.type) << "  (" << t.type << ", " << fixed(t.score, 4)
            << ")\n";
    out << "  oov cells: " << diag.oov_cells << ", dropped columns: " << diag.dropped_columns.size()
        << ", unscorable types: " << diag.unscorable_types.size() << '\n'
        << "  load " << fixed(timings.load_ms, 1) << " ms, score " << fixed(timings.score_ms, 1) << " ms\n";
    return out.str();
}

std::string format_grid(const GridResult& grid, OutputFormat format, std::size_t k) {
    if (format == OutputFormat::json) {
        nlohmann::ordered_json j;
        j["schema_version"] = kReportSchemaVersion;
        j["k"] = k;
        j["corpus_size"] = grid.corpus_size;
        j["results"] = nlohmann::ordered_json::array();
        for (const auto& row : grid.rows)
            j["results"].push_back({{"column", to_string(row.config.column_fn)},
                                    {"tree", to_string(row.config.tree_fn)},
                                    {"dataset", to_string(row.config.dataset_fn)},
                                    {"tree_after_dataset", row.config.tree_after_dataset},
                                    {"match_rate", row.result.match_rate},
                                    {"n", row.result.evaluated},
                                    {"skipped", row.result.skipped}});
        return j.dump() + "\n";
    }
    std::ostringstream out;
    if (format == OutputFormat::tsv) {
        out << "column\ttree\tdataset\tmatch_rate\tn\tskipped\n";
        for (const auto& row : grid.rows)
            out << to_string(row.config.column_fn) << '\t' << to_string(row.config.tree_fn)
                << (row.config.tree_after_dataset ? "@after" : "") << '\t' << to_string(row.config.dataset_fn)
                << '\t' << number(row.result.match_rate) << '\t' << row.result.evaluated << '\t'
                << row.result.skipped << '\n';
        return out.str();
    }
    out << "match rate (top " << k << ") over " << grid.corpus_size << " datasets\n";
    for (const auto& row : grid.rows)
        out << "  " << row.config.label() << "  " << fixed(row.result.match_rate, 4) << "  (n=" << row.result.evaluated
            << ", skipped=" << row.result.skipped << ")\n";
    return out.str();
}

std::string format_grid_plot_csv(const GridResult& grid) {
    std::string out = "label,match_rate\n";
    for (const auto& row : grid.rows) out += "\"" + row.config.label() + "\"," + number(row.result.match_rate) + "\n";
    return out;
}

}  // namespace tabtag
