#pragma once

#include "tabtag/aggregate.hpp"
#include "tabtag/harness.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace tabtag {

inline constexpr int kReportSchemaVersion = 1;

enum class OutputFormat { json, tsv, text };

OutputFormat parse_output_format(std::string_view name);

struct Timings {
    double load_ms = 0.0;
    double score_ms = 0.0;
};

/// Machine formats (json, tsv) depend only on their inputs; pass zeroed
/// timings to make reruns byte-identical.
std::string format_summary(const Summary& summary, const TypeOntology& ontology, OutputFormat format,
                           const Timings& timings, std::string_view input = {});

std::string format_grid(const GridResult& grid, OutputFormat format, std::size_t k);

/// "label,match_rate" rows, one per config, in grid order.
std::string format_grid_plot_csv(const GridResult& grid);

}  // namespace tabtag
