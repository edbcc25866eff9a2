#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tabtag {

using Tokens = std::vector<std::string>;

enum class ColumnKind { data, header, metadata };

std::string_view to_string(ColumnKind kind);

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::data;
    std::vector<Tokens> cells;
};

struct IngestOptions {
    bool has_header = true;
    char delimiter = ',';
    std::size_t row_cap = 1000;
    std::uint64_t seed = 0;
    /// Optional plain-text sidecar; each non-blank line becomes one cell of an
    /// extra "metadata" column.
    std::optional<std::filesystem::path> metadata;
};

struct TableText {
    std::vector<Column> columns;
    /// Source columns with no textual cell left after filtering.
    std::vector<std::string> dropped_columns;
    std::size_t source_rows = 0;

    const Column* header() const;
};

/// Splits on any non-alphanumeric byte, lowercases ASCII letters, drops empty
/// and all-digit pieces. Bytes >= 0x80 count as letters so UTF-8 words survive.
Tokens tokenize_cell(std::string_view raw);

bool is_textual(std::string_view raw);

/// RFC 4180 records. Throws on unterminated quotes.
std::vector<std::vector<std::string>> parse_csv(std::istream& in, char delimiter = ',');

/// Indices of a seeded uniform sample of `count` out of `population`, without
/// replacement, in ascending order. Returns 0..population-1 when count covers it.
std::vector<std::size_t> sample_indices(std::size_t population, std::size_t count,
                                        std::uint64_t seed);

/// Seed used for the sample of the column at `column_index`.
std::uint64_t column_seed(std::uint64_t seed, std::size_t column_index);

TableText extract_text(const std::filesystem::path& path, const IngestOptions& options);
TableText extract_text(std::istream& csv, const IngestOptions& options);

}  // namespace tabtag
