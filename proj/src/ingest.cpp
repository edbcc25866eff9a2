#include "tabtag/ingest.hpp"

#include "tabtag/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <numeric>
#include <random>

namespace tabtag {

std::string_view to_string(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::data: return "data";
        case ColumnKind::header: return "header";
        case ColumnKind::metadata: return "metadata";
    }
    return "data";
}

const Column* TableText::header() const {
    for (const auto& c : columns)
        if (c.kind == ColumnKind::header) return &c;
    return nullptr;
}

namespace {

bool is_alnum_byte(char c) {
    const auto u = static_cast<unsigned char>(c);
    return (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || u >= 0x80;
}

bool all_digits(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

Tokens tokenize_cell(std::string_view raw) {
    Tokens out;
    std::size_t i = 0;
    while (i < raw.size()) {
        while (i < raw.size() && !is_alnum_byte(raw[i])) ++i;
        const std::size_t start = i;
        while (i < raw.size() && is_alnum_byte(raw[i])) ++i;
        if (i == start) continue;
        const auto piece = raw.substr(start, i - start);
        if (all_digits(piece)) continue;
        out.push_back(detail::ascii_lower(piece));
    }
    return out;
}

bool is_textual(std::string_view raw) { return !tokenize_cell(raw).empty(); }

std::vector<std::vector<std::string>> parse_csv(std::istream& in, char delimiter) {
    const std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::string_view s = data;
    if (s.starts_with("\xEF\xBB\xBF")) s.remove_prefix(3);

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        // A lone empty field is a blank line.
        if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < s.size() && s[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (c == delimiter) {
            end_field();
        } else if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') {
            continue;
        } else if (c == '\n' || c == '\r') {
            end_row();
            ++line;
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    if (in_quotes) throw Error(Stage::ingest, "unterminated quoted field starting before line " + std::to_string(line));
    if (field_started || !row.empty()) end_row();
    return rows;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Unbiased draw in [0, bound) by rejection; std::uniform_int_distribution is
// not portable across standard libraries.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

}  // namespace

std::uint64_t column_seed(std::uint64_t seed, std::size_t column_index) {
    std::uint64_t state = seed ^ (0xD1B54A32D192ED03ull * (column_index + 1));
    return splitmix64(state);
}

std::vector<std::size_t> sample_indices(std::size_t population, std::size_t count,
                                        std::uint64_t seed) {
    std::vector<std::size_t> idx(population);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (count >= population) return idx;
    // Partial Fisher-Yates: the first `count` slots become the sample.
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(bounded(rng, population - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    return idx;
}

TableText extract_text(std::istream& csv, const IngestOptions& options) {
    if (options.row_cap == 0) throw Error(Stage::config, "row cap must be at least 1");
    auto rows = parse_csv(csv, options.delimiter);

    std::vector<std::string> names;
    std::size_t first_data = 0;
    if (options.has_header) {
        if (rows.empty()) throw Error(Stage::ingest, "header row expected but the file is empty");
        names = rows.front();
        first_data = 1;
    } else if (!rows.empty()) {
        for (std::size_t c = 0; c < rows.front().size(); ++c) names.push_back("column_" + std::to_string(c + 1));
    }
    const std::size_t width = names.size();
    for (std::size_t r = first_data; r < rows.size(); ++r) {
        if (rows[r].size() != width)
            throw Error(Stage::ingest, "row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                                           " fields, expected " + std::to_string(width));
    }

    TableText table;
    table.source_rows = rows.size() - first_data;

    if (options.has_header) {
        Column header{"__header__", ColumnKind::header, {}};
        for (const auto& n : names)
            if (auto t = tokenize_cell(n); !t.empty()) header.cells.push_back(std::move(t));
        table.columns.push_back(std::move(header));
    }

    for (std::size_t c = 0; c < width; ++c) {
        Column col{names[c], ColumnKind::data, {}};
        for (std::size_t r = first_data; r < rows.size(); ++r)
            if (auto t = tokenize_cell(rows[r][c]); !t.empty()) col.cells.push_back(std::move(t));
        if (col.cells.empty()) {
            table.dropped_columns.push_back(names[c]);
            continue;
        }
        if (col.cells.size() > options.row_cap) {
            const auto keep = sample_indices(col.cells.size(), options.row_cap, column_seed(options.seed, c));
            std::vector<Tokens> sampled;
            sampled.reserve(keep.size());
            for (std::size_t i : keep) sampled.push_back(std::move(col.cells[i]));
            col.cells = std::move(sampled);
        }
        table.columns.push_back(std::move(col));
    }

    if (options.metadata) {
        std::ifstream meta(*options.metadata);
        if (!meta) throw Error(Stage::ingest, "cannot open metadata file '" + options.metadata->string() + "'");
        Column col{"__metadata__", ColumnKind::metadata, {}};
        std::string line;
        while (std::getline(meta, line))
            if (auto t = tokenize_cell(line); !t.empty()) col.cells.push_back(std::move(t));
        if (!col.cells.empty()) table.columns.push_back(std::move(col));
    }
    return table;
}

TableText extract_text(const std::filesystem::path& path, const IngestOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Stage::ingest, "cannot open '" + path.string() + "'");
    return extract_text(in, options);
}

}  // namespace tabtag
