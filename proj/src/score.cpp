#include "tabtag/score.hpp"

#include "tabtag/error.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace tabtag {

ColumnScoreMatrix::ColumnScoreMatrix(std::string column_name, TypeIds type_ids, std::size_t rows,
                                     std::vector<double> values, std::size_t dropped_cells)
    : column_name_(std::move(column_name)),
      type_ids_(std::move(type_ids)),
      rows_(rows),
      values_(std::move(values)),
      dropped_cells_(dropped_cells) {
    if (!type_ids_) throw Error(Stage::score, "score matrix without type ids");
    if (values_.size() != rows_ * type_ids_->size())
        throw Error(Stage::score, "score matrix of " + std::to_string(values_.size()) + " values is not " +
                                      std::to_string(rows_) + " x " + std::to_string(type_ids_->size()));
}

Scorer::Scorer(const EmbeddingModel& model, const TypeVectorTable& types)
    : model_(&model),
      types_(&types),
      type_ids_(std::make_shared<const std::vector<std::string>>(types.scorable_ids())) {
    if (types.dimension() != model.dimension())
        throw Error(Stage::score, "type vectors and model disagree on dimension");
    if (type_ids_->empty())
        throw Error(Stage::config, "no ontology type has a vector in this model; nothing to score against");
}

std::optional<ColumnScoreMatrix> Scorer::score_column(const Column& column) const {
    const std::size_t d = model_->dimension();
    const std::size_t n_types = type_ids_->size();
    const auto& type_matrix = types_->matrix();

    std::vector<double> values;
    values.reserve(column.cells.size() * n_types);
    std::size_t rows = 0;
    std::size_t dropped = 0;
    for (const auto& cell : column.cells) {
        const auto e = cell.empty() ? std::nullopt : embed_phrase(*model_, cell);
        if (!e) {
            ++dropped;
            continue;
        }
        const double* u = e->components.data();
        for (std::size_t t = 0; t < n_types; ++t) {
            const double* v = type_matrix.data() + t * d;
            double dot = 0.0;
            for (std::size_t j = 0; j < d; ++j) dot += u[j] * v[j];
            values.push_back(dot);
        }
        ++rows;
    }
    if (rows == 0) return std::nullopt;
    return ColumnScoreMatrix(column.name, type_ids_, rows, std::move(values), dropped);
}

Scorer::TableScores Scorer::score_table(const TableText& table, unsigned threads) const {
    const std::size_t n = table.columns.size();
    std::vector<std::optional<ColumnScoreMatrix>> slots(n);

    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) slots[i] = score_column(table.columns[i]);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < n; i = next++) slots[i] = score_column(table.columns[i]);
        };
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < std::min<std::size_t>(threads, n); ++t) pool.emplace_back(worker);
    }

    TableScores out;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& col = table.columns[i];
        if (!slots[i]) {
            out.oov_cells += col.cells.size();
            out.unscored_columns.push_back(col.name);
            continue;
        }
        out.oov_cells += slots[i]->dropped_cells();
        out.matrices.push_back(std::move(*slots[i]));
    }
    return out;
}

std::optional<ColumnScoreMatrix> score_column(const Column& column, const TypeVectorTable& types,
                                              const EmbeddingModel& model) {
    return Scorer(model, types).score_column(column);
}

}  // namespace tabtag
