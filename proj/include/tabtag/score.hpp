#pragma once

#include "tabtag/embedding.hpp"
#include "tabtag/ingest.hpp"
#include "tabtag/ontology.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tabtag {

using TypeIds = std::shared_ptr<const std::vector<std::string>>;

/// Similarities between each embedded cell of one column and every scorable
/// type. Row-major, rows in surviving-cell order.
class ColumnScoreMatrix {
public:
    ColumnScoreMatrix(std::string column_name, TypeIds type_ids, std::size_t rows,
                      std::vector<double> values, std::size_t dropped_cells = 0);

    const std::string& column_name() const noexcept { return column_name_; }
    const TypeIds& type_ids() const noexcept { return type_ids_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return type_ids_->size(); }
    std::size_t dropped_cells() const noexcept { return dropped_cells_; }

    std::span<const double> row(std::size_t r) const {
        return {values_.data() + r * cols(), cols()};
    }
    double at(std::size_t r, std::size_t t) const { return values_.at(r * cols() + t); }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Same matrix with every entry mapped through f.
    template <class F>
    ColumnScoreMatrix transformed(F f) const {
        std::vector<double> v(values_);
        for (double& x : v) x = f(x);
        return ColumnScoreMatrix(column_name_, type_ids_, rows_, std::move(v), dropped_cells_);
    }

private:
    std::string column_name_;
    TypeIds type_ids_;
    std::size_t rows_;
    std::vector<double> values_;
    std::size_t dropped_cells_;
};

/// Scoring context shared by all columns: the scorable type set and its
/// vectors, computed once per (ontology, model).
class Scorer {
public:
    Scorer(const EmbeddingModel& model, const TypeVectorTable& types);

    const TypeIds& type_ids() const noexcept { return type_ids_; }
    const EmbeddingModel& model() const noexcept { return *model_; }
    const TypeVectorTable& types() const noexcept { return *types_; }

    /// Absent when no cell of the column embeds.
    std::optional<ColumnScoreMatrix> score_column(const Column& column) const;

    /// Scores that failed per column are reported through `oov_cells` /
    /// `unscored_columns`. With threads > 1 columns are scored concurrently;
    /// the result is identical to the sequential one.
    struct TableScores {
        std::vector<ColumnScoreMatrix> matrices;
        std::size_t oov_cells = 0;
        std::vector<std::string> unscored_columns;
    };
    TableScores score_table(const TableText& table, unsigned threads = 1) const;

private:
    const EmbeddingModel* model_;
    const TypeVectorTable* types_;
    TypeIds type_ids_;
};

std::optional<ColumnScoreMatrix> score_column(const Column& column, const TypeVectorTable& types,
                                              const EmbeddingModel& model);

}  // namespace tabtag
