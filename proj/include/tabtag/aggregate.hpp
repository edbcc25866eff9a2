#pragma once

#include "tabtag/ontology.hpp"
#include "tabtag/score.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tabtag {

enum class ReduceFn { mean, max };

/// Tree update for a type with (updated) child scores c1..cn:
///   meanmax: mean(own, max(c))    maxmean: max(own, mean(c))
///   mean:    mean(own, mean(c))   max:     max(own, max(c))
///   none:    own
enum class TreeFn { mean, max, meanmax, maxmean, none };

ReduceFn parse_reduce_fn(std::string_view name);
TreeFn parse_tree_fn(std::string_view name);
std::string_view to_string(ReduceFn fn);
std::string_view to_string(TreeFn fn);

struct AggregationConfig {
    ReduceFn column_fn = ReduceFn::mean;
    TreeFn tree_fn = TreeFn::meanmax;
    ReduceFn dataset_fn = ReduceFn::mean;
    /// Apply the tree update once to the dataset vector instead of to each
    /// column vector.
    bool tree_after_dataset = false;

    /// "mean,meanmax,mean" (column, tree, dataset).
    std::string label() const;
    bool operator==(const AggregationConfig&) const = default;
};

AggregationConfig parse_config(std::string_view label);

struct ScoreVector {
    TypeIds type_ids;
    std::vector<double> scores;

    std::size_t size() const noexcept { return scores.size(); }
    double score_of(std::string_view id) const;
};

struct Tag {
    std::string type;
    double score = 0.0;
    bool operator==(const Tag&) const = default;
};

struct TagPrediction {
    std::vector<Tag> tags;

    std::vector<std::string> ids() const;
};

ScoreVector aggregate_column(const ColumnScoreMatrix& matrix, ReduceFn fn);

/// One bottom-up pass over the forest; parents see their children's updated
/// scores. Types absent from `v` are skipped, and a type with no scored child
/// keeps its score.
ScoreVector tree_aggregate(const ScoreVector& v, const TypeOntology& ontology, TreeFn fn);

/// Per-type reduction across columns. The mean sums each type's values in
/// sorted order, so the result does not depend on column order.
ScoreVector aggregate_dataset(std::span<const ScoreVector> vectors, ReduceFn fn);

/// Top min(k, n) types by descending score; ties go to the smaller id.
TagPrediction rank_types(const ScoreVector& v, std::size_t k);

/// Column -> tree -> dataset reduction of already-scored columns.
ScoreVector aggregate_matrices(std::span<const ColumnScoreMatrix> matrices,
                               const TypeOntology& ontology, const AggregationConfig& config);

struct SummaryDiagnostics {
    std::size_t oov_cells = 0;
    std::vector<std::string> dropped_columns;
    std::vector<std::string> unscorable_types;
};

struct Summary {
    TagPrediction prediction;
    SummaryDiagnostics diagnostics;
};

/// Throws Error(Stage::score) "no text found" when no column produces scores.
Summary summarize(const TableText& table, const TypeOntology& ontology, const Scorer& scorer,
                  const AggregationConfig& config, std::size_t k, unsigned threads = 1);

/// Convenience overload that builds the type vectors itself.
Summary summarize(const TableText& table, const TypeOntology& ontology, const EmbeddingModel& model,
                  const AggregationConfig& config, std::size_t k);

}  // namespace tabtag
