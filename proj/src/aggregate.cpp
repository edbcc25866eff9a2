#include "tabtag/aggregate.hpp"

#include "tabtag/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <numeric>

namespace tabtag {

ReduceFn parse_reduce_fn(std::string_view name) {
    const auto n = detail::ascii_lower(detail::trim(name));
    if (n == "mean") return ReduceFn::mean;
    if (n == "max") return ReduceFn::max;
    throw Error(Stage::config, "unknown aggregation '" + std::string(name) + "' (expected mean or max)");
}

TreeFn parse_tree_fn(std::string_view name) {
    const auto n = detail::ascii_lower(detail::trim(name));
    if (n == "mean") return TreeFn::mean;
    if (n == "max") return TreeFn::max;
    if (n == "meanmax") return TreeFn::meanmax;
    if (n == "maxmean") return TreeFn::maxmean;
    if (n == "none") return TreeFn::none;
    throw Error(Stage::config, "unknown tree aggregation '" + std::string(name) +
                                   "' (expected mean, max, meanmax, maxmean or none)");
}

std::string_view to_string(ReduceFn fn) { return fn == ReduceFn::mean ? "mean" : "max"; }

std::string_view to_string(TreeFn fn) {
    switch (fn) {
        case TreeFn::mean: return "mean";
        case TreeFn::max: return "max";
        case TreeFn::meanmax: return "meanmax";
        case TreeFn::maxmean: return "maxmean";
        case TreeFn::none: return "none";
    }
    return "none";
}

std::string AggregationConfig::label() const {
    std::string s;
    s += to_string(column_fn);
    s += ',';
    s += to_string(tree_fn);
    s += ',';
    s += to_string(dataset_fn);
    if (tree_after_dataset) s += ",after";
    return s;
}

AggregationConfig parse_config(std::string_view label) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= label.size(); ++i) {
        if (i == label.size() || label[i] == ',' || label[i] == '/' || label[i] == ':') {
            parts.push_back(label.substr(start, i - start));
            start = i + 1;
        }
    }
    if (parts.size() != 3 && !(parts.size() == 4 && detail::trim(parts[3]) == "after"))
        throw Error(Stage::config, "aggregation config '" + std::string(label) +
                                       "' must be column,tree,dataset");
    AggregationConfig c{parse_reduce_fn(parts[0]), parse_tree_fn(parts[1]), parse_reduce_fn(parts[2])};
    c.tree_after_dataset = parts.size() == 4;
    return c;
}

double ScoreVector::score_of(std::string_view id) const {
    for (std::size_t i = 0; i < type_ids->size(); ++i)
        if ((*type_ids)[i] == id) return scores[i];
    throw Error(Stage::aggregate, "type '" + std::string(id) + "' not in score vector");
}

std::vector<std::string> TagPrediction::ids() const {
    std::vector<std::string> out;
    out.reserve(tags.size());
    for (const auto& t : tags) out.push_back(t.type);
    return out;
}

ScoreVector aggregate_column(const ColumnScoreMatrix& matrix, ReduceFn fn) {
    if (matrix.rows() == 0) throw Error(Stage::aggregate, "column '" + matrix.column_name() + "' has no rows");
    const std::size_t n = matrix.cols();
    std::vector<double> out(matrix.row(0).begin(), matrix.row(0).end());
    for (std::size_t r = 1; r < matrix.rows(); ++r) {
        const auto row = matrix.row(r);
        if (fn == ReduceFn::mean) {
            for (std::size_t t = 0; t < n; ++t) out[t] += row[t];
        } else {
            for (std::size_t t = 0; t < n; ++t) out[t] = std::max(out[t], row[t]);
        }
    }
    if (fn == ReduceFn::mean)
        for (double& x : out) x /= static_cast<double>(matrix.rows());
    return {matrix.type_ids(), std::move(out)};
}

ScoreVector tree_aggregate(const ScoreVector& v, const TypeOntology& ontology, TreeFn fn) {
    if (!v.type_ids || v.type_ids->size() != v.scores.size())
        throw Error(Stage::aggregate, "score vector ids and scores differ in length");
    ScoreVector out = v;
    if (fn == TreeFn::none) return out;

    constexpr std::size_t absent = static_cast<std::size_t>(-1);
    std::vector<std::size_t> slot(ontology.size(), absent);
    for (std::size_t i = 0; i < v.type_ids->size(); ++i) {
        const auto idx = ontology.find((*v.type_ids)[i]);
        if (!idx) throw Error(Stage::aggregate, "score vector type '" + (*v.type_ids)[i] + "' is not in the ontology");
        if (slot[*idx] != absent) throw Error(Stage::aggregate, "score vector repeats type '" + (*v.type_ids)[i] + "'");
        slot[*idx] = i;
    }

    auto& s = out.scores;
    for (std::size_t node : ontology.bottom_up_order()) {
        if (slot[node] == absent) continue;
        double sum = 0.0;
        double best = 0.0;
        std::size_t count = 0;
        for (std::size_t child : ontology.child_indices(node)) {
            if (slot[child] == absent) continue;
            const double c = s[slot[child]];
            best = count == 0 ? c : std::max(best, c);
            sum += c;
            ++count;
        }
        if (count == 0) continue;
        const double own = s[slot[node]];
        const double mean_children = sum / static_cast<double>(count);
        double updated = own;
        switch (fn) {
            case TreeFn::meanmax: updated = (own + best) / 2.0; break;
            case TreeFn::maxmean: updated = std::max(own, mean_children); break;
            case TreeFn::mean: updated = (own + mean_children) / 2.0; break;
            case TreeFn::max: updated = std::max(own, best); break;
            case TreeFn::none: break;
        }
        s[slot[node]] = updated;
    }
    return out;
}

ScoreVector aggregate_dataset(std::span<const ScoreVector> vectors, ReduceFn fn) {
    if (vectors.empty()) throw Error(Stage::aggregate, "no column vectors to aggregate");
    const auto& ids = vectors.front().type_ids;
    for (const auto& v : vectors) {
        if (v.type_ids != ids && (!v.type_ids || !ids || *v.type_ids != *ids))
            throw Error(Stage::aggregate, "column vectors use different type orderings");
        if (v.scores.size() != ids->size()) throw Error(Stage::aggregate, "score vector length mismatch");
    }
    const std::size_t n = ids->size();
    std::vector<double> out(n);
    std::vector<double> values(vectors.size());
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t c = 0; c < vectors.size(); ++c) values[c] = vectors[c].scores[t];
        if (fn == ReduceFn::max) {
            out[t] = *std::max_element(values.begin(), values.end());
        } else {
            std::sort(values.begin(), values.end());
            double sum = 0.0;
            for (double x : values) sum += x;
            out[t] = sum / static_cast<double>(values.size());
        }
    }
    return {ids, std::move(out)};
}

TagPrediction rank_types(const ScoreVector& v, std::size_t k) {
    if (k < 1) throw Error(Stage::aggregate, "k must be at least 1");
    const auto& ids = *v.type_ids;
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t take = std::min(k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (v.scores[a] != v.scores[b]) return v.scores[a] > v.scores[b];
                          return ids[a] < ids[b];
                      });
    TagPrediction p;
    p.tags.reserve(take);
    for (std::size_t i = 0; i < take; ++i) p.tags.push_back({ids[order[i]], v.scores[order[i]]});
    return p;
}

ScoreVector aggregate_matrices(std::span<const ColumnScoreMatrix> matrices, const TypeOntology& ontology,
                               const AggregationConfig& config) {
    if (matrices.empty()) throw Error(Stage::score, "no text found: no column produced scores");
    std::vector<ScoreVector> columns;
    columns.reserve(matrices.size());
    for (const auto& m : matrices) {
        auto v = aggregate_column(m, config.column_fn);
        if (!config.tree_after_dataset) v = tree_aggregate(v, ontology, config.tree_fn);
        columns.push_back(std::move(v));
    }
    auto dataset = aggregate_dataset(columns, config.dataset_fn);
    if (config.tree_after_dataset) dataset = tree_aggregate(dataset, ontology, config.tree_fn);
    return dataset;
}

Summary summarize(const TableText& table, const TypeOntology& ontology, const Scorer& scorer,
                  const AggregationConfig& config, std::size_t k, unsigned threads) {
    if (k < 1) throw Error(Stage::config, "k must be at least 1");
    auto scored = scorer.score_table(table, threads);
    Summary s;
    s.diagnostics.oov_cells = scored.oov_cells;
    s.diagnostics.dropped_columns = table.dropped_columns;
    s.diagnostics.dropped_columns.insert(s.diagnostics.dropped_columns.end(), scored.unscored_columns.begin(),
                                         scored.unscored_columns.end());
    s.diagnostics.unscorable_types = scorer.types().unscorable_ids();
    s.prediction = rank_types(aggregate_matrices(scored.matrices, ontology, config), k);
    return s;
}

Summary summarize(const TableText& table, const TypeOntology& ontology, const EmbeddingModel& model,
                  const AggregationConfig& config, std::size_t k) {
    const TypeVectorTable types(ontology, model);
    const Scorer scorer(model, types);
    return summarize(table, ontology, scorer, config, k);
}

}  // namespace tabtag
