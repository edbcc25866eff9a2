#pragma once
// Brute-force reference computations. These deliberately avoid the library's
// aggregation and scoring code paths; they only read inputs through plain
// data (maps, vectors) and the model's lookup().

#include "tabtag/tabtag.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

inline double sorted_sum(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    return std::accumulate(xs.begin(), xs.end(), 0.0);
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline std::optional<std::vector<double>> unit(std::vector<double> v) {
    const double n = std::sqrt(dot(v, v));
    if (!(n > 0.0)) return std::nullopt;
    for (auto& x : v) x /= n;
    return v;
}

/// Mean of the known token vectors, renormalized.
inline std::optional<std::vector<double>> phrase(const tabtag::EmbeddingModel& model,
                                                 const std::vector<std::string>& tokens) {
    std::vector<std::vector<double>> known;
    for (const auto& t : tokens)
        if (auto e = model.lookup(t)) known.push_back(e->components);
    if (known.empty()) return std::nullopt;
    if (known.size() == 1) return known[0];
    std::vector<double> mean(model.dimension());
    for (std::size_t j = 0; j < mean.size(); ++j) {
        std::vector<double> col;
        for (const auto& v : known) col.push_back(v[j]);
        mean[j] = sorted_sum(col) / static_cast<double>(known.size());
    }
    return unit(mean);
}

inline std::vector<std::string> camel_words(const std::string& id) {
    std::vector<std::string> words;
    std::string cur;
    for (char c : id) {
        const bool alnum = std::isalnum(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80;
        if (!alnum || std::isupper(static_cast<unsigned char>(c))) {
            if (!cur.empty()) words.push_back(cur);
            cur.clear();
        }
        if (alnum) cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (!cur.empty()) words.push_back(cur);
    return words;
}

inline std::optional<std::vector<double>> type_vec(const tabtag::EmbeddingModel& model, const std::string& id) {
    if (auto e = model.lookup(id)) return e->components;
    auto words = camel_words(id);
    if (words.empty()) return std::nullopt;
    return phrase(model, words);
}

using Matrix = std::vector<std::vector<double>>;

inline std::vector<double> column(const Matrix& rows, tabtag::ReduceFn fn) {
    std::vector<double> out;
    for (std::size_t t = 0; t < rows[0].size(); ++t) {
        if (fn == tabtag::ReduceFn::max) {
            double m = rows[0][t];
            for (const auto& r : rows) m = r[t] > m ? r[t] : m;
            out.push_back(m);
        } else {
            double s = 0.0;
            for (const auto& r : rows) s += r[t];
            out.push_back(s / static_cast<double>(rows.size()));
        }
    }
    return out;
}

inline std::vector<double> dataset(const Matrix& vectors, tabtag::ReduceFn fn) {
    std::vector<double> out;
    for (std::size_t t = 0; t < vectors[0].size(); ++t) {
        std::vector<double> vals;
        for (const auto& v : vectors) vals.push_back(v[t]);
        if (fn == tabtag::ReduceFn::max)
            out.push_back(*std::max_element(vals.begin(), vals.end()));
        else
            out.push_back(sorted_sum(vals) / static_cast<double>(vals.size()));
    }
    return out;
}

/// Recursive reading of the tree update: a type's new score combines its own
/// score with the new scores of its scored children.
inline std::map<std::string, double> tree(const std::map<std::string, double>& scores,
                                          const std::map<std::string, std::string>& parent, tabtag::TreeFn fn) {
    std::map<std::string, std::set<std::string>> children;
    for (const auto& [c, p] : parent) children[p].insert(c);

    std::function<double(const std::string&)> updated = [&](const std::string& id) -> double {
        const double own = scores.at(id);
        if (fn == tabtag::TreeFn::none) return own;
        std::vector<double> kids;
        for (const auto& c : children[id])
            if (scores.count(c)) kids.push_back(updated(c));
        if (kids.empty()) return own;
        double sum = 0.0;
        for (double k : kids) sum += k;
        const double mean = sum / static_cast<double>(kids.size());
        const double mx = *std::max_element(kids.begin(), kids.end());
        switch (fn) {
            case tabtag::TreeFn::meanmax: return (own + mx) / 2.0;
            case tabtag::TreeFn::maxmean: return std::max(own, mean);
            case tabtag::TreeFn::mean: return (own + mean) / 2.0;
            case tabtag::TreeFn::max: return std::max(own, mx);
            case tabtag::TreeFn::none: return own;
        }
        return own;
    };
    std::map<std::string, double> out;
    for (const auto& [id, s] : scores) out[id] = updated(id);
    return out;
}

inline std::vector<std::pair<std::string, double>> rank(const std::vector<std::string>& ids,
                                                        const std::vector<double>& scores, std::size_t k) {
    std::vector<std::pair<std::string, double>> all;
    for (std::size_t i = 0; i < ids.size(); ++i) all.emplace_back(ids[i], scores[i]);
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    all.resize(std::min(k, all.size()));
    return all;
}

inline double match(const std::vector<std::string>& predicted, const std::set<std::string>& truth, std::size_t k) {
    std::set<std::string> top(predicted.begin(), predicted.begin() + static_cast<long>(std::min(k, predicted.size())));
    std::vector<std::string> both;
    std::set_intersection(top.begin(), top.end(), truth.begin(), truth.end(), std::back_inserter(both));
    return static_cast<double>(both.size()) / static_cast<double>(truth.size());
}

/// Full pipeline from tokens to ranked tags, composed from the stage oracles.
struct PipelineResult {
    std::vector<std::pair<std::string, double>> tags;
};

inline PipelineResult summarize(const tabtag::TableText& table, const tabtag::EmbeddingModel& model,
                                const std::vector<std::string>& type_ids,
                                const std::map<std::string, std::string>& parent,
                                const tabtag::AggregationConfig& config, std::size_t k) {
    std::vector<std::string> scorable;
    std::vector<std::vector<double>> tvecs;
    for (const auto& id : type_ids) {
        if (auto v = type_vec(model, id)) {
            scorable.push_back(id);
            tvecs.push_back(*v);
        }
    }
    // Restrict the parent map to edges the ontology would keep.
    Matrix col_vectors;
    auto apply_tree = [&](const std::vector<double>& v) {
        std::map<std::string, double> m;
        for (std::size_t i = 0; i < scorable.size(); ++i) m[scorable[i]] = v[i];
        auto t = tree(m, parent, config.tree_fn);
        std::vector<double> out;
        for (const auto& id : scorable) out.push_back(t.at(id));
        return out;
    };
    for (const auto& col : table.columns) {
        Matrix rows;
        for (const auto& cell : col.cells) {
            auto e = phrase(model, cell);
            if (!e) continue;
            std::vector<double> row;
            for (const auto& tv : tvecs) row.push_back(dot(*e, tv));
            rows.push_back(row);
        }
        if (rows.empty()) continue;
        auto v = column(rows, config.column_fn);
        if (!config.tree_after_dataset) v = apply_tree(v);
        col_vectors.push_back(v);
    }
    auto d = dataset(col_vectors, config.dataset_fn);
    if (config.tree_after_dataset) d = apply_tree(d);
    return {rank(scorable, d, k)};
}

}  // namespace oracle
