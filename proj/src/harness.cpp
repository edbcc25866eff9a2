#include "tabtag/harness.hpp"

#include "tabtag/error.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <json.hpp>
#include <thread>

namespace tabtag {

std::vector<LabeledDataset> read_manifest(std::istream& in, const TypeOntology& ontology,
                                          const std::filesystem::path& base_dir) {
    std::vector<LabeledDataset> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto where = [&] { return "manifest line " + std::to_string(line_no) + ": "; };
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(Stage::harness, where() + e.what());
        }
        if (!j.is_object() || !j.contains("path") || !j["path"].is_string() || !j.contains("true_types") ||
            !j["true_types"].is_array())
            throw Error(Stage::harness, where() + "expected {\"path\": string, \"true_types\": [string]}");
        LabeledDataset d;
        d.table = j["path"].get<std::string>();
        if (d.table.is_relative() && !base_dir.empty()) d.table = base_dir / d.table;
        for (const auto& t : j["true_types"]) {
            if (!t.is_string()) throw Error(Stage::harness, where() + "true_types must be strings");
            const auto id = t.get<std::string>();
            if (!ontology.contains(id)) throw Error(Stage::harness, where() + "unknown type '" + id + "'");
            d.true_types.insert(id);
        }
        if (d.true_types.empty()) throw Error(Stage::harness, where() + "true_types is empty");
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<LabeledDataset> load_manifest(const std::filesystem::path& path, const TypeOntology& ontology) {
    std::ifstream in(path);
    if (!in) throw Error(Stage::harness, "cannot open manifest '" + path.string() + "'");
    return read_manifest(in, ontology, path.parent_path());
}

double match_rate(const TagPrediction& prediction, const std::set<std::string>& truth, std::size_t k) {
    if (truth.empty()) throw Error(Stage::harness, "match rate needs at least one true type");
    const std::size_t top = std::min(k, prediction.tags.size());
    std::set<std::string> seen;
    for (std::size_t i = 0; i < top; ++i)
        if (truth.contains(prediction.tags[i].type)) seen.insert(prediction.tags[i].type);
    return static_cast<double>(seen.size()) / static_cast<double>(truth.size());
}

std::vector<AggregationConfig> default_grid() {
    using R = ReduceFn;
    using T = TreeFn;
    return {
        {R::mean, T::meanmax, R::mean}, {R::max, T::meanmax, R::mean}, {R::mean, T::max, R::mean},
        {R::max, T::max, R::mean},      {R::mean, T::meanmax, R::max}, {R::mean, T::max, R::max},
        {R::max, T::max, R::max},       {R::max, T::meanmax, R::max},
    };
}

std::vector<AggregationConfig> full_grid() {
    std::vector<AggregationConfig> out;
    for (auto c : {ReduceFn::mean, ReduceFn::max})
        for (auto t : {TreeFn::mean, TreeFn::max, TreeFn::meanmax, TreeFn::maxmean, TreeFn::none})
            for (auto d : {ReduceFn::mean, ReduceFn::max}) out.push_back({c, t, d});
    return out;
}

PreparedCorpus::PreparedCorpus(const std::vector<LabeledDataset>& corpus, const Scorer& scorer,
                               const IngestOptions& options, unsigned threads)
    : corpus_(corpus), prepared_(corpus.size()) {
    if (corpus_.empty()) throw Error(Stage::harness, "corpus is empty");
    std::vector<std::string> errors(corpus_.size());

    auto prepare = [&](std::size_t i) {
        try {
            auto table = extract_text(corpus_[i].table, options);
            auto scored = scorer.score_table(table);
            if (scored.matrices.empty()) {
                errors[i] = "no text found";
                return;
            }
            prepared_[i] = Entry{std::move(scored.matrices)};
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    };

    if (threads <= 1) {
        for (std::size_t i = 0; i < corpus_.size(); ++i) prepare(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < std::min<std::size_t>(threads, corpus_.size()); ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < corpus_.size(); i = next++) prepare(i);
            });
    }

    for (std::size_t i = 0; i < corpus_.size(); ++i) {
        if (prepared_[i]) {
            entries_.push_back(i);
        } else {
            failures_.push_back(corpus_[i].table.string() + ": " + errors[i]);
        }
    }
}

std::vector<double> PreparedCorpus::rates(const TypeOntology& ontology, const AggregationConfig& config,
                                          std::size_t k) const {
    std::vector<double> out;
    out.reserve(entries_.size());
    for (std::size_t i : entries_) {
        const auto scores = aggregate_matrices(prepared_[i]->matrices, ontology, config);
        out.push_back(match_rate(rank_types(scores, k), corpus_[i].true_types, k));
    }
    return out;
}

CorpusResult PreparedCorpus::evaluate(const TypeOntology& ontology, const AggregationConfig& config,
                                      std::size_t k) const {
    CorpusResult r;
    r.skipped = failures_.size();
    auto per_dataset = rates(ontology, config, k);
    r.evaluated = per_dataset.size();
    if (per_dataset.empty()) return r;
    // Sorted summation keeps the mean independent of corpus order.
    std::sort(per_dataset.begin(), per_dataset.end());
    double sum = 0.0;
    for (double x : per_dataset) sum += x;
    r.match_rate = sum / static_cast<double>(per_dataset.size());
    return r;
}

CorpusResult evaluate_corpus(const std::vector<LabeledDataset>& corpus, const TypeOntology& ontology,
                             const Scorer& scorer, const IngestOptions& options,
                             const AggregationConfig& config, std::size_t k) {
    return PreparedCorpus(corpus, scorer, options).evaluate(ontology, config, k);
}

GridResult grid_search(const PreparedCorpus& corpus, const TypeOntology& ontology,
                       const std::vector<AggregationConfig>& configs, std::size_t k) {
    if (configs.empty()) throw Error(Stage::harness, "no aggregation configs to evaluate");
    GridResult g;
    g.corpus_size = corpus.size() + corpus.skipped();
    for (const auto& c : configs) g.rows.push_back({c, corpus.evaluate(ontology, c, k)});
    std::stable_sort(g.rows.begin(), g.rows.end(), [](const GridRow& a, const GridRow& b) {
        return a.result.match_rate > b.result.match_rate;
    });
    return g;
}

GridResult grid_search(const std::vector<LabeledDataset>& corpus, const TypeOntology& ontology,
                       const Scorer& scorer, const IngestOptions& options,
                       const std::vector<AggregationConfig>& configs, std::size_t k) {
    return grid_search(PreparedCorpus(corpus, scorer, options), ontology, configs, k);
}

}  // namespace tabtag
