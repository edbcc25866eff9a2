#pragma once

#include "tabtag/aggregate.hpp"
#include "tabtag/ingest.hpp"
#include "tabtag/score.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tabtag {

struct LabeledDataset {
    std::filesystem::path table;
    std::set<std::string> true_types;
};

/// JSON-lines manifest, one {"path": ..., "true_types": [...]} per line.
/// Relative paths resolve against `base_dir`. Every true type must exist in
/// the ontology.
std::vector<LabeledDataset> read_manifest(std::istream& in, const TypeOntology& ontology,
                                          const std::filesystem::path& base_dir = {});
std::vector<LabeledDataset> load_manifest(const std::filesystem::path& path, const TypeOntology& ontology);

/// |truth ∩ top-k predicted| / |truth|.
double match_rate(const TagPrediction& prediction, const std::set<std::string>& truth, std::size_t k);

/// The eight (column, tree, dataset) combinations compared in the original
/// evaluation, in its bar order.
std::vector<AggregationConfig> default_grid();

/// Every combination of column x tree x dataset function (2 x 5 x 2).
std::vector<AggregationConfig> full_grid();

struct CorpusResult {
    double match_rate = 0.0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
};

struct GridRow {
    AggregationConfig config;
    CorpusResult result;
};

struct GridResult {
    std::vector<GridRow> rows;  // descending match rate, ties in input order
    std::size_t corpus_size = 0;
};

/// A corpus ingested and scored once; aggregation configs are cheap to
/// evaluate against it. Datasets that fail ingestion or yield no scores are
/// skipped and listed in failures().
class PreparedCorpus {
public:
    PreparedCorpus(const std::vector<LabeledDataset>& corpus, const Scorer& scorer,
                   const IngestOptions& options, unsigned threads = 1);

    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t skipped() const noexcept { return failures_.size(); }
    const std::vector<std::string>& failures() const noexcept { return failures_; }

    CorpusResult evaluate(const TypeOntology& ontology, const AggregationConfig& config, std::size_t k) const;

    /// Per-dataset rates for the datasets that were not skipped, in corpus order.
    std::vector<double> rates(const TypeOntology& ontology, const AggregationConfig& config, std::size_t k) const;

private:
    struct Entry {
        std::vector<ColumnScoreMatrix> matrices;
    };
    std::vector<LabeledDataset> corpus_;
    std::vector<std::optional<Entry>> prepared_;
    std::vector<std::size_t> entries_;
    std::vector<std::string> failures_;
};

CorpusResult evaluate_corpus(const std::vector<LabeledDataset>& corpus, const TypeOntology& ontology,
                             const Scorer& scorer, const IngestOptions& options,
                             const AggregationConfig& config, std::size_t k);

GridResult grid_search(const PreparedCorpus& corpus, const TypeOntology& ontology,
                       const std::vector<AggregationConfig>& configs, std::size_t k);

GridResult grid_search(const std::vector<LabeledDataset>& corpus, const TypeOntology& ontology,
                       const Scorer& scorer, const IngestOptions& options,
                       const std::vector<AggregationConfig>& configs, std::size_t k);

}  // namespace tabtag
