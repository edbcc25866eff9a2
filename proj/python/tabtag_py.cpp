#include "tabtag/tabtag.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>

namespace py = pybind11;
using namespace tabtag;

namespace {

// Model, ontology and type vectors loaded once and reused across calls.
class Tagger {
public:
    Tagger(const std::string& model_path, const std::string& ontology_path, const std::string& model_format,
           const std::string& ontology_format, const std::string& type_template)
        : model_(load_model(model_path, parse_model_format(model_format))),
          ontology_(load_ontology(ontology_path, parse_ontology_format(ontology_format))),
          types_(ontology_, model_, TypeTokenMapping{type_template}),
          scorer_(model_, types_) {}

    Summary summarize_csv(const std::string& csv, const AggregationConfig& config, std::size_t k,
                          const IngestOptions& options) const {
        return summarize(extract_text(csv, options), ontology_, scorer_, config, k);
    }

    GridResult grid(const std::string& manifest, const std::vector<AggregationConfig>& configs, std::size_t k,
                    const IngestOptions& options, unsigned threads) const {
        const PreparedCorpus corpus(load_manifest(manifest, ontology_), scorer_, options, threads);
        return grid_search(corpus, ontology_, configs, k);
    }

    const EmbeddingModel& model() const { return model_; }
    const TypeOntology& ontology() const { return ontology_; }
    const TypeVectorTable& types() const { return types_; }

private:
    EmbeddingModel model_;
    TypeOntology ontology_;
    TypeVectorTable types_;
    Scorer scorer_;
};

IngestOptions ingest_options(bool has_header, std::size_t row_cap, std::uint64_t seed, const std::string& delimiter) {
    if (delimiter.size() != 1) throw Error(Stage::config, "delimiter must be a single character");
    IngestOptions o;
    o.has_header = has_header;
    o.row_cap = row_cap;
    o.seed = seed;
    o.delimiter = delimiter[0];
    return o;
}

AggregationConfig config_of(const std::string& column, const std::string& tree, const std::string& dataset) {
    return {parse_reduce_fn(column), parse_tree_fn(tree), parse_reduce_fn(dataset)};
}

py::dict summary_dict(const Summary& s) {
    py::list tags;
    for (const auto& t : s.prediction.tags) tags.append(py::make_tuple(t.type, t.score));
    py::dict diag;
    diag["oov_cells"] = s.diagnostics.oov_cells;
    diag["dropped_columns"] = s.diagnostics.dropped_columns;
    diag["unscorable_types"] = s.diagnostics.unscorable_types;
    py::dict out;
    out["tags"] = tags;
    out["diagnostics"] = diag;
    return out;
}

py::list grid_list(const GridResult& g) {
    py::list rows;
    for (const auto& r : g.rows) {
        py::dict row;
        row["config"] = r.config.label();
        row["match_rate"] = r.result.match_rate;
        row["n"] = r.result.evaluated;
        row["skipped"] = r.result.skipped;
        rows.append(row);
    }
    return rows;
}

std::optional<std::vector<double>> components(const std::optional<Embedding>& e) {
    if (!e) return std::nullopt;
    return e->components;
}

}  // namespace

PYBIND11_MODULE(_tabtag, m) {
    m.doc() = "Subject tags for tabular datasets from word embeddings and a type ontology";

    py::register_exception<Error>(m, "TabtagError", PyExc_RuntimeError);

    py::enum_<ModelFormat>(m, "ModelFormat").value("binary", ModelFormat::binary).value("text", ModelFormat::text);
    py::enum_<OntologyFormat>(m, "OntologyFormat")
        .value("ntriples", OntologyFormat::ntriples)
        .value("tsv", OntologyFormat::tsv);

    py::class_<EmbeddingModel>(m, "EmbeddingModel")
        .def_property_readonly("dimension", &EmbeddingModel::dimension)
        .def("__len__", &EmbeddingModel::size)
        .def("__contains__", &EmbeddingModel::contains)
        .def("lookup", [](const EmbeddingModel& self, const std::string& t) { return components(self.lookup(t)); })
        .def("embed_phrase", [](const EmbeddingModel& self, const std::vector<std::string>& tokens) {
            return components(embed_phrase(self, tokens));
        });

    m.def("load_model", &load_model, py::arg("path"), py::arg("format") = ModelFormat::binary,
          py::call_guard<py::gil_scoped_release>());

    m.def("similarity", [](const std::vector<double>& u, const std::vector<double>& v) {
        return similarity(Embedding{u}, Embedding{v});
    });

    py::class_<TypeOntology>(m, "TypeOntology")
        .def("__len__", &TypeOntology::size)
        .def("__contains__", &TypeOntology::contains)
        .def("children_of", &TypeOntology::children_of)
        .def("parent_of", &TypeOntology::parent_of)
        .def("roots", &TypeOntology::roots)
        .def("depth", [](const TypeOntology& o, const std::string& id) { return o.node(o.index_of(id)).depth; })
        .def("label", [](const TypeOntology& o, const std::string& id) { return o.node(o.index_of(id)).label; })
        .def_property_readonly("warnings", &TypeOntology::warnings)
        .def("tree_aggregate", [](const TypeOntology& o, const std::map<std::string, double>& scores,
                                  const std::string& fn) {
            std::vector<std::string> ids;
            std::vector<double> values;
            for (const auto& [id, s] : scores) {
                ids.push_back(id);
                values.push_back(s);
            }
            const ScoreVector v{std::make_shared<const std::vector<std::string>>(ids), values};
            const auto out = tree_aggregate(v, o, parse_tree_fn(fn));
            std::map<std::string, double> result;
            for (std::size_t i = 0; i < ids.size(); ++i) result[ids[i]] = out.scores[i];
            return result;
        });

    m.def("load_ontology", &load_ontology, py::arg("path"), py::arg("format") = OntologyFormat::ntriples);

    m.def("tokenize_cell", &tokenize_cell);
    m.def("is_textual", &is_textual);
    m.def(
        "extract_text",
        [](const std::string& path, bool has_header, std::size_t row_cap, std::uint64_t seed,
           const std::string& delimiter) {
            const auto t = extract_text(path, ingest_options(has_header, row_cap, seed, delimiter));
            py::list cols;
            for (const auto& c : t.columns) {
                py::dict d;
                d["name"] = c.name;
                d["kind"] = std::string(to_string(c.kind));
                d["cells"] = c.cells;
                cols.append(d);
            }
            return cols;
        },
        py::arg("path"), py::arg("has_header") = true, py::arg("row_cap") = 1000, py::arg("seed") = 0,
        py::arg("delimiter") = ",");

    m.def(
        "match_rate",
        [](const std::vector<std::string>& predicted, const std::set<std::string>& truth, std::size_t k) {
            TagPrediction p;
            for (const auto& id : predicted) p.tags.push_back({id, 0.0});
            return match_rate(p, truth, k);
        },
        py::arg("predicted"), py::arg("truth"), py::arg("k") = 3);

    m.def("default_grid", [] {
        std::vector<std::string> labels;
        for (const auto& c : default_grid()) labels.push_back(c.label());
        return labels;
    });

    py::class_<Tagger>(m, "Tagger")
        .def(py::init<const std::string&, const std::string&, const std::string&, const std::string&,
                      const std::string&>(),
             py::arg("model"), py::arg("ontology"), py::arg("model_format") = "binary",
             py::arg("ontology_format") = "ntriples", py::arg("type_template") = "{}",
             py::call_guard<py::gil_scoped_release>())
        .def_property_readonly("model", &Tagger::model, py::return_value_policy::reference_internal)
        .def_property_readonly("ontology", &Tagger::ontology, py::return_value_policy::reference_internal)
        .def_property_readonly("unscorable_types", [](const Tagger& t) { return t.types().unscorable_ids(); })
        .def(
            "summarize",
            [](const Tagger& self, const std::string& csv, std::size_t k, const std::string& column_agg,
               const std::string& tree_agg, const std::string& dataset_agg, bool has_header, std::size_t row_cap,
               std::uint64_t seed, const std::string& delimiter) {
                Summary s;
                {
                    const auto config = config_of(column_agg, tree_agg, dataset_agg);
                    const auto options = ingest_options(has_header, row_cap, seed, delimiter);
                    py::gil_scoped_release release;
                    s = self.summarize_csv(csv, config, k, options);
                }
                return summary_dict(s);
            },
            py::arg("csv"), py::arg("k") = 3, py::arg("column_agg") = "mean", py::arg("tree_agg") = "meanmax",
            py::arg("dataset_agg") = "mean", py::arg("has_header") = true, py::arg("row_cap") = 1000,
            py::arg("seed") = 0, py::arg("delimiter") = ",")
        .def(
            "summarize_json",
            [](const Tagger& self, const std::string& csv, std::size_t k, const std::string& column_agg,
               const std::string& tree_agg, const std::string& dataset_agg, bool has_header) {
                const auto s = self.summarize_csv(csv, config_of(column_agg, tree_agg, dataset_agg), k,
                                                  ingest_options(has_header, 1000, 0, ","));
                return format_summary(s, self.ontology(), OutputFormat::json, {});
            },
            py::arg("csv"), py::arg("k") = 3, py::arg("column_agg") = "mean", py::arg("tree_agg") = "meanmax",
            py::arg("dataset_agg") = "mean", py::arg("has_header") = true)
        .def(
            "grid",
            [](const Tagger& self, const std::string& manifest, std::optional<std::vector<std::string>> configs,
               std::size_t k, bool has_header, unsigned threads) {
                std::vector<AggregationConfig> cs;
                if (configs) {
                    for (const auto& c : *configs) cs.push_back(parse_config(c));
                } else {
                    cs = default_grid();
                }
                GridResult g;
                {
                    const auto options = ingest_options(has_header, 1000, 0, ",");
                    py::gil_scoped_release release;
                    g = self.grid(manifest, cs, k, options, threads);
                }
                return grid_list(g);
            },
            py::arg("manifest"), py::arg("configs") = py::none(), py::arg("k") = 3, py::arg("has_header") = true,
            py::arg("threads") = 1);
}
