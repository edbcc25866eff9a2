#pragma once

#include "tabtag/embedding.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tabtag {

enum class OntologyFormat { ntriples, tsv };

OntologyFormat parse_ontology_format(std::string_view name);

struct TypeNode {
    std::string id;
    std::string label;
    std::size_t depth = 0;
};

/// A child -> parent edge, as read from the source.
struct SubclassEdge {
    std::string child;
    std::string parent;
};

/// Type forest. Types are kept sorted by id; that order is the global type
/// order used by every score vector.
class TypeOntology {
public:
    /// Builds a forest from edges plus standalone roots. A type given two
    /// distinct parents keeps the first and the rest land in warnings().
    /// Throws on cycles.
    static TypeOntology from_edges(const std::vector<SubclassEdge>& edges,
                                   const std::vector<std::string>& roots = {});

    std::size_t size() const noexcept { return nodes_.size(); }
    const std::vector<TypeNode>& types() const noexcept { return nodes_; }
    const TypeNode& node(std::size_t index) const { return nodes_.at(index); }

    bool contains(std::string_view id) const;
    std::size_t index_of(std::string_view id) const;  // throws on unknown id
    std::optional<std::size_t> find(std::string_view id) const;

    std::optional<std::string> parent_of(std::string_view id) const;
    std::vector<std::string> children_of(std::string_view id) const;
    std::vector<std::string> roots() const;

    std::optional<std::size_t> parent_index(std::size_t index) const { return parent_.at(index); }
    const std::vector<std::size_t>& child_indices(std::size_t index) const { return children_.at(index); }

    /// Every node, children before parents.
    const std::vector<std::size_t>& bottom_up_order() const noexcept { return bottom_up_; }

    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    std::vector<TypeNode> nodes_;
    std::vector<std::optional<std::size_t>> parent_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::size_t> bottom_up_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::string> warnings_;
};

TypeOntology load_ontology(const std::filesystem::path& path, OntologyFormat format);
TypeOntology read_ontology(std::istream& in, OntologyFormat format);

/// Splits a type name at case transitions and non-alphanumerics, lowercased:
/// "MeanOfTransportation" -> {"mean", "of", "transportation"}.
std::vector<std::string> split_camel_case(std::string_view name);

/// Human-readable label for a type id ("BodyOfWater" -> "body of water").
std::string type_label(std::string_view id);

/// How a type id becomes a vocabulary token. `{}` in the template is replaced
/// by the type id, e.g. "DBPEDIA_ID/{}".
struct TypeTokenMapping {
    std::string token_template = "{}";

    std::string token_for(std::string_view id) const;
};

/// Looks up the mapped token (exact, then lowercase), falling back to the
/// phrase embedding of the camel-case split of the id.
std::optional<Embedding> type_vector(const TypeOntology& ontology, const EmbeddingModel& model,
                                     std::string_view id, const TypeTokenMapping& mapping = {});

/// Type vectors for a whole (ontology, model) pair, computed once. Types
/// without a vector are unscorable and excluded from scoring.
class TypeVectorTable {
public:
    TypeVectorTable(const TypeOntology& ontology, const EmbeddingModel& model,
                    const TypeTokenMapping& mapping = {});

    std::size_t dimension() const noexcept { return dimension_; }

    /// Scorable type ids in ontology order.
    const std::vector<std::string>& scorable_ids() const noexcept { return scorable_ids_; }
    const std::vector<std::string>& unscorable_ids() const noexcept { return unscorable_ids_; }

    /// Cached vector for any ontology type; absent if unscorable.
    const std::optional<Embedding>& vector(std::string_view id) const;

    /// Row-major |scorable| x dimension matrix of the scorable vectors.
    const std::vector<double>& matrix() const noexcept { return matrix_; }

private:
    std::size_t dimension_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::optional<Embedding>> by_index_;
    std::vector<std::string> scorable_ids_;
    std::vector<std::string> unscorable_ids_;
    std::vector<double> matrix_;
};

}  // namespace tabtag
