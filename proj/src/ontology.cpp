#include "tabtag/ontology.hpp"

#include "tabtag/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>

namespace tabtag {

OntologyFormat parse_ontology_format(std::string_view name) {
    if (name == "ntriples" || name == "nt" || name == "n-triples") return OntologyFormat::ntriples;
    if (name == "tsv") return OntologyFormat::tsv;
    throw Error(Stage::config, "unknown ontology format '" + std::string(name) + "'");
}

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_word_char(char c) {
    return is_upper(c) || is_lower(c) || is_digit(c) || static_cast<unsigned char>(c) >= 0x80;
}

}  // namespace

std::vector<std::string> split_camel_case(std::string_view name) {
    std::vector<std::string> words;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) words.push_back(detail::ascii_lower(current));
        current.clear();
    };
    for (char c : name) {
        if (!is_word_char(c)) {
            flush();
            continue;
        }
        if (is_upper(c)) flush();
        current.push_back(c);
    }
    flush();
    return words;
}

std::string type_label(std::string_view id) {
    std::string label;
    for (const auto& w : split_camel_case(id)) {
        if (!label.empty()) label.push_back(' ');
        label += w;
    }
    return label.empty() ? std::string(id) : label;
}

TypeOntology TypeOntology::from_edges(const std::vector<SubclassEdge>& edges,
                                      const std::vector<std::string>& roots) {
    std::set<std::string> ids(roots.begin(), roots.end());
    for (const auto& e : edges) {
        ids.insert(e.child);
        ids.insert(e.parent);
    }

    TypeOntology o;
    o.nodes_.reserve(ids.size());
    for (const auto& id : ids) {
        o.index_.emplace(id, o.nodes_.size());
        o.nodes_.push_back(TypeNode{id, type_label(id), 0});
    }
    const std::size_t n = o.nodes_.size();
    o.parent_.assign(n, std::nullopt);
    o.children_.assign(n, {});

    for (const auto& e : edges) {
        const std::size_t c = o.index_.at(e.child);
        const std::size_t p = o.index_.at(e.parent);
        if (c == p) throw Error(Stage::ontology, "cycle detected: " + e.child + " -> " + e.child);
        if (o.parent_[c]) {
            if (*o.parent_[c] != p)
                o.warnings_.push_back("type '" + e.child + "' has a second parent '" + e.parent +
                                      "'; keeping '" + o.nodes_[*o.parent_[c]].id + "'");
            continue;
        }
        o.parent_[c] = p;
    }

    // 0 = unvisited, 1 = on the current parent chain, 2 = known to reach a root.
    std::vector<int> state(n, 0);
    for (std::size_t start = 0; start < n; ++start) {
        std::vector<std::size_t> chain;
        std::size_t cur = start;
        bool revisited = false;
        for (;;) {
            if (state[cur] != 0) {
                revisited = state[cur] == 1;
                break;
            }
            state[cur] = 1;
            chain.push_back(cur);
            if (!o.parent_[cur]) break;
            cur = *o.parent_[cur];
        }
        if (revisited) {
            std::string msg = "cycle detected: ";
            for (auto it = std::find(chain.begin(), chain.end(), cur); it != chain.end(); ++it)
                msg += o.nodes_[*it].id + " -> ";
            msg += o.nodes_[cur].id;
            throw Error(Stage::ontology, msg);
        }
        for (std::size_t v : chain) state[v] = 2;
    }

    for (std::size_t c = 0; c < n; ++c)
        if (o.parent_[c]) o.children_[*o.parent_[c]].push_back(c);
    // Indices follow sorted ids, so sorted indices give lexicographic children.
    for (auto& ch : o.children_) std::sort(ch.begin(), ch.end());

    // Depth-first from each root: depths on the way down, post-order for bottom_up_.
    o.bottom_up_.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (o.parent_[r]) continue;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{r, 0}};
        o.nodes_[r].depth = 0;
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            if (next < o.children_[v].size()) {
                const std::size_t child = o.children_[v][next++];
                o.nodes_[child].depth = o.nodes_[v].depth + 1;
                stack.emplace_back(child, 0);
            } else {
                o.bottom_up_.push_back(v);
                stack.pop_back();
            }
        }
    }
    return o;
}

bool TypeOntology::contains(std::string_view id) const { return find(id).has_value(); }

std::optional<std::size_t> TypeOntology::find(std::string_view id) const {
    if (auto it = index_.find(std::string(id)); it != index_.end()) return it->second;
    return std::nullopt;
}

std::size_t TypeOntology::index_of(std::string_view id) const {
    if (auto i = find(id)) return *i;
    throw Error(Stage::ontology, "unknown type '" + std::string(id) + "'");
}

std::optional<std::string> TypeOntology::parent_of(std::string_view id) const {
    const auto p = parent_[index_of(id)];
    if (!p) return std::nullopt;
    return nodes_[*p].id;
}

std::vector<std::string> TypeOntology::children_of(std::string_view id) const {
    std::vector<std::string> out;
    for (std::size_t c : children_[index_of(id)]) out.push_back(nodes_[c].id);
    return out;
}

std::vector<std::string> TypeOntology::roots() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (!parent_[i]) out.push_back(nodes_[i].id);
    return out;
}

namespace {

[[noreturn]] void fail_line(std::size_t line_no, const std::string& why) {
    throw Error(Stage::ontology, "line " + std::to_string(line_no) + ": " + why);
}

std::string last_segment(std::string_view iri) {
    while (!iri.empty() && (iri.back() == '/' || iri.back() == '#')) iri.remove_suffix(1);
    const auto cut = iri.find_last_of("/#");
    return std::string(cut == std::string_view::npos ? iri : iri.substr(cut + 1));
}

struct Term {
    enum Kind { iri, blank, literal } kind;
    std::string_view text;
};

class TripleLexer {
public:
    TripleLexer(std::string_view line, std::size_t line_no) : s_(line), line_no_(line_no) {}

    Term term() {
        skip_space();
        if (pos_ >= s_.size()) fail_line(line_no_, "unexpected end of statement");
        const char c = s_[pos_];
        if (c == '<') {
            const auto end = s_.find('>', pos_);
            if (end == std::string_view::npos) fail_line(line_no_, "unterminated IRI");
            Term t{Term::iri, s_.substr(pos_ + 1, end - pos_ - 1)};
            pos_ = end + 1;
            return t;
        }
        if (c == '_' && pos_ + 1 < s_.size() && s_[pos_ + 1] == ':') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && !detail::is_space(s_[pos_])) ++pos_;
            return {Term::blank, s_.substr(start, pos_ - start)};
        }
        if (c == '"') {
            const std::size_t start = pos_++;
            while (pos_ < s_.size() && s_[pos_] != '"') pos_ += s_[pos_] == '\\' ? 2 : 1;
            if (pos_ >= s_.size()) fail_line(line_no_, "unterminated literal");
            ++pos_;
            if (pos_ < s_.size() && s_[pos_] == '@') {
                while (pos_ < s_.size() && !detail::is_space(s_[pos_]) && s_[pos_] != '.') ++pos_;
            } else if (s_.substr(pos_, 3) == "^^<") {
                const auto end = s_.find('>', pos_);
                if (end == std::string_view::npos) fail_line(line_no_, "unterminated datatype IRI");
                pos_ = end + 1;
            }
            return {Term::literal, s_.substr(start, pos_ - start)};
        }
        fail_line(line_no_, "expected an IRI, blank node or literal");
    }

    void end_of_statement() {
        skip_space();
        if (pos_ >= s_.size() || s_[pos_] != '.') fail_line(line_no_, "missing terminating '.'");
        ++pos_;
        skip_space();
        if (pos_ < s_.size() && s_[pos_] != '#') fail_line(line_no_, "trailing content after '.'");
    }

private:
    void skip_space() {
        while (pos_ < s_.size() && detail::is_space(s_[pos_])) ++pos_;
    }

    std::string_view s_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
};

TypeOntology read_ntriples(std::istream& in) {
    std::vector<SubclassEdge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = detail::trim(line);
        if (body.empty() || body.front() == '#') continue;
        TripleLexer lex(body, line_no);
        const Term subject = lex.term();
        const Term predicate = lex.term();
        const Term object = lex.term();
        lex.end_of_statement();
        if (subject.kind == Term::literal) fail_line(line_no, "literal in subject position");
        if (predicate.kind != Term::iri) fail_line(line_no, "predicate must be an IRI");
        const std::string_view p = predicate.text;
        if (!p.ends_with("subClassOf")) continue;
        if (subject.kind != Term::iri || object.kind != Term::iri) continue;
        edges.push_back({last_segment(subject.text), last_segment(object.text)});
    }
    return TypeOntology::from_edges(edges);
}

TypeOntology read_tsv(std::istream& in) {
    std::vector<SubclassEdge> edges;
    std::vector<std::string> roots;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty() || detail::trim(line).front() == '#') continue;
        std::vector<std::string_view> fields;
        std::string_view rest = line;
        for (;;) {
            const auto tab = rest.find('\t');
            fields.push_back(detail::trim(rest.substr(0, tab)));
            if (tab == std::string_view::npos) break;
            rest.remove_prefix(tab + 1);
        }
        if (fields.size() > 2) fail_line(line_no, "expected 'child<TAB>parent' or a single root");
        if (fields[0].empty()) fail_line(line_no, "empty type name");
        if (fields.size() == 1 || fields[1].empty()) {
            roots.emplace_back(fields[0]);
        } else {
            edges.push_back({std::string(fields[0]), std::string(fields[1])});
        }
    }
    return TypeOntology::from_edges(edges, roots);
}

}  // namespace

TypeOntology read_ontology(std::istream& in, OntologyFormat format) {
    return format == OntologyFormat::ntriples ? read_ntriples(in) : read_tsv(in);
}

TypeOntology load_ontology(const std::filesystem::path& path, OntologyFormat format) {
    std::ifstream in(path);
    if (!in) throw Error(Stage::ontology, "cannot open '" + path.string() + "'");
    return read_ontology(in, format);
}

std::string TypeTokenMapping::token_for(std::string_view id) const {
    std::string out;
    const auto slot = token_template.find("{}");
    if (slot == std::string::npos) return token_template + std::string(id);
    out.reserve(token_template.size() + id.size());
    out.append(token_template, 0, slot);
    out.append(id);
    out.append(token_template, slot + 2);
    return out;
}

std::optional<Embedding> type_vector(const TypeOntology& ontology, const EmbeddingModel& model,
                                     std::string_view id, const TypeTokenMapping& mapping) {
    const auto& node = ontology.node(ontology.index_of(id));
    if (auto direct = model.lookup(mapping.token_for(node.id))) return direct;
    const auto words = split_camel_case(node.id);
    if (words.empty()) return std::nullopt;
    return embed_phrase(model, words);
}

TypeVectorTable::TypeVectorTable(const TypeOntology& ontology, const EmbeddingModel& model,
                                 const TypeTokenMapping& mapping)
    : dimension_(model.dimension()) {
    by_index_.reserve(ontology.size());
    for (std::size_t i = 0; i < ontology.size(); ++i) {
        const auto& id = ontology.node(i).id;
        index_.emplace(id, i);
        by_index_.push_back(type_vector(ontology, model, id, mapping));
        if (by_index_.back()) {
            scorable_ids_.push_back(id);
            const auto& c = by_index_.back()->components;
            matrix_.insert(matrix_.end(), c.begin(), c.end());
        } else {
            unscorable_ids_.push_back(id);
        }
    }
}

const std::optional<Embedding>& TypeVectorTable::vector(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw Error(Stage::ontology, "unknown type '" + std::string(id) + "'");
    return by_index_[it->second];
}

}  // namespace tabtag
