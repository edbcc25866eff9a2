#pragma once
// Synthetic models, forests and tables for the test suites.

#include "tabtag/tabtag.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>
#include <unistd.h>
#include <algorithm>

namespace fixtures {

struct SyntheticModel {
    std::size_t dimension = 0;
    std::vector<std::string> tokens;
    std::vector<std::vector<float>> vectors;  // raw, not normalized
};

inline SyntheticModel make_model(std::size_t count, std::size_t dimension, std::uint64_t seed,
                                 std::vector<std::string> names = {}) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    SyntheticModel m;
    m.dimension = dimension;
    for (std::size_t i = 0; i < count; ++i) {
        m.tokens.push_back(i < names.size() ? names[i] : "tok" + std::to_string(i));
        std::vector<float> v(dimension);
        for (auto& x : v) x = static_cast<float>(normal(rng) * 3.0);
        m.vectors.push_back(std::move(v));
    }
    return m;
}

inline std::string to_text(const SyntheticModel& m) {
    std::ostringstream out;
    out << m.tokens.size() << ' ' << m.dimension << '\n';
    char buf[64];
    for (std::size_t i = 0; i < m.tokens.size(); ++i) {
        out << m.tokens[i];
        for (float x : m.vectors[i]) {
            std::snprintf(buf, sizeof buf, " %.9g", static_cast<double>(x));
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

inline std::string to_binary(const SyntheticModel& m) {
    std::string out = std::to_string(m.tokens.size()) + " " + std::to_string(m.dimension) + "\n";
    for (std::size_t i = 0; i < m.tokens.size(); ++i) {
        out += m.tokens[i];
        out += ' ';
        for (float x : m.vectors[i]) {
            unsigned char b[4];
            std::uint32_t bits;
            std::memcpy(&bits, &x, 4);
            for (int k = 0; k < 4; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
            out.append(reinterpret_cast<const char*>(b), 4);
        }
        out += '\n';
    }
    return out;
}

inline tabtag::EmbeddingModel load_text(const std::string& text) {
    std::istringstream in(text);
    return tabtag::read_model(in, tabtag::ModelFormat::text);
}

inline tabtag::EmbeddingModel load_binary(const std::string& bytes) {
    std::istringstream in(bytes, std::ios::binary);
    return tabtag::read_model(in, tabtag::ModelFormat::binary);
}

/// The small model used throughout: a=(1,0,0), b=(0,2,0).
inline tabtag::EmbeddingModel axis_model() { return load_text("2 3\na 1 0 0\nb 0 2 0\n"); }

struct Forest {
    std::vector<std::string> ids;
    std::map<std::string, std::string> parent;  // child -> parent
    std::vector<tabtag::SubclassEdge> edges;
    std::vector<std::string> roots;
};

/// Random forest of n nodes. Node i attaches to a random earlier node or
/// starts a new tree. Ids are shuffled so parent ids are not always smaller.
inline Forest make_forest(std::size_t n, std::uint64_t seed, double root_chance = 0.15) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("T" + std::to_string(1000 + i));
    std::shuffle(names.begin(), names.end(), rng);
    Forest f;
    f.ids = names;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0 || u(rng) < root_chance) {
            f.roots.push_back(names[i]);
            continue;
        }
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        const auto& p = names[pick(rng)];
        f.parent[names[i]] = p;
        f.edges.push_back({names[i], p});
    }
    std::sort(f.ids.begin(), f.ids.end());
    return f;
}

inline std::string to_tsv(const Forest& f) {
    std::string out;
    for (const auto& r : f.roots) out += r + "\n";
    for (const auto& e : f.edges) out += e.child + "\t" + e.parent + "\n";
    return out;
}

inline tabtag::TypeOntology load_tsv(const std::string& tsv) {
    std::istringstream in(tsv);
    return tabtag::read_ontology(in, tabtag::OntologyFormat::tsv);
}

inline tabtag::TypeIds ids_ptr(std::vector<std::string> ids) {
    return std::make_shared<const std::vector<std::string>>(std::move(ids));
}

inline std::vector<double> random_scores(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

inline tabtag::ColumnScoreMatrix random_matrix(std::size_t rows, const tabtag::TypeIds& ids, std::mt19937_64& rng,
                                               std::string name = "col") {
    return tabtag::ColumnScoreMatrix(std::move(name), ids, rows, random_scores(rows * ids->size(), rng));
}

/// A scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("tabtag_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

    std::filesystem::path write(const std::string& name, const std::string& content) const {
        auto p = path_ / name;
        std::ofstream(p, std::ios::binary) << content;
        return p;
    }

private:
    std::filesystem::path path_;
};

/// Synthetic world for pipeline tests: a 100-token model whose first tokens
/// name the 15 types of a random forest, plus a 3 x 20 table drawn from the
/// vocabulary.
struct World {
    Forest forest;
    SyntheticModel raw;
    tabtag::EmbeddingModel model;
    tabtag::TypeOntology ontology;
    tabtag::TableText table;
};

inline World make_world(std::uint64_t seed, std::size_t n_types = 15, std::size_t vocab = 100,
                        std::size_t dim = 16, std::size_t columns = 3, std::size_t cells = 20) {
    auto forest = make_forest(n_types, seed);
    std::vector<std::string> names;
    for (const auto& id : forest.ids) names.push_back(id);
    // A couple of types stay out of the vocabulary (and have no camel-case
    // words in it) so the unscorable path is exercised.
    if (names.size() > 4) {
        names[1] = "unused_" + names[1];
        names[3] = "unused_" + names[3];
    }
    auto raw = make_model(vocab, dim, seed * 31 + 7, names);
    auto model = load_text(to_text(raw));
    auto ontology = load_tsv(to_tsv(forest));

    std::mt19937_64 rng(seed ^ 0xABCDEFu);
    std::uniform_int_distribution<std::size_t> tok(0, vocab - 1);
    std::uniform_int_distribution<std::size_t> len(1, 3);
    tabtag::TableText table;
    for (std::size_t c = 0; c < columns; ++c) {
        tabtag::Column col{"c" + std::to_string(c), tabtag::ColumnKind::data, {}};
        for (std::size_t r = 0; r < cells; ++r) {
            tabtag::Tokens cell;
            for (std::size_t i = len(rng); i > 0; --i) cell.push_back(raw.tokens[tok(rng)]);
            if (r % 7 == 3) cell = {"oov" + std::to_string(r)};
            col.cells.push_back(cell);
        }
        table.columns.push_back(std::move(col));
    }
    return World{std::move(forest), std::move(raw), std::move(model), std::move(ontology), std::move(table)};
}

}  // namespace fixtures
