#include "tabtag/embedding.hpp"

#include "tabtag/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_set>

namespace tabtag {

ModelFormat parse_model_format(std::string_view name) {
    if (name == "binary" || name == "bin" || name == "binary-word2vec") return ModelFormat::binary;
    if (name == "text" || name == "txt" || name == "text-word2vec") return ModelFormat::text;
    throw Error(Stage::config, "unknown model format '" + std::string(name) + "'");
}

std::string_view to_string(ModelFormat format) {
    return format == ModelFormat::binary ? "binary" : "text";
}

bool normalize(std::span<double> v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    const double norm = std::sqrt(sq);
    if (!(norm > 0.0) || !std::isfinite(norm)) return false;
    for (double& x : v) x /= norm;
    return true;
}

EmbeddingModel::EmbeddingModel(std::size_t dimension, std::vector<std::string> tokens,
                               std::vector<float> unit_vectors, ModelLoadReport report)
    : dimension_(dimension),
      tokens_(std::move(tokens)),
      vectors_(std::move(unit_vectors)),
      report_(report) {
    if (dimension_ == 0) throw Error(Stage::model, "dimension must be positive");
    if (vectors_.size() != tokens_.size() * dimension_)
        throw Error(Stage::model, "vector storage does not match token count x dimension");
    index_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], i);
}

std::optional<std::size_t> EmbeddingModel::find(std::string_view token) const {
    if (auto it = index_.find(token); it != index_.end()) return it->second;
    return std::nullopt;
}

std::optional<std::span<const float>> EmbeddingModel::raw(std::string_view token) const {
    auto idx = find(token);
    if (!idx) return std::nullopt;
    return std::span<const float>(vectors_.data() + *idx * dimension_, dimension_);
}

bool EmbeddingModel::contains(std::string_view token) const {
    return find(token).has_value() || find(detail::ascii_lower(token)).has_value();
}

std::optional<Embedding> EmbeddingModel::lookup(std::string_view token) const {
    auto idx = find(token);
    if (!idx) idx = find(detail::ascii_lower(token));
    if (!idx) return std::nullopt;
    Embedding e;
    const float* src = vectors_.data() + *idx * dimension_;
    e.components.assign(src, src + dimension_);
    // Float storage leaves the norm within ~1e-7 of one; widen and tighten.
    normalize(e.components);
    return e;
}

std::optional<Embedding> embed_phrase(const EmbeddingModel& model,
                                      std::span<const std::string> tokens) {
    if (tokens.empty()) throw Error(Stage::score, "embed_phrase called with no tokens");
    std::vector<Embedding> found;
    found.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (auto e = model.lookup(t)) found.push_back(std::move(*e));
    }
    if (found.empty()) return std::nullopt;
    if (found.size() == 1) return std::move(found.front());

    // Per-component sums over sorted values make the result independent of
    // token order down to the last bit.
    const std::size_t d = model.dimension();
    Embedding mean;
    mean.components.resize(d);
    std::vector<double> column(found.size());
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < found.size(); ++i) column[i] = found[i].components[j];
        std::sort(column.begin(), column.end());
        double sum = 0.0;
        for (double x : column) sum += x;
        mean.components[j] = sum / static_cast<double>(found.size());
    }
    if (!normalize(mean.components)) return std::nullopt;
    return mean;
}

double similarity(const Embedding& u, const Embedding& v) {
    if (u.dimension() != v.dimension())
        throw Error(Stage::score, "similarity between vectors of dimension " +
                                      std::to_string(u.dimension()) + " and " +
                                      std::to_string(v.dimension()));
    double dot = 0.0;
    for (std::size_t i = 0; i < u.components.size(); ++i) dot += u.components[i] * v.components[i];
    return dot;
}

namespace {

struct Header {
    std::size_t count = 0;
    std::size_t dimension = 0;
};

Header parse_header(const std::string& line) {
    std::istringstream ss(line);
    long long count = -1;
    long long dim = -1;
    std::string extra;
    if (!(ss >> count >> dim) || (ss >> extra) || count < 0 || dim <= 0)
        throw Error(Stage::model, "malformed header '" + line + "' (expected \"count dim\")");
    return {static_cast<std::size_t>(count), static_cast<std::size_t>(dim)};
}

// Collects records, applying the first-wins and zero-norm rules.
class ModelBuilder {
public:
    explicit ModelBuilder(Header header) : header_(header) {
        report_.declared_count = header.count;
        tokens_.reserve(header.count);
        vectors_.reserve(header.count * header.dimension);
        scratch_.resize(header.dimension);
    }

    std::span<double> scratch() { return scratch_; }

    void commit(std::string token) {
        if (seen_.contains(token)) {
            ++report_.duplicate_tokens;
            return;
        }
        bool finite = std::all_of(scratch_.begin(), scratch_.end(),
                                  [](double x) { return std::isfinite(x); });
        if (!finite || !normalize(scratch_)) {
            ++report_.zero_norm_tokens;
            return;
        }
        seen_.insert(token);
        tokens_.push_back(std::move(token));
        for (double x : scratch_) vectors_.push_back(static_cast<float>(x));
    }

    EmbeddingModel finish() && {
        return EmbeddingModel(header_.dimension, std::move(tokens_), std::move(vectors_), report_);
    }

private:
    Header header_;
    ModelLoadReport report_;
    std::vector<std::string> tokens_;
    std::vector<float> vectors_;
    std::vector<double> scratch_;
    std::unordered_set<std::string> seen_;
};

std::string read_header_line(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(Stage::model, "malformed header: file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

EmbeddingModel read_binary(std::istream& in) {
    const Header header = parse_header(read_header_line(in));
    ModelBuilder builder(header);
    std::vector<char> bytes(header.dimension * sizeof(float));
    auto out = builder.scratch();

    for (std::size_t record = 0; record < header.count; ++record) {
        int c = in.get();
        while (c == '\n' || c == '\r') c = in.get();
        std::string token;
        while (c != std::char_traits<char>::eof() && c != ' ') {
            token.push_back(static_cast<char>(c));
            c = in.get();
        }
        if (c == std::char_traits<char>::eof())
            throw Error(Stage::model, "truncated record " + std::to_string(record + 1) + " of " +
                                          std::to_string(header.count) + " (token)");
        in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (static_cast<std::size_t>(in.gcount()) != bytes.size())
            throw Error(Stage::model, "truncated record " + std::to_string(record + 1) + " of " +
                                          std::to_string(header.count) + " ('" + token + "')");
        for (std::size_t j = 0; j < header.dimension; ++j) {
            std::uint32_t bits;
            std::memcpy(&bits, bytes.data() + j * sizeof(float), sizeof bits);
            if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
            out[j] = static_cast<double>(std::bit_cast<float>(bits));
        }
        builder.commit(std::move(token));
    }
    return std::move(builder).finish();
}

EmbeddingModel read_text(std::istream& in) {
    const Header header = parse_header(read_header_line(in));
    ModelBuilder builder(header);
    auto out = builder.scratch();

    std::string line;
    std::size_t line_no = 1;
    std::size_t records = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = detail::split_whitespace(line);
        if (fields.empty()) continue;
        if (records == header.count)
            throw Error(Stage::model, "line " + std::to_string(line_no) +
                                          ": more records than the header declares (" +
                                          std::to_string(header.count) + ")");
        if (fields.size() - 1 != header.dimension)
            throw Error(Stage::model, "line " + std::to_string(line_no) + ": dimension mismatch (" +
                                          std::to_string(fields.size() - 1) + " components, header says " +
                                          std::to_string(header.dimension) + ")");
        for (std::size_t j = 0; j < header.dimension; ++j) {
            const auto f = fields[j + 1];
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
            if (ec != std::errc() || ptr != f.data() + f.size())
                throw Error(Stage::model, "line " + std::to_string(line_no) + ": bad number '" +
                                              std::string(f) + "'");
            out[j] = value;
        }
        builder.commit(std::string(fields[0]));
        ++records;
    }
    if (records < header.count)
        throw Error(Stage::model, "truncated file: header declares " + std::to_string(header.count) +
                                      " records, found " + std::to_string(records));
    return std::move(builder).finish();
}

}  // namespace

EmbeddingModel read_model(std::istream& in, ModelFormat format) {
    return format == ModelFormat::binary ? read_binary(in) : read_text(in);
}

EmbeddingModel load_model(const std::filesystem::path& path, ModelFormat format) {
    std::vector<char> buffer(1 << 20);
    std::ifstream in;
    in.rdbuf()->pubsetbuf(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    in.open(path, std::ios::binary);
    if (!in) throw Error(Stage::model, "cannot open '" + path.string() + "'");
    return read_model(in, format);
}

}  // namespace tabtag
