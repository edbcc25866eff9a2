#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tabtag {

/// A dense vector in the model's space. Vectors handed out by the model and by
/// embed_phrase() are unit length.
struct Embedding {
    std::vector<double> components;

    std::size_t dimension() const noexcept { return components.size(); }
    bool operator==(const Embedding&) const = default;
};

enum class ModelFormat { binary, text };

ModelFormat parse_model_format(std::string_view name);
std::string_view to_string(ModelFormat format);

struct ModelLoadReport {
    std::size_t declared_count = 0;
    std::size_t duplicate_tokens = 0;
    std::size_t zero_norm_tokens = 0;
};

/// Immutable token -> unit vector map.
///
/// Vectors are stored as 32-bit floats (normalized at load) to keep
/// multi-gigabyte models at their on-disk footprint; lookups widen to double
/// and renormalize so downstream dot products are exact to double precision.
/// The full model is held in memory: roughly count * (dim * 4 + token bytes).
class EmbeddingModel {
public:
    EmbeddingModel(std::size_t dimension, std::vector<std::string> tokens,
                   std::vector<float> unit_vectors, ModelLoadReport report = {});

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return tokens_.size(); }
    const ModelLoadReport& report() const noexcept { return report_; }
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }

    /// Exact match first, then the ASCII-lowercased query.
    std::optional<Embedding> lookup(std::string_view token) const;
    bool contains(std::string_view token) const;

    /// Stored (float) components of an exact-match token, without fallback.
    std::optional<std::span<const float>> raw(std::string_view token) const;

private:
    std::optional<std::size_t> find(std::string_view token) const;

    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };

    std::size_t dimension_;
    std::vector<std::string> tokens_;
    std::vector<float> vectors_;
    std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
    ModelLoadReport report_;
};

EmbeddingModel load_model(const std::filesystem::path& path, ModelFormat format);
EmbeddingModel read_model(std::istream& in, ModelFormat format);

/// Mean of the in-vocabulary token vectors, renormalized. Absent when no token
/// is known or the mean vanishes. Throws on an empty token list.
std::optional<Embedding> embed_phrase(const EmbeddingModel& model,
                                      std::span<const std::string> tokens);

/// Dot product of two unit vectors.
double similarity(const Embedding& u, const Embedding& v);

/// Scales v to unit length in place; returns false (leaving v untouched) when
/// the norm is zero or not finite.
bool normalize(std::span<double> v);

}  // namespace tabtag
