#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tabtag {

/// Pipeline stage an error originated from. The CLI prints it so users can
/// tell a bad model file from a bad CSV at a glance.
enum class Stage { model, ontology, ingest, score, aggregate, harness, config };

constexpr std::string_view to_string(Stage stage) {
    switch (stage) {
        case Stage::model: return "model";
        case Stage::ontology: return "ontology";
        case Stage::ingest: return "ingest";
        case Stage::score: return "score";
        case Stage::aggregate: return "aggregate";
        case Stage::harness: return "harness";
        case Stage::config: return "config";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(Stage stage, const std::string& message)
        : std::runtime_error(std::string(to_string(stage)) + ": " + message), stage_(stage) {}

    Stage stage() const noexcept { return stage_; }

private:
    Stage stage_;
};

}  // namespace tabtag
