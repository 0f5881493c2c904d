#pragma once

// Model document format: one JSON object with the collections "services",
// "recipes", "equipment", "processes", "hazard_taxonomy", "zones" and an
// optional "notes" list. parse_model builds and validates a repository;
// render_model writes the canonical form (sorted keys, collections sorted by
// id) such that parse_model(render_model(r)) reproduces r exactly.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fabsafe/model.hpp"

namespace fabsafe {

enum class ParseMode { strict, lenient };  // unknown keys: reject vs. warn

// Raised for malformed documents: JSON syntax errors (position-annotated),
// wrong value types, unknown enum tokens, unknown keys in strict mode.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LoadResult {
    // Present only when validation produced no violations.
    std::optional<ModelRepository> repository;
    std::vector<Violation> violations;
    std::vector<std::string> warnings;

    bool ok() const { return repository.has_value(); }
};

LoadResult parse_model(const std::string& document, ParseMode mode = ParseMode::lenient);
LoadResult parse_model_file(const std::filesystem::path& path, ParseMode mode = ParseMode::lenient);

// Canonical document text; byte-identical for equal repositories.
std::string render_model(const ModelRepository& repository);

// sha256 hex of the canonical document; binds reports to the exact model.
std::string model_digest(const ModelRepository& repository);

}  // namespace fabsafe
