#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ndpolar/model.hpp"

namespace ndpolar {

inline constexpr std::string_view kDocumentFormat = "ndpolar/1";

/// Builds a validated model from a ModelDocument. Labels are accepted wherever an
/// index is. Errors carry E_SCHEMA, E_UNKNOWN_* , E_PARSE, E_CONFLICT or E_NON_TOTAL.
RiskModel model_from_json(const nlohmann::json& doc, std::uint64_t enumeration_cap = kDefaultEnumerationCap);

RiskModel load_model_text(std::string_view text, std::uint64_t enumeration_cap = kDefaultEnumerationCap);

/// Throws E_IO when the file cannot be read.
RiskModel load_model(const std::filesystem::path& path, std::uint64_t enumeration_cap = kDefaultEnumerationCap);

/// Canonical document: sorted keys, indices instead of labels, rules as DSL text.
nlohmann::json model_to_json(const RiskModel& model);

std::string save_model_text(const RiskModel& model);

/// Same grades on every state plus equal metadata.
bool semantically_equal(const RiskModel& a, const RiskModel& b);

}  // namespace ndpolar
