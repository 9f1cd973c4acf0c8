#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "osskg/corpus/record.hpp"

namespace osskg::corpus {

/// Loads a line-delimited catalog (one JSON object per line, snake_case keys
/// matching PackageRecord). Every row is validated; if any row fails, the
/// whole catalog is rejected with an Error listing "file:line: field: reason"
/// for each bad row. When `archive_root` is given, available rows must point
/// at a readable file beneath it.
SourceCatalog load_catalog(const std::filesystem::path& path,
                           const std::optional<std::filesystem::path>& archive_root = std::nullopt);

/// Writes records in the same format, one per line, fixed key order.
void write_catalog(const std::filesystem::path& path, const std::vector<PackageRecord>& records);

nlohmann::ordered_json record_to_json(const PackageRecord& r);

/// Throws Error(parse) naming the offending field.
PackageRecord record_from_json(const nlohmann::json& j);

}  // namespace osskg::corpus
