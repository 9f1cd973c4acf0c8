#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "osskg/corpus/record.hpp"
#include "osskg/util/error.hpp"
#include "osskg/util/time.hpp"

namespace osskg::reports {

enum class PublisherCategory { technical_community, commercial, news, individual, official, other };

std::string_view to_string(PublisherCategory c) noexcept;

/// Explicit tag to category. Case and separators are ignored
/// ("Technical Community", "technical-community"); "commercial org" and
/// "company" map to commercial. Anything unknown or empty is `other`.
PublisherCategory categorize_publisher(std::string_view tag);

enum class IoCKind { ip, url, powershell };

std::string_view to_string(IoCKind k) noexcept;

struct IoC {
  IoCKind kind = IoCKind::ip;
  std::string value;
  std::optional<std::string> domain;  // url only
  friend bool operator==(const IoC&, const IoC&) = default;
  friend auto operator<=>(const IoC&, const IoC&) = default;
};

struct PackageMention {
  std::optional<corpus::Ecosystem> ecosystem;
  std::string name;
  std::optional<std::string> version;
  friend bool operator==(const PackageMention&, const PackageMention&) = default;
};

struct SecurityReport {
  std::string report_id;
  std::string source_url;
  PublisherCategory publisher_category = PublisherCategory::other;
  std::optional<Timestamp> publish_date;
  std::string body_text;
  std::vector<PackageMention> mentioned_packages;  // first-seen order, unique
  std::vector<IoC> iocs;
  friend bool operator==(const SecurityReport&, const SecurityReport&) = default;
};

/// Minimum length of a corpus name for it to be picked up from body text.
inline constexpr std::size_t kMinBodyMentionLength = 4;

/// Names from `corpus_names` occurring in `text` as whole tokens (token
/// characters [A-Za-z0-9_-]); names shorter than kMinBodyMentionLength are
/// ignored. Sorted, unique.
std::vector<std::string> find_body_mentions(std::string_view text, const std::set<std::string>& corpus_names);

/// Parses one report object {id, url, category, date, packages[], text}.
/// `packages` entries may be names or {ecosystem, name, version} objects.
/// When `packages` is absent, mentions come from find_body_mentions.
/// IoCs are extracted from the text. Throws Error(parse) on bad shape.
SecurityReport parse_report(const nlohmann::json& j, const std::set<std::string>& corpus_names);

/// Every *.json file of `dir` in byte-wise name order. Malformed files and
/// repeated ids are skipped with a diagnostic. A missing directory is an
/// io error; an empty one yields an empty list.
std::vector<SecurityReport> load_reports(const std::filesystem::path& dir,
                                         const std::set<std::string>& corpus_names,
                                         Diagnostics* diagnostics = nullptr);

nlohmann::ordered_json report_to_json(const SecurityReport& r);

}  // namespace osskg::reports
