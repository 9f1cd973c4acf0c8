#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "osskg/util/time.hpp"

namespace osskg::corpus {

/// Package ecosystem. Anything outside the three first-class registries is
/// kept verbatim as an "other" label.
class Ecosystem {
 public:
  enum class Kind { npm, pypi, rubygems, other };

  Ecosystem() = default;
  static Ecosystem npm() { return Ecosystem(Kind::npm, {}); }
  static Ecosystem pypi() { return Ecosystem(Kind::pypi, {}); }
  static Ecosystem rubygems() { return Ecosystem(Kind::rubygems, {}); }
  static Ecosystem other(std::string label) { return Ecosystem(Kind::other, std::move(label)); }

  /// "npm", "pypi", "rubygems" (case-insensitive; "gem"/"ruby" accepted), else other(text).
  static Ecosystem parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  std::string name() const;

  friend bool operator==(const Ecosystem&, const Ecosystem&) = default;
  friend auto operator<=>(const Ecosystem& a, const Ecosystem& b) { return a.name() <=> b.name(); }

 private:
  Ecosystem(Kind kind, std::string label) : kind_(kind), label_(std::move(label)) {}
  Kind kind_ = Kind::npm;
  std::string label_;
};

enum class SourceCategory { academia, industry };
enum class Availability { available, unavailable };

std::string_view to_string(SourceCategory c) noexcept;
std::string_view to_string(Availability a) noexcept;
std::optional<SourceCategory> parse_source_category(std::string_view text);
std::optional<Availability> parse_availability(std::string_view text);

struct Dependency {
  std::string name;
  std::string constraint;

  friend bool operator==(const Dependency&, const Dependency&) = default;
  friend auto operator<=>(const Dependency&, const Dependency&) = default;
};

/// One package observation from one source catalog.
struct PackageRecord {
  std::string record_id;
  Ecosystem ecosystem;
  std::string name;
  std::string version;
  std::string source_id;
  SourceCategory source_category = SourceCategory::academia;
  Availability availability = Availability::unavailable;
  std::optional<std::string> archive_path;  // relative to the archive root
  std::optional<std::string> sha256;
  std::optional<Timestamp> release_time;
  std::optional<Timestamp> detection_time;
  std::optional<Timestamp> removal_time;
  std::optional<std::string> description;
  std::vector<Dependency> declared_deps;

  bool available() const noexcept { return availability == Availability::available; }

  friend bool operator==(const PackageRecord&, const PackageRecord&) = default;
};

struct SourceCatalog {
  std::string source_id;
  SourceCategory source_category = SourceCategory::academia;
  std::vector<PackageRecord> records;
};

bool is_sha256_hex(std::string_view s) noexcept;

/// Returns the name of the first violated field, or nullopt when the record
/// satisfies every invariant that does not need the filesystem.
std::optional<std::string> first_invalid_field(const PackageRecord& r);

}  // namespace osskg::corpus
