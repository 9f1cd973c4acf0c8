#include "osskg/corpus/record.hpp"

#include <algorithm>
#include <cctype>

namespace osskg::corpus {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

Ecosystem Ecosystem::parse(std::string_view text) {
  const std::string l = lower(text);
  if (l == "npm") return npm();
  if (l == "pypi") return pypi();
  if (l == "rubygems" || l == "gem" || l == "gems" || l == "ruby") return rubygems();
  return other(std::string(text));
}

std::string Ecosystem::name() const {
  switch (kind_) {
    case Kind::npm: return "npm";
    case Kind::pypi: return "pypi";
    case Kind::rubygems: return "rubygems";
    case Kind::other: return label_;
  }
  return label_;
}

std::string_view to_string(SourceCategory c) noexcept {
  return c == SourceCategory::academia ? "academia" : "industry";
}

std::string_view to_string(Availability a) noexcept {
  return a == Availability::available ? "available" : "unavailable";
}

std::optional<SourceCategory> parse_source_category(std::string_view text) {
  const std::string l = lower(text);
  if (l == "academia") return SourceCategory::academia;
  if (l == "industry") return SourceCategory::industry;
  return std::nullopt;
}

std::optional<Availability> parse_availability(std::string_view text) {
  const std::string l = lower(text);
  if (l == "available") return Availability::available;
  if (l == "unavailable") return Availability::unavailable;
  return std::nullopt;
}

bool is_sha256_hex(std::string_view s) noexcept {
  return s.size() == 64 && std::all_of(s.begin(), s.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

std::optional<std::string> first_invalid_field(const PackageRecord& r) {
  if (r.record_id.empty()) return "record_id";
  if (r.name.empty()) return "name";
  if (r.version.empty()) return "version";
  if (r.source_id.empty()) return "source_id";
  if (r.ecosystem.name().empty()) return "ecosystem";
  if (r.sha256 && !is_sha256_hex(*r.sha256)) return "sha256";
  if (r.available() != r.archive_path.has_value()) return "archive_path";
  if (r.archive_path && r.archive_path->empty()) return "archive_path";
  if (r.release_time && r.removal_time && *r.release_time > *r.removal_time) return "removal_time";
  return std::nullopt;
}

}  // namespace osskg::corpus
