#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "osskg/corpus/record.hpp"
#include "osskg/util/error.hpp"

namespace osskg::corpus {

/// Declared dependencies of an unpacked package, best effort per ecosystem:
///   npm       `dependencies` of the shallowest package.json
///   pypi      requirements.txt lines, plus install_requires from setup.py /
///             setup.cfg and Requires-Dist from PKG-INFO / METADATA
///   rubygems  runtime dependencies of the shallowest *.gemspec and of the
///             gem metadata document
/// A missing manifest gives an empty list. A malformed one adds a warning to
/// `diagnostics` (when given) and contributes nothing. Duplicates are dropped,
/// first occurrence wins.
std::vector<Dependency> parse_manifest(const std::filesystem::path& tree, const Ecosystem& ecosystem,
                                       Diagnostics* diagnostics = nullptr);

// Format-level parsers, exposed for tests.
std::vector<Dependency> parse_package_json(std::string_view text);  // throws Error(parse)
std::vector<Dependency> parse_requirements_txt(std::string_view text);
std::vector<Dependency> parse_setup_py(std::string_view text);
std::vector<Dependency> parse_setup_cfg(std::string_view text);
std::vector<Dependency> parse_pkg_info(std::string_view text);
std::vector<Dependency> parse_gemspec(std::string_view text);
std::vector<Dependency> parse_gem_metadata(std::string_view text);

/// One PEP 508-ish requirement: "name[extras] constraint ; marker".
std::optional<Dependency> parse_requirement(std::string_view line);

}  // namespace osskg::corpus
