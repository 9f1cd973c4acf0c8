#pragma once

#include <cstddef>
#include <vector>

#include "osskg/corpus/record.hpp"
#include "osskg/edges/edge.hpp"
#include "osskg/reports/report.hpp"

namespace osskg::edges {

struct MentionResolution {
  std::size_t resolved = 0;
  std::size_t unresolved = 0;
};

/// Record ids a mention refers to: exact name match (restricted by ecosystem
/// and version when given), falling back to a case-insensitive name match.
std::vector<std::string> resolve_mention(const reports::PackageMention& mention,
                                         const std::vector<corpus::PackageRecord>& records);

/// Co-existing edges between every pair of records resolved from the
/// report's mentions.
std::vector<KGEdge> link_report_packages(const reports::SecurityReport& report,
                                         const std::vector<corpus::PackageRecord>& records,
                                         MentionResolution* stats = nullptr);

/// Union over reports; edges seen in several reports carry every report id.
std::vector<KGEdge> build_coexisting_edges(const std::vector<reports::SecurityReport>& reports,
                                           const std::vector<corpus::PackageRecord>& records,
                                           MentionResolution* stats = nullptr);

}  // namespace osskg::edges
