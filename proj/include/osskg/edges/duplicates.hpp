#pragma once

#include <vector>

#include "osskg/corpus/record.hpp"
#include "osskg/edges/edge.hpp"
#include "osskg/util/error.hpp"

namespace osskg::edges {

/// Duplicated edges between records of different sources that share
/// (ecosystem, name, version).
///
/// Hash rules inside one (ecosystem, name, version) group:
///  - both records hashed, digests equal   -> edge, basis name_version_hash
///  - both records hashed, digests differ  -> no edge, "hash-conflict" diagnostic
///  - at least one record unhashed         -> edge, basis name_version, but only
///    when the group holds at most one distinct digest; otherwise the unhashed
///    record is left unlinked with an "ambiguous-duplicate" diagnostic.
/// These rules keep every identity group down to a single digest.
std::vector<KGEdge> build_duplicated_edges(const std::vector<corpus::PackageRecord>& records,
                                           Diagnostics* diagnostics = nullptr);

}  // namespace osskg::edges
