#include <algorithm>
#include <unordered_map>

#include "osskg/analytics/analytics.hpp"

namespace osskg::analytics {
namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

// Length of the shortest edit script (insertions + deletions), Myers 1986.
std::size_t edit_distance(const std::vector<int>& a, const std::vector<int>& b) {
  const long n = static_cast<long>(a.size());
  const long m = static_cast<long>(b.size());
  const long max = n + m;
  if (max == 0) return 0;
  std::vector<long> v(2 * max + 2, 0);
  const long off = max + 1;
  for (long d = 0; d <= max; ++d) {
    for (long k = -d; k <= d; k += 2) {
      long x = (k == -d || (k != d && v[off + k - 1] < v[off + k + 1])) ? v[off + k + 1] : v[off + k - 1] + 1;
      long y = x - k;
      while (x < n && y < m && a[x] == b[y]) {
        ++x;
        ++y;
      }
      v[off + k] = x;
      if (x >= n && y >= m) return static_cast<std::size_t>(d);
    }
  }
  return static_cast<std::size_t>(max);
}

std::set<corpus::Dependency> dep_set(const corpus::PackageRecord& r) {
  return {r.declared_deps.begin(), r.declared_deps.end()};
}

}  // namespace

std::string_view to_string(ChangeOp op) noexcept {
  switch (op) {
    case ChangeOp::CN: return "CN";
    case ChangeOp::CV: return "CV";
    case ChangeOp::CD: return "CD";
    case ChangeOp::CDep: return "CDep";
    case ChangeOp::CC: return "CC";
  }
  return "CN";
}

std::pair<std::size_t, std::size_t> line_diff_counts(std::string_view a, std::string_view b) {
  std::unordered_map<std::string_view, int> ids;
  auto encode = [&](std::string_view text) {
    std::vector<int> out;
    for (auto line : split_lines(text)) out.push_back(ids.emplace(line, static_cast<int>(ids.size())).first->second);
    return out;
  };
  const auto x = encode(a);
  const auto y = encode(b);
  const std::size_t d = edit_distance(x, y);
  const std::size_t common = (x.size() + y.size() - d) / 2;
  return {x.size() - common, y.size() - common};
}

ChangeOps classify_change_ops(const corpus::PackageRecord& a, const corpus::PackageRecord& b,
                              const corpus::CodeDocument* doc_a, const corpus::CodeDocument* doc_b) {
  ChangeOps out;
  if (a.name != b.name) {
    out.ops.insert(ChangeOp::CN);
  } else if (a.version != b.version) {
    out.ops.insert(ChangeOp::CV);
  }
  if (a.description.value_or("") != b.description.value_or("")) out.ops.insert(ChangeOp::CD);
  if (dep_set(a) != dep_set(b)) out.ops.insert(ChangeOp::CDep);
  if (!doc_a || !doc_b) {
    out.code_undetermined = true;
  } else if (doc_a->merged_text != doc_b->merged_text) {
    out.ops.insert(ChangeOp::CC);
    const auto [deleted, inserted] = line_diff_counts(doc_a->merged_text, doc_b->merged_text);
    out.changed_lines = std::max(deleted, inserted);
  }
  return out;
}

OpDistribution op_distribution(const KnowledgeGraph& graph, graph::EdgeKind kind,
                               const std::map<std::string, corpus::CodeDocument>& documents) {
  OpDistribution d;
  d.kind = kind;
  std::map<ChangeOp, std::size_t> comp_hits, pair_hits;
  std::size_t cc_lines = 0;
  for (const auto& c : graph.connected_components(kind)) {
    std::vector<const corpus::PackageRecord*> timed;
    for (const auto& id : c.members) {
      const auto& r = graph.node(id);
      if (r.release_time) timed.push_back(&r);
    }
    if (timed.size() < 2) {
      ++d.excluded_components;
      continue;
    }
    std::sort(timed.begin(), timed.end(), [](const auto* x, const auto* y) {
      return std::tie(*x->release_time, x->name, x->record_id) < std::tie(*y->release_time, y->name, y->record_id);
    });
    auto doc = [&](const corpus::PackageRecord* r) -> const corpus::CodeDocument* {
      auto it = documents.find(r->record_id);
      return it == documents.end() ? nullptr : &it->second;
    };
    std::set<ChangeOp> seen;
    for (std::size_t i = 0; i + 1 < timed.size(); ++i) {
      const auto ops = classify_change_ops(*timed[i], *timed[i + 1], doc(timed[i]), doc(timed[i + 1]));
      ++d.pairs;
      if (ops.code_undetermined) ++d.cc_undetermined_pairs;
      if (ops.has(ChangeOp::CC)) cc_lines += ops.changed_lines;
      for (auto op : ops.ops) {
        ++pair_hits[op];
        seen.insert(op);
      }
    }
    ++d.components;
    for (auto op : seen) ++comp_hits[op];
  }
  for (auto op : kAllChangeOps) {
    OpShare s;
    s.op = op;
    s.components = comp_hits[op];
    s.pairs = pair_hits[op];
    s.component_pct = d.components ? 100.0 * static_cast<double>(s.components) / static_cast<double>(d.components) : 0.0;
    s.pair_pct = d.pairs ? 100.0 * static_cast<double>(s.pairs) / static_cast<double>(d.pairs) : 0.0;
    d.shares.push_back(s);
  }
  const std::size_t cc_pairs = pair_hits[ChangeOp::CC];
  d.mean_changed_lines = cc_pairs ? static_cast<double>(cc_lines) / static_cast<double>(cc_pairs) : 0.0;
  return d;
}

Table to_table(const OpDistribution& d) {
  Table t{{"op", "components_with_op", "components", "component_pct", "pairs_with_op", "pairs", "pair_pct",
           "excluded_components", "cc_undetermined_pairs", "mean_changed_lines"},
          {}};
  for (const auto& s : d.shares) {
    t.rows.push_back({std::string(to_string(s.op)), std::to_string(s.components), std::to_string(d.components),
                      fixed(s.component_pct, 2), std::to_string(s.pairs), std::to_string(d.pairs), fixed(s.pair_pct, 2),
                      std::to_string(d.excluded_components), std::to_string(d.cc_undetermined_pairs),
                      fixed(d.mean_changed_lines, 2)});
  }
  return t;
}

std::optional<long long> active_period(const Subgraph& subgraph) {
  if (!subgraph.t_first || !subgraph.t_last) return std::nullopt;
  return floor_days(*subgraph.t_first, *subgraph.t_last);
}

ActivePeriodCdf active_period_cdf(const KnowledgeGraph& graph, graph::EdgeKind kind) {
  ActivePeriodCdf out;
  out.kind = kind;
  for (const auto& c : graph.connected_components(kind)) {
    if (auto p = active_period(c)) {
      out.periods.push_back(*p);
    } else {
      ++out.excluded;
    }
  }
  std::sort(out.periods.begin(), out.periods.end());
  long double sum = 0;
  for (auto p : out.periods) sum += p;
  const auto n = out.periods.size();
  out.mean_days = n ? static_cast<double>(sum / n) : 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && out.periods[j] == out.periods[i]) ++j;
    out.steps.emplace_back(out.periods[i], j - i, static_cast<double>(j) / static_cast<double>(n));
    i = j;
  }
  return out;
}

Table to_table(const ActivePeriodCdf& c) {
  Table t{{"period_days", "count", "cdf", "mean_days", "excluded"}, {}};
  for (const auto& [p, count, cdf] : c.steps) {
    t.rows.push_back({std::to_string(p), std::to_string(count), fixed(cdf, 4), fixed(c.mean_days, 2),
                      std::to_string(c.excluded)});
  }
  return t;
}

}  // namespace osskg::analytics
