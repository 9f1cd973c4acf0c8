#include "osskg/graph/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "osskg/corpus/catalog.hpp"
#include "osskg/util/error.hpp"

namespace osskg::graph {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using edges::CoexistingEvidence;
using edges::DependencyEvidence;
using edges::DependencyLocus;
using edges::DuplicatedEvidence;
using edges::DuplicateBasis;
using edges::Evidence;
using edges::SimilarEvidence;

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

ordered_json evidence_to_json(const Evidence& ev) {
  ordered_json j = ordered_json::object();
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, DuplicatedEvidence>) {
          j["basis"] = e.basis == DuplicateBasis::name_version_hash ? "name_version_hash" : "name_version";
        } else if constexpr (std::is_same_v<T, SimilarEvidence>) {
          j["cluster_id"] = e.cluster_id;
          j["cosine"] = e.cosine;
        } else if constexpr (std::is_same_v<T, DependencyEvidence>) {
          j["dep_name"] = e.dep_name;
          auto loci = ordered_json::array();
          for (const auto& l : e.loci) {
            ordered_json o;
            o["kind"] = l.kind == DependencyLocus::Kind::manifest ? "manifest" : "code";
            if (l.kind == DependencyLocus::Kind::code) {
              o["file"] = l.file;
              o["offset"] = l.offset;
            }
            loci.push_back(std::move(o));
          }
          j["loci"] = std::move(loci);
        } else {
          j["report_ids"] = e.report_ids;
          j["cross_ecosystem"] = e.cross_ecosystem;
        }
      },
      ev);
  return j;
}

Evidence evidence_from_json(EdgeKind kind, const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::parse, "evidence must be an object");
  switch (kind) {
    case EdgeKind::duplicated: {
      const auto basis = j.at("basis").get<std::string>();
      if (basis == "name_version_hash") return DuplicatedEvidence{DuplicateBasis::name_version_hash};
      if (basis == "name_version") return DuplicatedEvidence{DuplicateBasis::name_version};
      throw Error(ErrorKind::parse, "unknown duplicate basis '" + basis + "'");
    }
    case EdgeKind::similar:
      return SimilarEvidence{j.at("cluster_id").get<std::size_t>(), j.at("cosine").get<double>()};
    case EdgeKind::dependency: {
      DependencyEvidence ev;
      ev.dep_name = j.at("dep_name").get<std::string>();
      for (const auto& l : j.at("loci")) {
        const auto k = l.at("kind").get<std::string>();
        if (k == "manifest") {
          ev.loci.push_back({DependencyLocus::Kind::manifest, {}, 0});
        } else if (k == "code") {
          ev.loci.push_back({DependencyLocus::Kind::code, l.at("file").get<std::string>(),
                             l.at("offset").get<std::size_t>()});
        } else {
          throw Error(ErrorKind::parse, "unknown locus kind '" + k + "'");
        }
      }
      return ev;
    }
    case EdgeKind::coexisting:
      return CoexistingEvidence{j.at("report_ids").get<std::vector<std::string>>(),
                                j.at("cross_ecosystem").get<bool>()};
  }
  throw Error(ErrorKind::parse, "unknown edge kind");
}

}  // namespace

const std::string& KnowledgeGraph::add_node(const corpus::PackageRecord& record) {
  auto [it, inserted] = nodes_.try_emplace(record.record_id, record);
  if (!inserted && !(it->second == record)) {
    throw Error(ErrorKind::duplicate_id, "node '" + record.record_id + "' already present with other attributes");
  }
  return it->first;
}

void KnowledgeGraph::add_edge(const edges::KGEdge& edge) {
  if (edge.u == edge.v) throw Error(ErrorKind::validation, "self-loop on '" + edge.u + "'");
  for (const auto* id : {&edge.u, &edge.v}) {
    if (!nodes_.contains(*id)) throw Error(ErrorKind::dangling_endpoint, "edge endpoint '" + *id + "' is not a node");
  }
  auto canonical = edges::make_edge(edge.u, edge.v, edge.evidence);
  EdgeKey key{static_cast<int>(canonical.kind()), canonical.u, canonical.v};
  auto [it, inserted] = edges_.try_emplace(std::move(key), canonical.evidence);
  if (!inserted && !(it->second == canonical.evidence)) edges::merge_evidence(it->second, canonical.evidence);
}

const corpus::PackageRecord& KnowledgeGraph::node(const std::string& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorKind::dangling_endpoint, "unknown node '" + id + "'");
  return it->second;
}

std::vector<corpus::PackageRecord> KnowledgeGraph::records() const {
  std::vector<corpus::PackageRecord> out;
  out.reserve(nodes_.size());
  for (const auto& [_, r] : nodes_) out.push_back(r);
  return out;
}

std::size_t KnowledgeGraph::edge_count(EdgeKind kind) const {
  return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [&](const auto& e) {
    return std::get<0>(e.first) == static_cast<int>(kind);
  }));
}

std::vector<edges::KGEdge> KnowledgeGraph::edges() const {
  std::vector<edges::KGEdge> out;
  out.reserve(edges_.size());
  for (const auto& [key, ev] : edges_) out.push_back({std::get<1>(key), std::get<2>(key), ev});
  return out;
}

std::vector<edges::KGEdge> KnowledgeGraph::edges(EdgeKind kind) const {
  std::vector<edges::KGEdge> out;
  for (const auto& [key, ev] : edges_) {
    if (std::get<0>(key) == static_cast<int>(kind)) out.push_back({std::get<1>(key), std::get<2>(key), ev});
  }
  return out;
}

std::vector<Subgraph> KnowledgeGraph::connected_components(EdgeKind kind, bool include_isolated) const {
  std::map<std::string, std::size_t> index;
  std::vector<const std::string*> ids;
  for (const auto& [id, _] : nodes_) {
    index.emplace(id, ids.size());
    ids.push_back(&id);
  }
  UnionFind uf(ids.size());
  std::vector<bool> touched(ids.size(), false);
  for (const auto& [key, _] : edges_) {
    if (std::get<0>(key) != static_cast<int>(kind)) continue;
    const auto a = index.at(std::get<1>(key));
    const auto b = index.at(std::get<2>(key));
    touched[a] = touched[b] = true;
    uf.unite(a, b);
  }
  // Roots are the smallest index in each set, and ids are in sorted order,
  // so iterating by index yields components sorted by smallest member.
  std::map<std::size_t, Subgraph> groups;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!touched[i] && !include_isolated) continue;
    auto& g = groups[uf.find(i)];
    g.kind = kind;
    g.members.push_back(*ids[i]);
    if (const auto& t = nodes_.at(*ids[i]).release_time) {
      if (!g.t_first || *t < *g.t_first) g.t_first = t;
      if (!g.t_last || *t > *g.t_last) g.t_last = t;
    }
  }
  std::vector<Subgraph> out;
  out.reserve(groups.size());
  for (auto& [_, g] : groups) out.push_back(std::move(g));
  return out;
}

std::string serialize_graph(const KnowledgeGraph& graph) {
  std::ostringstream out;
  ordered_json header;
  header["format"] = kGraphFormat;
  header["version"] = kGraphVersion;
  out << header.dump() << '\n';
  for (const auto& [_, record] : graph.nodes()) {
    ordered_json line;
    line["t"] = "n";
    const auto fields = corpus::record_to_json(record);
    for (auto& [k, v] : fields.items()) line[k] = v;
    out << line.dump() << '\n';
  }
  for (const auto& e : graph.edges()) {
    ordered_json line;
    line["t"] = "e";
    line["k"] = std::string(edges::to_string(e.kind()));
    line["u"] = e.u;
    line["v"] = e.v;
    line["ev"] = evidence_to_json(e.evidence);
    out << line.dump() << '\n';
  }
  return out.str();
}

KnowledgeGraph parse_graph(std::string_view text) {
  KnowledgeGraph graph;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::parse, where + ": malformed JSON");
    }
    if (!header_seen) {
      if (!j.is_object() || !j.contains("format") || !j["format"].is_string()) {
        throw Error(ErrorKind::parse, where + ": missing osskg-graph header");
      }
      if (j["format"] != kGraphFormat) {
        throw Error(ErrorKind::version_mismatch, where + ": foreign format " + j["format"].dump());
      }
      if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != kGraphVersion) {
        throw Error(ErrorKind::version_mismatch,
                    where + ": graph version " + (j.contains("version") ? j["version"].dump() : "?") +
                        " (supported: " + std::to_string(kGraphVersion) + ")");
      }
      header_seen = true;
      continue;
    }
    try {
      if (!j.is_object() || !j.contains("t")) throw Error(ErrorKind::parse, "entry without 't'");
      const auto t = j["t"].get<std::string>();
      if (t == "n") {
        j.erase("t");
        graph.add_node(corpus::record_from_json(j));
      } else if (t == "e") {
        auto kind = edges::parse_edge_kind(j.at("k").get<std::string>());
        if (!kind) throw Error(ErrorKind::parse, "unknown edge kind");
        graph.add_edge({j.at("u").get<std::string>(), j.at("v").get<std::string>(),
                        evidence_from_json(*kind, j.at("ev"))});
      } else {
        throw Error(ErrorKind::parse, "unknown entry type '" + t + "'");
      }
    } catch (const Error& e) {
      throw Error(ErrorKind::parse, where + ": " + e.what());
    } catch (const json::exception& e) {
      throw Error(ErrorKind::parse, where + ": " + e.what());
    }
  }
  if (!header_seen) throw Error(ErrorKind::parse, "line 1: empty graph file");
  return graph;
}

void export_graph(const KnowledgeGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << serialize_graph(graph);
  if (!out) throw Error(ErrorKind::io, "write failed: " + path.string());
}

KnowledgeGraph import_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

}  // namespace osskg::graph
