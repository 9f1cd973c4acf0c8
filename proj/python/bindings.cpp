#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "osskg/analytics/analytics.hpp"
#include "osskg/cli/cli.hpp"
#include "osskg/corpus/catalog.hpp"
#include "osskg/corpus/source_tree.hpp"
#include "osskg/edges/dependencies.hpp"
#include "osskg/edges/duplicates.hpp"
#include "osskg/edges/ioc.hpp"
#include "osskg/edges/similar.hpp"
#include "osskg/fingerprint/hashing.hpp"
#include "osskg/fingerprint/tokenize.hpp"
#include "osskg/graph/graph.hpp"
#include "osskg/util/error.hpp"

namespace py = pybind11;
using namespace osskg;

namespace {

py::object json_to_py(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json py_to_json(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

edges::EdgeKind kind_arg(const std::string& text) {
  auto k = edges::parse_edge_kind(text);
  if (!k) throw Error(ErrorKind::bad_flag, "unknown edge kind '" + text + "'");
  return *k;
}

py::dict table_to_py(const analytics::Table& t) {
  py::dict d;
  d["header"] = t.header;
  d["rows"] = t.rows;
  return d;
}

py::list subgraphs_to_py(const std::vector<graph::Subgraph>& subs) {
  py::list out;
  for (const auto& s : subs) out.append(s.members);
  return out;
}

analytics::Table analysis(const graph::KnowledgeGraph& g, const std::string& name, const std::string& kind) {
  if (name == "overlap") return analytics::to_table(analytics::overlap_matrix(g));
  if (name == "missing") return analytics::to_table(analytics::missing_rates(g));
  if (name == "occurrences") return analytics::occurrence_table(analytics::occurrence_counts(g));
  if (name == "subgraphs") return analytics::subgraph_table(analytics::subgraph_stats(g, kind_arg(kind)));
  if (name == "active") return analytics::to_table(analytics::active_period_cdf(g, kind_arg(kind)));
  if (name == "dep-reuse") return analytics::reuse_table(analytics::dependency_reuse_counts(g));
  if (name == "timeline") return analytics::to_table(analytics::release_timeline(g.records()));
  throw Error(ErrorKind::bad_flag, "unknown analysis '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_osskg, m) {
  m.doc() = "Knowledge-graph toolkit for malicious open-source packages";
  m.attr("__version__") = OSSKG_VERSION;

  m.attr("OsskgError") = py::reinterpret_steal<py::object>(
      PyErr_NewException("osskg._osskg.OsskgError", PyExc_RuntimeError, nullptr));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg = std::string(to_string(e.kind())) + ": " + e.what();
      const auto type = py::module_::import("osskg._osskg").attr("OsskgError");
      PyErr_SetString(type.ptr(), msg.c_str());
    }
  });

  m.def("tokenize", [](const std::string& text) { return fingerprint::tokenize(text); });
  m.def("sha256_hex", [](const py::bytes& data) { return fingerprint::sha256_hex(std::string(data)); });
  m.def(
      "package_sha256",
      [](const std::vector<std::pair<std::string, py::bytes>>& files) {
        std::vector<std::pair<std::string, std::string>> raw;
        for (const auto& [path, data] : files) raw.emplace_back(path, std::string(data));
        return fingerprint::package_sha256(std::move(raw));
      },
      "Digest over (relative path, bytes) pairs in canonical order.");

  m.def("is_ipv4", [](const std::string& s) { return edges::is_ipv4(s); });
  m.def("registrable_domain", [](const std::string& host) { return edges::registrable_domain(host); });
  m.def("extract_iocs", [](const std::string& text) {
    py::list out;
    for (const auto& ioc : edges::extract_iocs(text)) {
      py::dict d;
      d["kind"] = std::string(reports::to_string(ioc.kind));
      d["value"] = ioc.value;
      d["domain"] = ioc.domain ? py::object(py::str(*ioc.domain)) : py::object(py::none());
      out.append(d);
    }
    return out;
  });

  m.def(
      "cluster_similar",
      [](const std::vector<std::vector<double>>& vectors, std::vector<std::string> ids, std::uint64_t seed) {
        if (ids.empty()) {
          for (std::size_t i = 0; i < vectors.size(); ++i) ids.push_back(std::to_string(i));
        }
        if (ids.size() != vectors.size()) throw Error(ErrorKind::validation, "ids and vectors differ in length");
        std::vector<fingerprint::PackageVector> pv;
        for (std::size_t i = 0; i < vectors.size(); ++i) {
          pv.push_back({ids[i], vectors[i].size(), vectors[i], 1});
        }
        edges::ClusterConfig cfg;
        cfg.seed = seed;
        py::list out;
        for (const auto& c : edges::cluster_similar(pv, cfg)) {
          py::dict d;
          d["members"] = c.members;
          d["silhouette"] = c.silhouette;
          d["mean_intra_cosine"] = c.mean_intra_cosine;
          out.append(d);
        }
        return out;
      },
      py::arg("vectors"), py::arg("ids") = std::vector<std::string>{}, py::arg("seed") = 42);

  m.def(
      "scan_code_dependencies",
      [](const std::vector<std::pair<std::string, std::string>>& files, const std::vector<std::string>& names) {
        const auto doc = corpus::build_code_document("scan", files);
        py::list out;
        for (const auto& h : edges::scan_code_dependencies(doc, std::set<std::string>(names.begin(), names.end()))) {
          out.append(py::make_tuple(h.dep_name, h.file, h.offset));
        }
        return out;
      },
      "Code-level dependency hits as (name, file, offset) over (path, text) files.");

  m.def("load_catalog", [](const std::string& path) {
    py::list out;
    for (const auto& r : corpus::load_catalog(path).records) out.append(json_to_py(corpus::record_to_json(r)));
    return out;
  });

  m.def(
      "classify_change_ops",
      [](const py::object& a, const py::object& b, std::optional<std::string> code_a, std::optional<std::string> code_b) {
        const auto ra = corpus::record_from_json(py_to_json(a));
        const auto rb = corpus::record_from_json(py_to_json(b));
        std::optional<corpus::CodeDocument> da, db;
        if (code_a) da = corpus::build_code_document(ra.record_id, {{"index.js", *code_a}});
        if (code_b) db = corpus::build_code_document(rb.record_id, {{"index.js", *code_b}});
        const auto ops = analytics::classify_change_ops(ra, rb, da ? &*da : nullptr, db ? &*db : nullptr);
        std::vector<std::string> names;
        for (auto op : analytics::kAllChangeOps) {
          if (ops.has(op)) names.emplace_back(analytics::to_string(op));
        }
        return names;
      },
      py::arg("a"), py::arg("b"), py::arg("code_a") = py::none(), py::arg("code_b") = py::none());

  py::class_<graph::KnowledgeGraph>(m, "KnowledgeGraph")
      .def(py::init<>())
      .def_static("load", [](const std::string& path) { return graph::import_graph(path); })
      .def_static("parse", [](const std::string& text) { return graph::parse_graph(text); })
      .def("add_record", [](graph::KnowledgeGraph& g, const py::object& r) {
        g.add_node(corpus::record_from_json(py_to_json(r)));
      })
      .def("add_duplicated_edges", [](graph::KnowledgeGraph& g) {
        for (const auto& e : edges::build_duplicated_edges(g.records(), nullptr)) g.add_edge(e);
      })
      .def("node_count", &graph::KnowledgeGraph::node_count)
      .def("edge_count", [](const graph::KnowledgeGraph& g, const std::string& kind) { return g.edge_count(kind_arg(kind)); })
      .def(
          "components",
          [](const graph::KnowledgeGraph& g, const std::string& kind, bool isolated) {
            return subgraphs_to_py(g.connected_components(kind_arg(kind), isolated));
          },
          py::arg("kind"), py::arg("include_isolated") = false)
      .def("serialize", [](const graph::KnowledgeGraph& g) { return graph::serialize_graph(g); })
      .def("analyze", [](const graph::KnowledgeGraph& g, const std::string& name, const std::string& kind) {
        return table_to_py(analysis(g, name, kind));
      }, py::arg("name"), py::arg("kind") = "similar")
      .def("__eq__", [](const graph::KnowledgeGraph& a, const graph::KnowledgeGraph& b) { return a == b; });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int rc;
    {
      py::gil_scoped_release release;
      rc = cli::run_cli(args, out, err);
    }
    return py::make_tuple(rc, out.str(), err.str());
  });
}
