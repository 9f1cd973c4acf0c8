import hashlib
import itertools
import json
import os
from collections import defaultdict
from pathlib import Path

import pytest

import osskg

SOURCE_DIR = Path(os.environ.get("OSSKG_SOURCE_DIR", Path(__file__).resolve().parents[2]))
DEMO = SOURCE_DIR / "demo"


def test_sha256_matches_hashlib():
    assert osskg.sha256_hex(b"abc") == hashlib.sha256(b"abc").hexdigest()


def test_package_digest_is_order_independent():
    files = [("b.py", b"y=2\n"), ("a.py", b"x=1\n")]
    assert osskg.package_sha256(files) == osskg.package_sha256(list(reversed(files)))
    assert osskg.package_sha256(files) != osskg.package_sha256([("a.py", b"x=1\n")])


def test_tokenize_is_deterministic():
    text = "const x = require('os'); // note\nx.hostname();"
    assert osskg.tokenize(text) == osskg.tokenize(text)
    assert "require" in osskg.tokenize(text)


def test_iocs():
    found = osskg.extract_iocs("see 8.8.8.8 and 999.1.1.1 at https://a.b.example.co.uk/p, 8.8.8.8 again")
    values = {(i["kind"], i["value"]) for i in found}
    assert ("ip", "8.8.8.8") in values
    assert not any(v == "999.1.1.1" for _, v in values)
    urls = [i for i in found if i["kind"] == "url"]
    assert urls and urls[0]["domain"] == "example.co.uk"
    assert len([v for k, v in values if v == "8.8.8.8"]) == 1


def test_cluster_two_groups():
    base_a = [1.0, 0.0, 0.0, 0.1]
    base_b = [0.0, 1.0, 0.1, 0.0]
    vecs = [base_a, [1.0, 0.02, 0.0, 0.1], base_b, [0.0, 1.0, 0.12, 0.0]]
    clusters = osskg.cluster_similar(vecs, ["a1", "a2", "b1", "b2"])
    assert sorted(sorted(c["members"]) for c in clusters) == [["a1", "a2"], ["b1", "b2"]]
    assert all(c["silhouette"] >= 0.3 and c["mean_intra_cosine"] >= 0.7 for c in clusters)


def test_dependency_scan_ignores_comments():
    files = [("index.js", "const x = require('evil-pkg');\n// require('other-pkg')\n")]
    hits = osskg.scan_code_dependencies(files, ["evil-pkg", "other-pkg", "evil"])
    assert [h[0] for h in hits] == ["evil-pkg"]


def test_change_ops():
    a = {"record_id": "a", "ecosystem": "npm", "name": "x", "version": "1.0.0", "source_id": "s",
         "source_category": "academia", "availability": "unavailable"}
    b = dict(a, record_id="b", version="1.0.1")
    assert osskg.classify_change_ops(a, b) == ["CV"]


def test_bad_kind_raises():
    with pytest.raises(osskg.OsskgError):
        osskg.KnowledgeGraph().edge_count("nope")


def _demo_records():
    rows = []
    for path in sorted((DEMO / "catalogs").glob("*.jsonl")):
        rows += [json.loads(line) for line in path.read_text().splitlines() if line.strip()]
    return rows


def test_overlap_and_missing_against_python_oracle():
    rows = _demo_records()
    g = osskg.KnowledgeGraph()
    for path in sorted((DEMO / "catalogs").glob("*.jsonl")):
        for rec in osskg.load_catalog(str(path)):
            g.add_record(rec)
    g.add_duplicated_edges()

    groups = defaultdict(set)
    for r in rows:
        groups[(r["ecosystem"], r["name"], r["version"])].add(r["source_id"])
    sources = sorted({r["source_id"] for r in rows})
    table = g.analyze("overlap")
    assert table["header"] == ["source", "size"] + sources
    for row in table["rows"]:
        s = row[0]
        for t, cell in zip(sources, row[2:]):
            if s == t:
                assert cell == ""
            else:
                assert int(cell) == sum(1 for srcs in groups.values() if s in srcs and t in srcs)

    available = defaultdict(bool)
    for r in rows:
        available[(r["ecosystem"], r["name"], r["version"])] |= r["availability"] == "available"
    missing = g.analyze("missing")
    by_source = {row[0]: row for row in missing["rows"]}
    for s in sources:
        mine = [r for r in rows if r["source_id"] == s]
        miss = [r for r in mine if r["availability"] == "unavailable"]
        unsup = [r for r in miss if not available[(r["ecosystem"], r["name"], r["version"])]]
        assert by_source[s][4] == f"{100 * len(miss) / len(mine):.2f}"
        assert by_source[s][5] == f"{100 * len(unsup) / len(mine):.2f}"

    group_sizes = defaultdict(int)
    for r in rows:
        group_sizes[(r["ecosystem"], r["name"], r["version"])] += 1
    assert sorted(len(c) for c in g.components("duplicated")) == sorted(n for n in group_sizes.values() if n > 1)
    assert g.edge_count("duplicated") == sum(
        len(list(itertools.combinations(
            [r for r in rows if (r["ecosystem"], r["name"], r["version"]) == k], 2)))
        for k in groups)


def test_cli_stage_order(tmp_path):
    rc, _, err = osskg.run_cli(["analyze", "missing", "--workspace", str(tmp_path / "ws")])
    assert rc != 0
    assert err.startswith("error: stage-order:")


def test_cli_pipeline(tmp_path):
    ws = str(tmp_path / "ws")
    args = ["ingest", "--out", ws, "--archives", str(DEMO / "archives"), "--reports", str(DEMO / "reports")]
    for path in sorted((DEMO / "catalogs").glob("*.jsonl")):
        args += ["--catalog", str(path)]
    assert osskg.run_cli(args)[0] == 0
    assert osskg.run_cli(["graph", "build", "--workspace", ws])[0] == 0
    rc, out, _ = osskg.run_cli(["analyze", "overlap", "--workspace", ws])
    assert rc == 0 and "acad-a" in out
    g = osskg.KnowledgeGraph.load(str(tmp_path / "ws" / "graph" / "graph.osskg"))
    assert g.node_count() == len(_demo_records())
    assert osskg.KnowledgeGraph.parse(g.serialize()) == g
