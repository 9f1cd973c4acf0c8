"""Python access to the osskg C++ core."""

from ._osskg import (  # noqa: F401
    KnowledgeGraph,
    OsskgError,
    __version__,
    classify_change_ops,
    cluster_similar,
    extract_iocs,
    is_ipv4,
    load_catalog,
    package_sha256,
    registrable_domain,
    run_cli,
    scan_code_dependencies,
    sha256_hex,
    tokenize,
)
