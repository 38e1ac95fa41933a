"""File formats: graph text, weighting JSON, partitions, targets,
marginal tables, and machine-readable run reports.

Exact values always serialize as decimal-free ``"p/q"`` strings; Monte
Carlo estimates serialize as floats and only inside payloads flagged
``"approximate": true``.  That keeps the exact/approximate distinction
unforgeable in artifacts.
"""

from __future__ import annotations

import hashlib
import json
import time
from importlib import resources

from .graph import CliqueWeighting, Edge, Graph
from .rational import format_rational, parse_rational

SCHEMA_VERSION = "1"


class FormatError(ValueError):
    """Malformed input file; carries a line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


# -- graph text format ---------------------------------------------------


def parse_graph_text(text: str) -> Graph:
    """Parse the plain text graph format: first line ``n m``, then
    ``m`` lines ``u v`` with ``0 <= u < v < n``."""
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty graph file")
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError("expected header 'n m'", line=1)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise FormatError("expected integer header 'n m'", line=1) from None
    edges = []
    edge_lines = [
        (i + 1, ln) for i, ln in enumerate(lines) if i > 0 and ln.strip()
    ]
    if len(edge_lines) != m:
        raise FormatError(
            f"header promises {m} edges but file has {len(edge_lines)} edge lines"
        )
    seen = set()
    for lineno, ln in edge_lines:
        parts = ln.split()
        if len(parts) != 2:
            raise FormatError(f"expected 'u v', got {ln!r}", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"non-integer endpoint in {ln!r}", line=lineno) from None
        if u == v:
            raise FormatError(f"self-loop {u} {v}", line=lineno)
        if not u < v:
            raise FormatError(f"endpoints must satisfy u < v, got {u} {v}", line=lineno)
        if not (0 <= u and v < n):
            raise FormatError(f"endpoint out of range in {u} {v}", line=lineno)
        if (u, v) in seen:
            raise FormatError(f"duplicate edge {u} {v}", line=lineno)
        seen.add((u, v))
        edges.append((u, v))
    return Graph(n, edges)


def read_graph(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph_text(fh.read())


def graph_to_text(g: Graph) -> str:
    lines = [f"{g.n} {len(g.edges)}"]
    lines += [f"{u} {v}" for u, v in g.edge_list()]
    return "\n".join(lines) + "\n"


def write_graph(path, g: Graph) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(graph_to_text(g))


# -- weighting JSON -------------------------------------------------------


def weighting_to_json(w: CliqueWeighting) -> dict:
    entries = [
        {"vertices": list(clique), "weight": format_rational(value)}
        for clique, value in sorted(w.weights.items())
    ]
    return {"r": w.r, "entries": entries}


def weighting_from_json(payload) -> CliqueWeighting:
    if not isinstance(payload, dict) or "r" not in payload or "entries" not in payload:
        raise FormatError("weighting JSON must carry 'r' and 'entries'")
    weights = {}
    for entry in payload["entries"]:
        vertices = tuple(entry["vertices"])
        if list(vertices) != sorted(vertices):
            raise FormatError(f"vertices {vertices} are not ascending")
        weights[vertices] = parse_rational(entry["weight"])
    return CliqueWeighting(int(payload["r"]), weights)


def read_weighting(path) -> CliqueWeighting:
    with open(path, "r", encoding="utf-8") as fh:
        return weighting_from_json(json.load(fh))


def write_weighting(path, w: CliqueWeighting) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(weighting_to_json(w), fh, indent=1)
        fh.write("\n")


# -- matchings, partitions, edge targets ----------------------------------


def parse_matching_spec(spec: str) -> list[Edge]:
    """Parse ``"u1-v1,u2-v2,..."`` (empty string: empty matching)."""
    spec = spec.strip()
    if not spec:
        return []
    edges = []
    for token in spec.split(","):
        parts = token.strip().split("-")
        if len(parts) != 2:
            raise FormatError(f"expected 'u-v', got {token!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"non-integer endpoint in {token!r}") from None
        edges.append((u, v))
    return edges


def parse_partition_text(text: str) -> list[list[Edge]]:
    """One matching per line, ``"u-v,u-v,..."``."""
    parts = []
    for lineno, ln in enumerate(text.splitlines(), start=1):
        if not ln.strip():
            continue
        try:
            parts.append(parse_matching_spec(ln))
        except FormatError as exc:
            raise FormatError(str(exc), line=lineno) from None
    if not parts:
        raise FormatError("partition file has no matchings")
    return parts


def read_partition(path) -> list[list[Edge]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_partition_text(fh.read())


def parse_targets_text(text: str) -> dict[Edge, object]:
    """Edge target lines ``"u v p/q"``."""
    targets = {}
    for lineno, ln in enumerate(text.splitlines(), start=1):
        if not ln.strip():
            continue
        parts = ln.split()
        if len(parts) != 3:
            raise FormatError(f"expected 'u v p/q', got {ln!r}", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
            value = parse_rational(parts[2])
        except ValueError as exc:
            raise FormatError(str(exc), line=lineno) from None
        if u == v:
            raise FormatError(f"self-loop {u} {v}", line=lineno)
        key = (u, v) if u < v else (v, u)
        if key in targets:
            raise FormatError(f"duplicate target for edge {u} {v}", line=lineno)
        targets[key] = value
    return targets


def read_targets(path) -> dict[Edge, object]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_targets_text(fh.read())


def marginals_to_csv(estimates) -> str:
    """``u,v,estimate,halfwidth`` rows for a marginal-estimate map."""
    lines = ["u,v,estimate,halfwidth"]
    for (u, v), (value, half) in sorted(estimates.items()):
        lines.append(f"{u},{v},{value!r},{half!r}")
    return "\n".join(lines) + "\n"


# -- run reports -----------------------------------------------------------


def load_report_schema() -> dict:
    with resources.files("fracdecomp").joinpath("report.schema.json").open(
        "r", encoding="utf-8"
    ) as fh:
        return json.load(fh)


def digest_inputs(parts: dict) -> str:
    blob = json.dumps(parts, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def make_report(
    subcommand: str,
    verdict: str,
    *,
    inputs: dict,
    residuals: list[str] | None = None,
    seed: int | None = None,
    started: float | None = None,
    artifact: dict | None = None,
    approximate: bool = False,
) -> dict:
    """Build a schema-v1 run report.

    ``verdict`` is one of pass/fail/infeasible/error; the residual
    summary must be empty exactly when the verdict is ``pass``.
    """
    from . import __version__

    report = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": subcommand,
        "inputs_digest": digest_inputs(inputs),
        "verdict": verdict,
        "residual_summary": residuals or [],
        "timing_seconds": round(time.perf_counter() - started, 6)
        if started is not None
        else None,
        "seed": seed,
        "version": __version__,
        "approximate": approximate,
    }
    if artifact is not None:
        report["artifact"] = artifact
    if (verdict == "pass") != (not report["residual_summary"]):
        raise AssertionError("residual summary must be empty exactly on pass")
    return report
