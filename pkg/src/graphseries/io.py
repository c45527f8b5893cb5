"""Edge-list snapshots, series manifests, JSON reports and CSV plot data.

Snapshot files are whitespace-separated edge lists::

    # comment
    1 2
    2 3
    N 7        # isolated node

Duplicate and reversed lines collapse to one undirected edge; self-loops
are rejected.  A manifest is JSON::

    {"format_version": 1,
     "snapshots": [{"label": "2007-01", "path": "2007-01.txt"}, ...]}

with paths relative to the manifest's directory.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .errors import FormatError
from .graph import Snapshot
from .series import GraphSeries

FORMAT_VERSION = 1
PathLike = Union[str, os.PathLike]


@dataclass(frozen=True)
class SeriesManifest:
    entries: Tuple[Tuple[str, Path], ...]
    format_version: int = FORMAT_VERSION

    @property
    def labels(self) -> List[str]:
        return [label for label, _ in self.entries]


# -- snapshots ---------------------------------------------------------------


def parse_snapshot(lines: Iterable[str], path: str = "<string>", time_index: int = 1) -> Snapshot:
    edges = []
    nodes = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"expected two fields, got {len(parts)}", path, lineno)
        if parts[0] == "N":
            nodes.append(_node_id(parts[1], path, lineno))
            continue
        u, v = _node_id(parts[0], path, lineno), _node_id(parts[1], path, lineno)
        if u == v:
            raise FormatError(f"self-loop on node {u}", path, lineno)
        edges.append((u, v))
    if not edges and not nodes:
        raise FormatError("empty snapshot", path)
    return Snapshot.from_edges(edges, nodes, time_index=time_index)


def _node_id(token: str, path: str, lineno: int) -> int:
    try:
        v = int(token)
    except ValueError:
        raise FormatError(f"node id {token!r} is not an integer", path, lineno) from None
    if v < 0:
        raise FormatError(f"node id {v} is negative", path, lineno)
    return v


def load_snapshot(path: PathLike, time_index: int = 1) -> Snapshot:
    with open(path, encoding="utf-8") as fh:
        return parse_snapshot(fh, str(path), time_index)


def format_snapshot(g: Snapshot) -> str:
    """Canonical text: sorted edges, then sorted isolated nodes as ``N`` lines."""
    lines = [f"{u} {v}" for u, v in sorted(g.edges)]
    lines += [f"N {v}" for v in sorted(v for v, nb in g.adjacency.items() if not nb)]
    return "".join(line + "\n" for line in lines)


def save_snapshot(g: Snapshot, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_snapshot(g))


# -- series ------------------------------------------------------------------


def load_manifest(path: PathLike) -> SeriesManifest:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"manifest is not valid JSON ({exc.msg})", str(path), exc.lineno) from None
    if not isinstance(data, dict) or "snapshots" not in data:
        raise FormatError("manifest needs a 'snapshots' list", str(path))
    version = data.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {version}", str(path))
    entries = []
    for j, item in enumerate(data["snapshots"], start=1):
        if isinstance(item, str):
            label, rel = Path(item).stem, item
        elif isinstance(item, dict) and "path" in item:
            rel = item["path"]
            label = str(item.get("label", Path(rel).stem))
        else:
            raise FormatError(f"snapshot entry {j} needs a 'path'", str(path))
        target = (path.parent / rel).resolve() if not Path(rel).is_absolute() else Path(rel)
        if not target.exists():
            raise FormatError(f"snapshot file {rel!r} does not exist", str(path))
        entries.append((label, target))
    if not entries:
        raise FormatError("manifest lists no snapshots", str(path))
    return SeriesManifest(tuple(entries), version)


def load_series(manifest_path: PathLike) -> GraphSeries:
    manifest = load_manifest(manifest_path)
    return GraphSeries(
        tuple(load_snapshot(p, time_index=i) for i, (_, p) in enumerate(manifest.entries, start=1))
    )


def write_manifest(path: PathLike, entries: Sequence[Tuple[str, str]]) -> None:
    data = {
        "format_version": FORMAT_VERSION,
        "snapshots": [{"label": label, "path": rel} for label, rel in entries],
    }
    write_json(path, data)


def save_series(
    series: Iterable[Snapshot], outdir: PathLike, labels: Optional[Sequence[str]] = None,
    manifest_name: str = "manifest.json",
) -> Path:
    """Write every snapshot plus a manifest listing them; returns the manifest path."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    entries = []
    for j, g in enumerate(series):
        label = labels[j] if labels is not None else f"t{g.time_index:04d}"
        name = f"{label}.txt"
        save_snapshot(g, outdir / name)
        entries.append((label, name))
    manifest = outdir / manifest_name
    write_manifest(manifest, entries)
    return manifest


# -- reports -----------------------------------------------------------------


def dumps_report(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path: PathLike, data: dict) -> None:
    text = dumps_report(data)
    if str(path) == "-":
        import sys

        sys.stdout.write(text)
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_json(path: PathLike) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_xy_csv(path: PathLike, rows: Iterable[Tuple[object, object]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y"])
        for x, y in rows:
            writer.writerow([x, repr(y) if isinstance(y, float) else y])
