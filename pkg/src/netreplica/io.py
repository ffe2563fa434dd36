"""Edge-list reading/writing and JSON/CSV helpers."""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path
from typing import Dict, List, Tuple, Union

from .graph import Graph

SCHEMA_VERSION = 1

PathLike = Union[str, os.PathLike]


class EdgeListError(ValueError):
    def __init__(self, path, lineno: int, msg: str):
        super().__init__(f"{path}:{lineno}: {msg}")
        self.path = path
        self.lineno = lineno


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def parse_edgelist(lines, relabel: bool = True, source="<input>") -> Tuple[Graph, Dict[int, str]]:
    """Parse edge-list lines into a Graph.

    Each non-comment line holds two node tokens (an optional third numeric
    column is accepted and ignored, input weights are treated as 1.0).  A line
    with a single token declares an isolated node.  With ``relabel`` tokens
    get dense ids in order of first appearance; otherwise tokens must be
    non-negative integers and are used as ids directly.

    Returns the graph and the id -> token mapping.
    """
    g = Graph()
    ids: Dict[str, int] = {}
    tokens: Dict[int, str] = {}

    def node_id(tok: str, lineno: int) -> int:
        nid = ids.get(tok)
        if nid is not None:
            return nid
        if relabel:
            nid = len(ids)
        else:
            try:
                nid = int(tok)
            except ValueError:
                raise EdgeListError(source, lineno, f"node token {tok!r} is not an integer id") from None
            if nid < 0:
                raise EdgeListError(source, lineno, f"negative node id {nid}")
        ids[tok] = nid
        tokens[nid] = tok
        g.add_node(nid)
        return nid

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) == 1:
            node_id(parts[0], lineno)
            continue
        if len(parts) > 3 or (len(parts) == 3 and not _is_number(parts[2])):
            raise EdgeListError(source, lineno, f"expected 'u v [weight]', got {line!r}")
        u = node_id(parts[0], lineno)
        v = node_id(parts[1], lineno)
        if u != v and not g.has_edge(u, v):
            g.add_edge(u, v)
    return g, tokens


def read_edgelist(path: PathLike, relabel: bool = True) -> Tuple[Graph, Dict[int, str]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edgelist(fh, relabel=relabel, source=path)


def format_edgelist(g: Graph) -> str:
    lines = []
    isolated = sorted(u for u in g.nodes() if g.degree(u) == 0)
    for u in isolated:
        lines.append(f"{u}\n")
    for u, v in sorted(g.edges()):
        lines.append(f"{u} {v}\n")
    return "".join(lines)


def write_edgelist(g: Graph, path: PathLike) -> None:
    """Write integer ids, isolated nodes first, then edges sorted."""
    Path(path).write_text(format_edgelist(g), encoding="utf-8")


def write_node_map(tokens: Dict[int, str], path: PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(["id", "token"])
        for nid in sorted(tokens):
            w.writerow([nid, tokens[nid]])


def dump_json(obj, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def load_json(path: PathLike):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def write_csv(rows: List[list], header: List[str], path: PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def read_csv(path: PathLike) -> List[dict]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
