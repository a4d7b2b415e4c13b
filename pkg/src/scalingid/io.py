"""Reading graph files.

Two formats are accepted, with 1-based labels and vertex 1 as the
input-output compartment:

* JSON: ``{"n": 3, "edges": [[1, 2], [2, 3], [3, 1]]}``
* text: a first line ``n 3``, then one ``u v`` pair per line. Blank lines
  and ``#`` comments are ignored.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .errors import GraphError, GraphParseError
from .graph import DirectedGraph


def _build(n, edges, where: str) -> DirectedGraph:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise GraphParseError(f"{where}: vertex count must be a positive integer, got {n!r}")
    pairs = []
    for e in edges:
        if not isinstance(e, (list, tuple)) or len(e) != 2 or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in e
        ):
            raise GraphParseError(f"{where}: edge {e!r} is not a pair of integers")
        pairs.append(tuple(e))
    try:
        g = DirectedGraph(n, pairs)
    except GraphError as exc:
        raise GraphParseError(f"{where}: {exc}") from None
    if n > 1:
        isolated = [v for v in g.vertices if not g.successors[v] and not g.predecessors[v]]
        if isolated:
            raise GraphParseError(f"{where}: vertex {isolated[0]} has no edges")
    return g


def parse_json(text: str, where: str = "<json>") -> DirectedGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"{where}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(data, dict) or "n" not in data or "edges" not in data:
        raise GraphParseError(f'{where}: expected an object with keys "n" and "edges"')
    if not isinstance(data["edges"], list):
        raise GraphParseError(f'{where}: "edges" must be a list of [u, v] pairs')
    return _build(data["n"], data["edges"], where)


def parse_text(text: str, where: str = "<text>") -> DirectedGraph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 2 or fields[0] != "n":
                raise GraphParseError(f"{where}:{lineno}: first line must be 'n <count>'")
            n = _int(fields[1], where, lineno)
            continue
        if len(fields) != 2:
            raise GraphParseError(f"{where}:{lineno}: expected 'u v', got {line!r}")
        edges.append((_int(fields[0], where, lineno), _int(fields[1], where, lineno)))
    if n is None:
        raise GraphParseError(f"{where}: empty graph file")
    return _build(n, edges, where)


def _int(token: str, where: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphParseError(f"{where}:{lineno}: {token!r} is not an integer") from None


def parse_graph(text: str, where: str = "<input>") -> DirectedGraph:
    """Dispatch on content: a leading ``{`` means JSON."""
    if text.lstrip().startswith("{"):
        return parse_json(text, where)
    return parse_text(text, where)


def load_graph(path: Union[str, Path]) -> DirectedGraph:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise GraphParseError(f"{path}: cannot read ({exc.strerror})") from None
    return parse_graph(text, str(path))


def dump_json(g: DirectedGraph) -> str:
    return json.dumps(g.to_dict())
