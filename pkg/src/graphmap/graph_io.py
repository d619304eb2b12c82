"""Graph model and parsers for edge-list, DOT-subset and JSON inputs.

Every parser produces the same :class:`Graph`: dense 0-based vertex ids in
first-appearance order, undirected edges normalised to ``u < v`` with
duplicates collapsed by summing their weights.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Iterable


class GraphParseError(ValueError):
    """Input text does not describe a valid graph."""

    def __init__(self, message: str, line: int | None = None, element: str | None = None):
        self.line = line
        self.element = element
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedDirectedError(GraphParseError):
    pass


@dataclass(frozen=True)
class Vertex:
    label: str
    weight: float = 1.0


@dataclass(frozen=True)
class Graph:
    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[int, int, float], ...]
    adjacency: tuple[tuple[tuple[int, float], ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = len(self.vertices)
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        seen = set()
        for u, v, w in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references a missing vertex")
            if u >= v:
                raise ValueError(f"edge ({u}, {v}) is not normalised (u < v, no self-loops)")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            if not (w > 0 and math.isfinite(w)):
                raise ValueError(f"edge ({u}, {v}) has non-positive weight {w}")
            seen.add((u, v))
            adj[u].append((v, w))
            adj[v].append((u, w))
        object.__setattr__(self, "adjacency", tuple(tuple(a) for a in adj))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def labels(self) -> list[str]:
        return [v.label for v in self.vertices]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def weighted_degree(self, v: int) -> float:
        return sum(w for _, w in self.adjacency[v])

    def total_weight(self) -> float:
        return sum(w for _, _, w in self.edges)

    def subgraph(self, vertex_ids: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph with ids renumbered in ascending order of the originals."""
        ids = sorted(vertex_ids)
        local = {v: i for i, v in enumerate(ids)}
        edges = tuple(
            (local[u], local[v], w) for u, v, w in self.edges if u in local and v in local
        )
        return Graph(tuple(self.vertices[v] for v in ids), edges), ids


class _Builder:
    """Accumulates labels and edges in first-appearance order."""

    def __init__(self) -> None:
        self.ids: dict[str, int] = {}
        self.vertices: list[Vertex] = []
        self.edges: dict[tuple[int, int], float] = {}

    def vertex(self, label: str, weight: float = 1.0) -> int:
        if label not in self.ids:
            self.ids[label] = len(self.vertices)
            self.vertices.append(Vertex(label, weight))
        return self.ids[label]

    def relabel(self, vid: int, label: str) -> None:
        old = self.vertices[vid]
        self.vertices[vid] = Vertex(label, old.weight)

    def edge(self, u: int, v: int, w: float) -> None:
        key = (u, v) if u < v else (v, u)
        self.edges[key] = self.edges.get(key, 0.0) + w

    def build(self) -> Graph:
        edges = tuple((u, v, w) for (u, v), w in self.edges.items())
        return Graph(tuple(self.vertices), edges)


def _parse_weight(token: str, line: int | None = None, element: str | None = None) -> float:
    try:
        w = float(token)
    except ValueError:
        raise GraphParseError(f"non-numeric weight {token!r}", line, element) from None
    if not math.isfinite(w) or w <= 0:
        raise GraphParseError(f"weight must be positive and finite, got {token!r}", line, element)
    return w


def parse_edge_list(text: str) -> Graph:
    b = _Builder()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) not in (2, 3):
            raise GraphParseError(
                f"expected 'labelA labelB [weight]', got {len(tokens)} tokens", lineno
            )
        a, c = tokens[0], tokens[1]
        if a == c:
            raise GraphParseError(f"self-loop on {a!r}", lineno)
        w = _parse_weight(tokens[2], lineno) if len(tokens) == 3 else 1.0
        b.edge(b.vertex(a), b.vertex(c), w)
    return b.build()


def to_edge_list(g: Graph) -> str:
    """Serialise to edge-list text. Vertices must all have at least one edge
    for the output to round-trip, and labels must not contain whitespace."""
    return "".join(
        f"{g.vertices[u].label} {g.vertices[v].label} {w!r}\n" for u, v, w in g.edges
    )


# ---------------------------------------------------------------------------
# DOT subset

_DOT_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*|\#[^\n]*)
  | (?P<block>/\*.*?\*/)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<edgeop>--|->)
  | (?P<id>[^\W\d]\w*|-?(?:\.[0-9]+|[0-9]+(?:\.[0-9]*)?))
  | (?P<punct>[{}\[\];,=])
    """,
    re.VERBOSE | re.DOTALL,
)


def _dot_tokens(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos, line = 0, 1
    while pos < len(text):
        m = _DOT_TOKEN.match(text, pos)
        if m is None:
            raise GraphParseError(f"unexpected character {text[pos]!r}", line)
        kind = m.lastgroup
        value = m.group()
        if kind == "string":
            tokens.append(("id", value[1:-1].replace('\\"', '"'), line))
        elif kind in ("edgeop", "id", "punct"):
            tokens.append((kind, value, line))
        line += value.count("\n")
        pos = m.end()
    return tokens


class _DotParser:
    def __init__(self, text: str) -> None:
        self.toks = _dot_tokens(text)
        self.i = 0
        self.b = _Builder()

    def peek(self) -> tuple[str, str, int] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def line(self) -> int:
        tok = self.peek()
        if tok is not None:
            return tok[2]
        return self.toks[-1][2] if self.toks else 1

    def take(self, kind: str, value: str | None = None) -> str:
        tok = self.peek()
        if tok is None or tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = "end of input" if tok is None else repr(tok[1])
            raise GraphParseError(f"expected {want!r}, got {got}", self.line())
        self.i += 1
        return tok[1]

    def accept(self, kind: str, value: str | None = None) -> bool:
        tok = self.peek()
        if tok is not None and tok[0] == kind and (value is None or tok[1] == value):
            self.i += 1
            return True
        return False

    def parse(self) -> Graph:
        tok = self.peek()
        if tok is None:
            raise GraphParseError("empty DOT input", 1)
        keyword = tok[1].lower()
        if keyword == "digraph":
            raise UnsupportedDirectedError("directed graphs ('digraph') are not supported", tok[2])
        if keyword == "strict":
            raise GraphParseError("'strict' graphs are not supported", tok[2])
        if keyword != "graph":
            raise GraphParseError(f"expected 'graph', got {tok[1]!r}", tok[2])
        self.i += 1
        if self.peek() is not None and self.peek()[0] == "id":
            self.i += 1
        self.take("punct", "{")
        while not self.accept("punct", "}"):
            if self.peek() is None:
                raise GraphParseError("unterminated graph body", self.line())
            self.statement()
        if self.peek() is not None:
            raise GraphParseError("trailing content after graph body", self.line())
        return self.b.build()

    def statement(self) -> None:
        if self.accept("punct", ";"):
            return
        tok = self.peek()
        if tok[0] != "id":
            raise GraphParseError(f"unexpected {tok[1]!r}", tok[2])
        if tok[1].lower() in ("subgraph", "node", "edge", "graph"):
            raise GraphParseError(f"'{tok[1]}' statements are not supported", tok[2])
        line = tok[2]
        chain = [self.take("id")]
        while True:
            nxt = self.peek()
            if nxt is not None and nxt[0] == "edgeop":
                if nxt[1] == "->":
                    raise UnsupportedDirectedError("directed edge '->' is not supported", nxt[2])
                self.i += 1
                chain.append(self.take("id"))
            else:
                break
        if self.accept("punct", "="):
            raise GraphParseError("graph attribute assignments are not supported", line)
        attrs = self.attributes()
        if len(chain) == 1:
            vid = self.b.vertex(chain[0])
            if "label" in attrs:
                self.b.relabel(vid, attrs["label"])
        else:
            w = _parse_weight(attrs["weight"], line) if "weight" in attrs else 1.0
            ids = [self.b.vertex(name) for name in chain]
            for u, v in zip(ids, ids[1:]):
                if u == v:
                    raise GraphParseError(f"self-loop on {chain[0]!r}", line)
                self.b.edge(u, v, w)
        self.accept("punct", ";")

    def attributes(self) -> dict[str, str]:
        attrs: dict[str, str] = {}
        while self.accept("punct", "["):
            while not self.accept("punct", "]"):
                key = self.take("id")
                self.take("punct", "=")
                attrs[key] = self.take("id")
                self.accept("punct", ",") or self.accept("punct", ";")
        return attrs


def parse_dot_subset(text: str) -> Graph:
    """Parse ``graph NAME { ... }`` with node and ``--`` edge statements.

    Only ``label`` (nodes) and ``weight`` (edges) attributes are used; others
    are ignored. Node labels default to the node id; edge chains
    ``a -- b -- c`` are accepted.
    """
    return _DotParser(text).parse()


# ---------------------------------------------------------------------------
# JSON


def parse_json_graph(text: str) -> Graph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(data, dict):
        raise GraphParseError("top-level JSON value must be an object", element="$")
    for key in ("nodes", "links"):
        if key not in data:
            raise GraphParseError(f"missing key {key!r}", element="$")
        if not isinstance(data[key], list):
            raise GraphParseError(f"{key!r} must be a list", element=key)

    b = _Builder()
    for i, node in enumerate(data["nodes"]):
        where = f"nodes[{i}]"
        if not isinstance(node, dict) or "id" not in node:
            raise GraphParseError(f"{where}: missing key 'id'", element=where)
        name = str(node["id"])
        if name in b.ids:
            raise GraphParseError(f"{where}: duplicate node id {name!r}", element=where)
        weight = node.get("weight", 1.0)
        if not isinstance(weight, (int, float)) or weight < 0 or not math.isfinite(weight):
            raise GraphParseError(f"{where}: vertex weight must be nonnegative", element=where)
        vid = b.vertex(name, float(weight))
        if "label" in node:
            b.relabel(vid, str(node["label"]))

    known = dict(b.ids)
    for i, link in enumerate(data["links"]):
        where = f"links[{i}]"
        if not isinstance(link, dict):
            raise GraphParseError(f"{where}: must be an object", element=where)
        ends = []
        for key in ("source", "target"):
            if key not in link:
                raise GraphParseError(f"{where}: missing key {key!r}", element=where)
            name = str(link[key])
            if name not in known:
                raise GraphParseError(
                    f"{where}: {key} {name!r} is not a declared node", element=where
                )
            ends.append(known[name])
        if ends[0] == ends[1]:
            raise GraphParseError(f"{where}: self-loop", element=where)
        w = link.get("weight", 1.0)
        if isinstance(w, bool) or not isinstance(w, (int, float)):
            raise GraphParseError(f"{where}: weight must be a number", element=where)
        if not math.isfinite(w) or w <= 0:
            raise GraphParseError(f"{where}: weight must be positive, got {w}", element=where)
        b.edge(ends[0], ends[1], float(w))
    return b.build()


def connected_components(g: Graph) -> list[list[int]]:
    """Maximal connected vertex sets, each sorted, ordered by smallest id."""
    seen = [False] * g.n
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        stack, comp = [start], []
        while stack:
            u = stack.pop()
            comp.append(u)
            for v, _ in g.adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


FORMATS = ("edgelist", "dot", "json")


def detect_format(path: str, text: str) -> str:
    lower = path.lower()
    if lower.endswith((".dot", ".gv")):
        return "dot"
    if lower.endswith(".json"):
        return "json"
    head = text.lstrip()
    if head.startswith("{"):
        return "json"
    if re.match(r"(strict\s+)?(di)?graph\b", head, re.IGNORECASE):
        return "dot"
    return "edgelist"


def parse_graph(text: str, fmt: str) -> Graph:
    if fmt == "edgelist":
        return parse_edge_list(text)
    if fmt == "dot":
        return parse_dot_subset(text)
    if fmt == "json":
        return parse_json_graph(text)
    raise ValueError(f"unknown graph format {fmt!r}")
