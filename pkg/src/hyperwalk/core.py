"""Hyper-graph data model: validation, incidence matrices, connectivity, file I/O.

Vertices are 0-based indices 0..n-1; optional string labels live only in the
JSON file format. All structures are immutable after construction and safe to
share read-only across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class ValidationError(ValueError):
    """Malformed or out-of-contract input (CLI exit code 2)."""


class DisconnectedError(RuntimeError):
    """Operation requires a connected structure (CLI exit code 3).

    `components` lists the vertex groups that were found, when available.
    """

    def __init__(self, message: str, components: list[list[int]] | None = None):
        super().__init__(message)
        self.components = components or []


def _check_members(members: Sequence[int], n: int, what: str, idx: int) -> tuple[int, ...]:
    if len(members) == 0:
        raise ValidationError(f"{what} {idx}: empty")
    seen = set()
    for v in members:
        if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
            raise ValidationError(f"{what} {idx}: vertex {v!r} is not an integer")
        if v < 0 or v >= n:
            raise ValidationError(f"{what} {idx}: vertex {v} out of range (n={n})")
        if v in seen:
            raise ValidationError(f"{what} {idx}: duplicate vertex {v}")
        seen.add(v)
    return tuple(sorted(int(v) for v in members))


@dataclass(frozen=True)
class Hypergraph:
    """Undirected hyper-graph: `n` vertices plus a list of vertex-set edges.

    Edges may repeat (multi-hyper-graphs are allowed); a vertex may not repeat
    within one edge. Edges of cardinality 1 are legal and act as self-loops in
    the vertex walk.
    """

    n: int
    edges: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None

    def __init__(self, n: int, edges: Iterable[Sequence[int]],
                 labels: Sequence[str] | None = None):
        if n < 1:
            raise ValidationError(f"vertex count must be >= 1, got {n}")
        canon = tuple(_check_members(e, n, "edge", i) for i, e in enumerate(edges))
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != n:
                raise ValidationError(f"labels has length {len(labels)}, expected {n}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", canon)
        object.__setattr__(self, "labels", labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def rank(self) -> int:
        """Maximum edge cardinality (0 when there are no edges)."""
        return max((len(e) for e in self.edges), default=0)

    def to_dict(self) -> dict:
        d: dict = {"n": self.n, "edges": [list(e) for e in self.edges]}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        return d


@dataclass(frozen=True)
class DirectedHypergraph:
    """Directed hyper-graph: arcs are (origin set, destination set) pairs."""

    n: int
    arcs: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    labels: tuple[str, ...] | None = None

    def __init__(self, n: int, arcs: Iterable[tuple[Sequence[int], Sequence[int]]],
                 labels: Sequence[str] | None = None):
        if n < 1:
            raise ValidationError(f"vertex count must be >= 1, got {n}")
        canon = []
        for i, (org, dst) in enumerate(arcs):
            o = _check_members(org, n, "arc-org", i)
            d = _check_members(dst, n, "arc-dst", i)
            canon.append((o, d))
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != n:
                raise ValidationError(f"labels has length {len(labels)}, expected {n}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "arcs", tuple(canon))
        object.__setattr__(self, "labels", labels)

    @property
    def m(self) -> int:
        return len(self.arcs)

    @property
    def rank(self) -> int:
        return max((len(o) + len(d) for o, d in self.arcs), default=0)

    def to_dict(self) -> dict:
        d: dict = {"n": self.n,
                   "arcs": [{"org": list(o), "dst": list(t)} for o, t in self.arcs]}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        return d


class RadioHypergraph(DirectedHypergraph):
    """Directed hyper-graph with |org|=1 and origin not in dst for every arc.

    Models one transmitter per arc broadcasting to a set of receivers.
    """

    def __init__(self, n, arcs, labels=None):
        super().__init__(n, arcs, labels)
        for i, (org, dst) in enumerate(self.arcs):
            if len(org) != 1:
                raise ValidationError(f"arc {i}: radio arc needs exactly one origin, got {len(org)}")
            if org[0] in dst:
                raise ValidationError(f"arc {i}: origin {org[0]} may not be in its destination set")


@dataclass(frozen=True)
class Graph:
    """Simple graph or multigraph without self-loops, kept as an edge list."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        if n < 1:
            raise ValidationError(f"vertex count must be >= 1, got {n}")
        canon = []
        for i, e in enumerate(edges):
            if len(e) != 2:
                raise ValidationError(f"graph edge {i}: expected 2 endpoints, got {len(e)}")
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValidationError(f"graph edge {i}: self-loop at {u}")
            for x in (u, v):
                if x < 0 or x >= n:
                    raise ValidationError(f"graph edge {i}: vertex {x} out of range (n={n})")
            canon.append((min(u, v), max(u, v)))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        return d

    def neighbors(self, v: int) -> list[int]:
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return sorted(out)

    def adjacency(self) -> np.ndarray:
        """Adjacency with multiplicities (n x n, symmetric)."""
        A = np.zeros((self.n, self.n))
        for u, v in self.edges:
            A[u, v] += 1
            A[v, u] += 1
        return A


@dataclass(frozen=True)
class BipartiteLift:
    """Bipartite graph on V + E with (v, e) adjacent iff v belongs to edge e.

    Left nodes are the hyper-graph vertices 0..n-1, right nodes are edges
    indexed n..n+m-1. One hyper-walk step corresponds to two steps here.
    """

    n: int
    m: int
    pairs: tuple[tuple[int, int], ...] = field(repr=False)

    @property
    def node_count(self) -> int:
        return self.n + self.m

    @property
    def edge_count(self) -> int:
        return len(self.pairs)


def incidence_matrix(H: Hypergraph) -> np.ndarray:
    """n x m 0/1 matrix: entry (i, j) is 1 iff vertex i belongs to edge j."""
    W = np.zeros((H.n, H.m))
    for j, e in enumerate(H.edges):
        for v in e:
            W[v, j] = 1.0
    return W


def directed_incidence(D: DirectedHypergraph) -> tuple[np.ndarray, np.ndarray]:
    """Origin and destination incidence matrices (each n x m 0/1)."""
    Wo = np.zeros((D.n, D.m))
    Wd = np.zeros((D.n, D.m))
    for j, (org, dst) in enumerate(D.arcs):
        for v in org:
            Wo[v, j] = 1.0
        for v in dst:
            Wd[v, j] = 1.0
    return Wo, Wd


def degrees(H: Hypergraph) -> tuple[np.ndarray, np.ndarray, int]:
    """Vertex degrees d(v), edge degrees delta(e), and the rank max delta."""
    d = np.zeros(H.n, dtype=np.int64)
    delta = np.zeros(H.m, dtype=np.int64)
    for j, e in enumerate(H.edges):
        delta[j] = len(e)
        for v in e:
            d[v] += 1
    r = int(delta.max()) if H.m else 0
    return d, delta, r


def bipartite_lift(H: Hypergraph) -> BipartiteLift:
    pairs = tuple((v, H.n + j) for j, e in enumerate(H.edges) for v in e)
    return BipartiteLift(H.n, H.m, pairs)


def _lift_components(H: Hypergraph) -> list[list[int]]:
    """Connected components of the bipartite lift, reported as vertex groups.

    Vertices in no edge form singleton components.
    """
    adj_v: list[list[int]] = [[] for _ in range(H.n)]
    adj_e: list[list[int]] = [[] for _ in range(H.m)]
    for j, e in enumerate(H.edges):
        for v in e:
            adj_v[v].append(j)
            adj_e[j].append(v)
    seen_v = [False] * H.n
    seen_e = [False] * H.m
    comps = []
    for s in range(H.n):
        if seen_v[s]:
            continue
        comp = []
        stack = [("v", s)]
        seen_v[s] = True
        while stack:
            kind, x = stack.pop()
            if kind == "v":
                comp.append(x)
                for j in adj_v[x]:
                    if not seen_e[j]:
                        seen_e[j] = True
                        stack.append(("e", j))
            else:
                for v in adj_e[x]:
                    if not seen_v[v]:
                        seen_v[v] = True
                        stack.append(("v", v))
        comps.append(sorted(comp))
    return comps


def is_connected(H: Hypergraph) -> bool:
    """True iff the bipartite lift is a single connected component."""
    return len(_lift_components(H)) == 1


def graph_components(G: Graph) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(G.n)]
    for u, v in G.edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * G.n
    comps = []
    for s in range(G.n):
        if seen[s]:
            continue
        comp = []
        stack = [s]
        seen[s] = True
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def strongly_connected_components(adj: list[list[int]]) -> list[list[int]]:
    """Kosaraju on an adjacency-list digraph."""
    n = len(adj)
    order: list[int] = []
    seen = [False] * n
    for s in range(n):
        if seen[s]:
            continue
        stack = [(s, 0)]
        seen[s] = True
        while stack:
            x, i = stack.pop()
            if i < len(adj[x]):
                stack.append((x, i + 1))
                y = adj[x][i]
                if not seen[y]:
                    seen[y] = True
                    stack.append((y, 0))
            else:
                order.append(x)
    radj: list[list[int]] = [[] for _ in range(n)]
    for x in range(n):
        for y in adj[x]:
            radj[y].append(x)
    comp = [-1] * n
    comps: list[list[int]] = []
    for s in reversed(order):
        if comp[s] != -1:
            continue
        cur = [s]
        comp[s] = len(comps)
        members = []
        while cur:
            x = cur.pop()
            members.append(x)
            for y in radj[x]:
                if comp[y] == -1:
                    comp[y] = len(comps)
                    cur.append(y)
        comps.append(sorted(members))
    return comps


def radio_from_graph(G: Graph) -> RadioHypergraph:
    """One arc per vertex v: org {v}, dst N(v). Requires no isolated vertices."""
    arcs = []
    for v in range(G.n):
        nb = G.neighbors(v)
        if not nb:
            raise ValidationError(f"vertex {v} is isolated: its arc would have an empty destination")
        arcs.append(((v,), tuple(nb)))
    return RadioHypergraph(G.n, arcs)


def arc_radio_from_graph(G: Graph) -> RadioHypergraph:
    """One arc per oriented edge: org {u}, dst {v}.

    The vertex process of this structure is the plain non-lazy walk of G with
    each step transmitting on exactly the traversed graph edge.
    """
    arcs = []
    for u, v in G.edges:
        arcs.append(((u,), (v,)))
        arcs.append(((v,), (u,)))
    return RadioHypergraph(G.n, arcs)


def hypergraph_from_graph(G: Graph) -> Hypergraph:
    """The 2-uniform hyper-graph with the same edge list."""
    return Hypergraph(G.n, [list(e) for e in G.edges])


# --- JSON file format -------------------------------------------------------
#
# Undirected: {"n": int, "edges": [[int, ...], ...]}
# Directed:   {"n": int, "arcs": [{"org": [int, ...], "dst": [int, ...]}, ...]}
# Either may carry "labels": [str, ...] of length n. UTF-8, no comments.

def parse_hypergraph(text: str) -> Hypergraph | DirectedHypergraph:
    """Parse the hyper-graph JSON format; directedness is inferred from the
    presence of "arcs". A directed structure satisfying the radio constraints
    is returned as a RadioHypergraph."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("top-level JSON value must be an object")
    if "n" not in doc:
        raise ValidationError("missing required field 'n'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError(f"'n' must be a positive integer, got {n!r}")
    labels = doc.get("labels")
    if "edges" in doc and "arcs" in doc:
        raise ValidationError("document has both 'edges' and 'arcs'")
    if "edges" in doc:
        edges = doc["edges"]
        if not isinstance(edges, list) or not all(isinstance(e, list) for e in edges):
            raise ValidationError("'edges' must be a list of vertex lists")
        return Hypergraph(n, edges, labels)
    if "arcs" in doc:
        arcs = doc["arcs"]
        if not isinstance(arcs, list):
            raise ValidationError("'arcs' must be a list")
        pairs = []
        for i, a in enumerate(arcs):
            if not isinstance(a, dict) or "org" not in a or "dst" not in a:
                raise ValidationError(f"arc {i}: expected an object with 'org' and 'dst'")
            pairs.append((a["org"], a["dst"]))
        D = DirectedHypergraph(n, pairs, labels)
        if all(len(o) == 1 and o[0] not in d for o, d in D.arcs):
            return RadioHypergraph(n, pairs, labels)
        return D
    raise ValidationError("document has neither 'edges' nor 'arcs'")


def dump_hypergraph(H: Hypergraph | DirectedHypergraph) -> str:
    return json.dumps(H.to_dict(), indent=2) + "\n"


def load_hypergraph(path) -> Hypergraph | DirectedHypergraph:
    with open(path, encoding="utf-8") as fh:
        return parse_hypergraph(fh.read())
