"""Generators for the hyper-graph families used in the analysis and the test
grids: sliding-window hyperlines, k-hop radio lines and 2-D torus meshes, the
single-edge hyper-graph, the clique+line lower-bound gadget, unit-disk
instances and seeded random uniform hyper-graphs.

All generators are deterministic given their parameters (plus seed where one
applies) and return structures that pass hg-core validation.
"""

from __future__ import annotations

import csv
import io
import math
from itertools import combinations

import numpy as np

from .core import (
    DisconnectedError,
    Graph,
    Hypergraph,
    RadioHypergraph,
    ValidationError,
    graph_components,
    is_connected,
    radio_from_graph,
)

CLIQUE_EDGE_GUARD = 100_000


def hyperline(n: int, k: int) -> Hypergraph:
    """k-uniform hyperline: edges are the sliding windows {i, ..., i+k-1}."""
    if not 2 <= k <= n:
        raise ValidationError(f"hyperline needs 2 <= k <= n, got k={k}, n={n}")
    return Hypergraph(n, [list(range(i, i + k)) for i in range(n - k + 1)])


def radio_line(n: int, k: int, ring: bool = True) -> RadioHypergraph:
    """k-hop 1-D radio structure: one arc per vertex reaching every vertex at
    distance 1..k (circular distance on a ring, clipped on a line)."""
    if not 1 <= k < n / 2:
        raise ValidationError(f"radio_line needs 1 <= k < n/2, got k={k}, n={n}")
    arcs = []
    for v in range(n):
        if ring:
            dst = sorted({(v + j) % n for j in range(-k, k + 1) if j != 0})
        else:
            dst = [u for u in range(max(0, v - k), min(n, v + k + 1)) if u != v]
        arcs.append(((v,), tuple(dst)))
    return RadioHypergraph(n, arcs)


def mesh2d(side: int, k: int) -> RadioHypergraph:
    """k-hop 2-D mesh on a side x side torus: one arc per node reaching every
    node within L1 torus distance k. Every destination set has 2k(k+1) nodes."""
    if side < 3:
        raise ValidationError(f"mesh2d needs side >= 3, got {side}")
    if not 1 <= k < side / 2:
        raise ValidationError(f"mesh2d needs 1 <= k < side/2, got k={k}, side={side}")
    n = side * side
    offsets = [(dx, dy)
               for dx in range(-k, k + 1)
               for dy in range(-k, k + 1)
               if 0 < abs(dx) + abs(dy) <= k]
    expected = 2 * k * (k + 1)
    arcs = []
    for x in range(side):
        for y in range(side):
            dst = sorted(((x + dx) % side) * side + (y + dy) % side
                         for dx, dy in offsets)
            assert len(set(dst)) == expected, "torus ball size must be 2k(k+1)"
            arcs.append(((x * side + y,), tuple(dst)))
    return RadioHypergraph(n, arcs)


def single_edge(n: int) -> Hypergraph:
    """One hyper-edge containing every vertex."""
    if n < 1:
        raise ValidationError(f"single_edge needs n >= 1, got {n}")
    return Hypergraph(n, [list(range(n))])


def clique_line(nprime: int, c: int) -> Hypergraph:
    """Lower-bound gadget: a c-uniform hyper-clique on nprime vertices joined
    to a 2-uniform hyper-line of nprime vertices at the shared node s.

    s is clique vertex 0; the nprime-1 fresh line vertices are appended after
    the clique ones, so the far line end is vertex 2*nprime-2. Total
    n = 2*nprime - 1 and m = C(nprime, c) + nprime - 1.
    """
    if not 2 <= c <= nprime - 1:
        raise ValidationError(f"clique_line needs 2 <= c <= nprime-1, got c={c}, nprime={nprime}")
    if math.comb(nprime, c) > CLIQUE_EDGE_GUARD:
        raise ValidationError(
            f"clique_line(nprime={nprime}, c={c}) would create {math.comb(nprime, c)} "
            f"clique edges (guard: {CLIQUE_EDGE_GUARD})")
    n = 2 * nprime - 1
    edges = [list(sub) for sub in combinations(range(nprime), c)]
    path = [0] + list(range(nprime, 2 * nprime - 1))
    for a, b in zip(path, path[1:]):
        edges.append([a, b])
    return Hypergraph(n, edges)


def unit_disk(points: list[tuple[float, float]], radius: float) -> RadioHypergraph:
    """Radio lift of the unit-disk graph: edge iff Euclidean distance <= radius."""
    if len(points) < 2:
        raise ValidationError(f"unit_disk needs at least 2 points, got {len(points)}")
    if radius <= 0:
        raise ValidationError(f"unit_disk radius must be positive, got {radius}")
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if math.dist(pts[i], pts[j]) <= radius:
                edges.append((i, j))
    G = Graph(n, edges)
    comps = graph_components(G)
    if len(comps) != 1:
        raise DisconnectedError(
            f"unit-disk graph at radius {radius} has {len(comps)} components", comps)
    return radio_from_graph(G)


def read_points_csv(text: str) -> list[tuple[float, float]]:
    """Parse an `x,y` CSV with a header row."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or not {"x", "y"} <= {f.strip() for f in reader.fieldnames}:
        raise ValidationError("points CSV must have an 'x,y' header")
    pts = []
    for i, row in enumerate(reader):
        try:
            pts.append((float(row["x"]), float(row["y"])))
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"points CSV row {i}: {exc}") from exc
    return pts


def default_grid() -> list[tuple[str, Hypergraph | RadioHypergraph]]:
    """The desk-scale instance grid used by the bound suite and `check`."""
    return [
        ("hyperline(3,2)", hyperline(3, 2)),
        ("hyperline(8,3)", hyperline(8, 3)),
        ("hyperline(12,2)", hyperline(12, 2)),
        ("single_edge(4)", single_edge(4)),
        ("single_edge(16)", single_edge(16)),
        ("clique_line(4,2)", clique_line(4, 2)),
        ("clique_line(6,3)", clique_line(6, 3)),
        ("radio_line(12,2,ring)", radio_line(12, 2, ring=True)),
        ("radio_line(9,2,line)", radio_line(9, 2, ring=False)),
        ("mesh2d(4,1)", mesh2d(4, 1)),
        ("mesh2d(5,2)", mesh2d(5, 2)),
        ("random_uniform(10,8,3,1)", random_uniform(10, 8, 3, 1)),
    ]


def random_uniform(n: int, m: int, k: int, seed: int, max_tries: int = 200) -> Hypergraph:
    """m random k-subsets of 0..n-1, resampled until connected."""
    if k > n:
        raise ValidationError(f"random_uniform needs k <= n, got k={k}, n={n}")
    if k < 1 or m < 1:
        raise ValidationError(f"random_uniform needs k >= 1 and m >= 1, got k={k}, m={m}")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        edges = [sorted(rng.choice(n, size=k, replace=False).tolist()) for _ in range(m)]
        H = Hypergraph(n, edges)
        if is_connected(H):
            return H
    raise ValidationError(
        f"random_uniform(n={n}, m={m}, k={k}) produced no connected instance "
        f"in {max_tries} tries")
