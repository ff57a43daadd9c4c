"""Exact hitting times, radio hitting times, effective resistance, commute
times, and the identities that hold on neighbor-transitive radio structures.

Hitting times are the minimal non-negative solution of the absorbing linear
system (0 on the target, 1 + M h elsewhere). States from which the target is
not reached almost surely carry an explicit +inf instead of an error, since
directed radio structures need not be strongly connected.

Radio-time convention: a walk transmits once per step, so h_radio(v, U) is 0
when v is already in U and otherwise 1 + (expected edge-chain steps from the
first traversed edge to the set of edges meeting U). The unshifted edge-chain
expectation is exposed as `raw` alongside.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DirectedHypergraph,
    DisconnectedError,
    Graph,
    Hypergraph,
    ValidationError,
    graph_components,
)
from .operators import (
    CheckReport,
    DirectedWalkOperators,
    WalkOperators,
    build_directed_operators,
    build_operators,
)

RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class HittingResult:
    """Solution of one absorbing system: `values[i]` is the expected number of
    steps from state i to the target set (0 on the target, +inf where the
    target is not reached almost surely)."""

    values: np.ndarray
    target: tuple[int, ...]
    reachable: np.ndarray    # bool; False entries have values == +inf
    residual: float


@dataclass(frozen=True)
class RadioHittingResult:
    value: float                 # transmission-counting radio hitting time
    raw: float                   # unshifted edge-chain expectation
    lambda0: np.ndarray          # start distribution over edges (row of A)
    edge_result: HittingResult   # edge-chain solution
    vertex_values: np.ndarray    # radio hitting time from every start vertex
    vertex_raw: np.ndarray


def _almost_sure_set(M: np.ndarray, target: list[int]) -> np.ndarray:
    """Boolean mask of states from which the target is reached with prob. 1.

    A state fails iff, avoiding the target, it can reach some state that
    cannot reach the target at all.
    """
    s = M.shape[0]
    adj = M > 0
    in_target = np.zeros(s, dtype=bool)
    in_target[target] = True

    # reverse reachability: states that can reach the target
    can_reach = in_target.copy()
    frontier = list(target)
    radj = [list(np.nonzero(adj[:, j])[0]) for j in range(s)]
    while frontier:
        j = frontier.pop()
        for i in radj[j]:
            if not can_reach[i]:
                can_reach[i] = True
                frontier.append(i)

    # forward reachability of the dead set, with target states removed
    dead = ~can_reach
    doomed = dead.copy()
    frontier = list(np.nonzero(dead)[0])
    rAdjNoTarget = [list(np.nonzero(adj[:, j] & ~in_target)[0]) for j in range(s)]
    while frontier:
        j = frontier.pop()
        for i in rAdjNoTarget[j]:
            if not doomed[i] and not in_target[i]:
                doomed[i] = True
                frontier.append(i)
    return ~doomed


def hitting_times(M: np.ndarray, target) -> HittingResult:
    """Expected steps to reach `target` from every state of the row-stochastic
    chain M, as the minimal non-negative solution of the absorbing system."""
    M = np.asarray(M, dtype=float)
    s = M.shape[0]
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"transition matrix must be square, got {M.shape}")
    tgt = sorted({int(t) for t in (target if hasattr(target, "__iter__") else [target])})
    if not tgt:
        raise ValidationError("target set is empty")
    for t in tgt:
        if t < 0 or t >= s:
            raise ValidationError(f"target state {t} out of range (states={s})")

    ok = _almost_sure_set(M, tgt)
    values = np.full(s, np.inf)
    values[tgt] = 0.0
    free = np.nonzero(ok)[0]
    free = free[~np.isin(free, tgt)]
    residual = 0.0
    if free.size:
        sub = M[np.ix_(free, free)]
        A = np.eye(free.size) - sub
        b = np.ones(free.size)
        try:
            h = np.linalg.solve(A, b)
        except np.linalg.LinAlgError as exc:
            raise RuntimeError(
                "internal error: restricted hitting system is singular "
                "after reachability masking") from exc
        residual = float(np.abs(A @ h - b).max())
        if residual > RESIDUAL_TOL:
            # one step of iterative refinement
            h = h + np.linalg.solve(A, b - A @ h)
            residual = float(np.abs(A @ h - b).max())
        values[free] = h
    return HittingResult(values=values, target=tuple(tgt), reachable=ok,
                         residual=residual)


def hitting_matrix(M: np.ndarray) -> np.ndarray:
    """h[v, u] = expected steps from v to u, one singleton solve per target."""
    s = M.shape[0]
    out = np.zeros((s, s))
    for u in range(s):
        out[:, u] = hitting_times(M, [u]).values
    return out


def _radio_from_edge_chain(A: np.ndarray, edge_res: HittingResult,
                           in_U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-start raw and shifted radio values from an edge-chain solution.

    A start whose edge distribution puts mass on an infinite edge value is
    itself infinite.
    """
    hY = edge_res.values
    finite = np.isfinite(hY)
    raw_all = A[:, finite] @ hY[finite]
    if not finite.all():
        raw_all[(A[:, ~finite] > 0).any(axis=1)] = np.inf
    vertex_raw = np.where(in_U, 0.0, raw_all)
    vertex_values = np.where(in_U, 0.0, 1.0 + raw_all)
    return vertex_values, vertex_raw


def radio_hitting(H: Hypergraph, v: int, U, ops: WalkOperators | None = None) -> RadioHittingResult:
    """Radio hitting time from vertex v to the vertex set U on undirected H.

    Solves the edge-chain system with target E(U) = {e : e meets U}, starts it
    from lambda0 = row v of A, and applies the transmission-count convention.
    """
    if ops is None:
        ops = build_operators(H)
    U = sorted({int(u) for u in (U if hasattr(U, "__iter__") else [U])})
    if not U:
        raise ValidationError("target vertex set is empty")
    for u in U:
        if u < 0 or u >= H.n:
            raise ValidationError(f"target vertex {u} out of range (n={H.n})")
    in_U = np.zeros(H.n, dtype=bool)
    in_U[U] = True
    targets = set(U)
    EU = [j for j, e in enumerate(H.edges) if targets & set(e)]
    if not EU:
        raise ValidationError("no edge meets the target set; structure cannot be connected")
    edge_res = hitting_times(ops.Q, EU)
    lambda0 = ops.A[v]
    vertex_values, vertex_raw = _radio_from_edge_chain(ops.A, edge_res, in_U)
    return RadioHittingResult(value=float(vertex_values[v]), raw=float(vertex_raw[v]),
                              lambda0=lambda0, edge_result=edge_res,
                              vertex_values=vertex_values, vertex_raw=vertex_raw)


def arc_hearing_sets(D: DirectedHypergraph) -> list[set[int]]:
    """Vertices that hear a transmission on each arc: org united with dst."""
    return [set(o) | set(d) for o, d in D.arcs]


def radio_hitting_directed(D: DirectedHypergraph, v: int, U,
                           ops: DirectedWalkOperators | None = None) -> RadioHittingResult:
    """Radio hitting time on a directed structure: the target hears a
    transmission when the traversed arc's org or dst intersects U."""
    if ops is None:
        ops = build_directed_operators(D)
    U = sorted({int(u) for u in (U if hasattr(U, "__iter__") else [U])})
    if not U:
        raise ValidationError("target vertex set is empty")
    for u in U:
        if u < 0 or u >= D.n:
            raise ValidationError(f"target vertex {u} out of range (n={D.n})")
    in_U = np.zeros(D.n, dtype=bool)
    in_U[U] = True
    hears = arc_hearing_sets(D)
    targets = set(U)
    EU = [j for j, s in enumerate(hears) if s & targets]
    if not EU:
        raise ValidationError("no arc reaches the target set")
    edge_res = hitting_times(ops.Q, EU)
    lambda0 = ops.A_fwd[v]
    vertex_values, vertex_raw = _radio_from_edge_chain(ops.A_fwd, edge_res, in_U)
    return RadioHittingResult(value=float(vertex_values[v]), raw=float(vertex_raw[v]),
                              lambda0=lambda0, edge_result=edge_res,
                              vertex_values=vertex_values, vertex_raw=vertex_raw)


def radio_hitting_matrix(struct: Hypergraph | DirectedHypergraph) -> tuple[np.ndarray, np.ndarray]:
    """(values, raw) matrices over all ordered (start, singleton-target) pairs."""
    if isinstance(struct, DirectedHypergraph):
        ops = build_directed_operators(struct)
        solver = lambda u: radio_hitting_directed(struct, 0, [u], ops)
    else:
        ops = build_operators(struct)
        solver = lambda u: radio_hitting(struct, 0, [u], ops)
    n = struct.n
    vals = np.zeros((n, n))
    raw = np.zeros((n, n))
    for u in range(n):
        res = solver(u)
        vals[:, u] = res.vertex_values
        raw[:, u] = res.vertex_raw
    return vals, raw


def _argmax_pair(M: np.ndarray) -> tuple[float, tuple[int, int]]:
    """Max over ordered pairs; near-ties (1e-9 relative) resolve to the
    lexicographically smallest (source, target) pair."""
    best = -np.inf
    arg = (0, 0)
    n = M.shape[0]
    for v in range(n):
        for u in range(n):
            tol = 1e-9 * max(1.0, abs(best)) if np.isfinite(best) else 0.0
            if M[v, u] > best + tol:
                best = M[v, u]
                arg = (v, u)
    return float(best), arg


def max_hitting(struct: Hypergraph | DirectedHypergraph) -> tuple[float, tuple[int, int]]:
    """Maximum ordinary hitting time over ordered vertex pairs."""
    if isinstance(struct, DirectedHypergraph):
        P = build_directed_operators(struct).P
    else:
        P = build_operators(struct).P
    return _argmax_pair(hitting_matrix(P))


def max_radio_hitting(struct: Hypergraph | DirectedHypergraph) -> tuple[float, tuple[int, int]]:
    """Maximum radio hitting time (transmission convention) over ordered pairs."""
    vals, _ = radio_hitting_matrix(struct)
    return _argmax_pair(vals)


# --- electrical identities ---------------------------------------------------

def _laplacian_pinv(G: Graph) -> np.ndarray:
    comps = graph_components(G)
    if len(comps) != 1:
        raise DisconnectedError(f"graph has {len(comps)} components", comps)
    A = G.adjacency()
    L = np.diag(A.sum(axis=1)) - A
    return np.linalg.pinv(L)

def resistance_matrix(G: Graph) -> np.ndarray:
    """Pairwise effective resistances with every edge a 1-ohm resistor."""
    Lp = _laplacian_pinv(G)
    d = np.diag(Lp)
    return d[:, None] + d[None, :] - 2 * Lp


def effective_resistance(G: Graph, u: int, v: int) -> float:
    """Effective resistance between u and v (unit resistors, multigraphs ok)."""
    Lp = _laplacian_pinv(G)
    return float(Lp[u, u] + Lp[v, v] - 2 * Lp[u, v])


def simple_walk_matrix(G: Graph) -> np.ndarray:
    """Non-lazy simple random walk on G (multiplicity-weighted for multigraphs)."""
    A = G.adjacency()
    d = A.sum(axis=1)
    if (d == 0).any():
        raise ValidationError(f"vertex {int(np.argmax(d == 0))} is isolated")
    return A / d[:, None]


def commute_check(G: Graph, u: int, v: int, tol: float = 1e-8) -> CheckReport:
    """Commute time of the non-lazy simple walk equals 2 m R_uv."""
    P = simple_walk_matrix(G)
    commute = hitting_times(P, [v]).values[u] + hitting_times(P, [u]).values[v]
    rhs = 2 * G.m * effective_resistance(G, u, v)
    dev = float(abs(commute - rhs))
    return CheckReport("commute-resistance", dev, tol, dev <= tol,
                       f"commute={commute:.12g}, 2mR={rhs:.12g}")


def foster_sum(G: Graph) -> float:
    """Sum of effective resistances over the edges; equals n-1 when connected."""
    R = resistance_matrix(G)
    return float(sum(R[u, v] for u, v in G.edges))


# --- neighbor-transitive identities ------------------------------------------

@dataclass(frozen=True)
class TransitiveIdentityReport:
    skipped: bool
    warning: str
    hitting_residual: float      # h(u,v) vs h(u,N(v)) + h(w,v)
    radio_residual: float        # raw radio vs h(u,v) - h(w,v)
    resistance_residual: float   # raw radio vs m (R_uv - R_wv)
    neighbor_spread: float       # max - min of h(w,v) over w in N(v)
    details: dict

    @property
    def max_residual(self) -> float:
        return max(self.hitting_residual, self.radio_residual,
                   self.resistance_residual)


def induced_walk_graph(R: DirectedHypergraph) -> Graph:
    """Graph of the vertex process of a one-arc-per-vertex radio structure.

    Requires the neighbor relation to be symmetric (u in dst(v) iff v in
    dst(u)), which makes the vertex process the simple walk on this graph.
    """
    by_org: dict[int, tuple[int, ...]] = {}
    for org, dst in R.arcs:
        if len(org) != 1 or org[0] in by_org:
            raise ValidationError("structure must have exactly one arc per vertex")
        by_org[org[0]] = dst
    if set(by_org) != set(range(R.n)):
        raise ValidationError("structure must have exactly one arc per vertex")
    edges = []
    for v in range(R.n):
        for u in by_org[v]:
            if v not in by_org[u]:
                raise ValidationError(
                    f"neighbor relation not symmetric: {u} in dst({v}) but not conversely")
            if v < u:
                edges.append((v, u))
    return Graph(R.n, edges)


def transitive_identities(R: DirectedHypergraph, u: int, v: int,
                          tol: float = 1e-7) -> TransitiveIdentityReport:
    """Check, with three independent solvers, the identities that tie ordinary
    hitting, radio hitting and effective resistance together on
    vertex-transitive radio structures:

        h(u,v) = h(u, N(v)) + h(w,v)
        raw_radio(u,v) = h(u,v) - h(w,v) = m (R_uv - R_wv)

    for w a neighbor of v (smallest index). The identities additionally need
    all h(w,v), w in N(v) to agree; their spread is reported, and a structure
    that is not even regular with a symmetric neighbor relation is skipped
    with a warning rather than silently passed.
    """
    G = induced_walk_graph(R)
    deg = G.degrees()
    if deg.min() != deg.max():
        return TransitiveIdentityReport(
            skipped=True, warning=f"not regular (degrees {deg.min()}..{deg.max()}); "
            "identities need vertex transitivity", hitting_residual=float("nan"),
            radio_residual=float("nan"), resistance_residual=float("nan"),
            neighbor_spread=float("nan"), details={})
    nbrs = G.neighbors(v)
    w = nbrs[0]
    P = simple_walk_matrix(G)
    h_to_v = hitting_times(P, [v]).values
    h_uNv = hitting_times(P, nbrs + [v]).values[u]
    spread = float(h_to_v[nbrs].max() - h_to_v[nbrs].min())

    raw = radio_hitting_directed(R, u, [v]).raw
    R_mat = resistance_matrix(G)
    m = G.m

    res_hit = float(abs(h_to_v[u] - (h_uNv + h_to_v[w])))
    res_radio = float(abs(raw - (h_to_v[u] - h_to_v[w])))
    res_resist = float(abs(raw - m * (R_mat[u, v] - R_mat[w, v])))
    warning = ""
    if spread > tol:
        warning = (f"h(w,v) varies over N(v) by {spread:.3g}; structure is not "
                   "neighbor-transitive, identities hold only approximately")
    return TransitiveIdentityReport(
        skipped=False, warning=warning, hitting_residual=res_hit,
        radio_residual=res_radio, resistance_residual=res_resist,
        neighbor_spread=spread,
        details={"h_uv": float(h_to_v[u]), "h_wv": float(h_to_v[w]),
                 "h_uNv": float(h_uNv), "raw_radio": float(raw),
                 "m": m, "R_uv": float(R_mat[u, v]), "R_wv": float(R_mat[w, v])})
