"""Transition operators of the vertex and edge processes.

Undirected: A = Dv^-1 W moves from a vertex to an incident edge, B = De^-1 W^T
from an edge to a member vertex; the vertex process is P = AB and the edge
process Q = BA, with stationary measures pi = d/Vol(V) and zeta = delta/Vol(E).

Directed: the origin incidence is row-normalized into A_fwd and the
destination incidence into B_bwd, giving P' = A_fwd B_bwd and Q' = B_bwd A_fwd.
(The origin/destination normalizations are the only reading under which the
products are transition matrices.)

Everything is dense; construction refuses state spaces beyond DENSE_STATE_CAP.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DirectedHypergraph,
    DisconnectedError,
    Hypergraph,
    ValidationError,
    _lift_components,
    degrees,
    directed_incidence,
    incidence_matrix,
    strongly_connected_components,
)

DENSE_STATE_CAP = 2000


@dataclass(frozen=True)
class WalkOperators:
    """Dense operators of a connected undirected hyper-graph."""

    A: np.ndarray        # n x m vertex-edge
    B: np.ndarray        # m x n edge-vertex
    P: np.ndarray        # n x n vertex process
    Q: np.ndarray        # m x m edge process
    pi: np.ndarray       # stationary vertex distribution
    zeta: np.ndarray     # stationary edge distribution

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.A.shape[1]


@dataclass(frozen=True)
class DirectedWalkOperators:
    A_fwd: np.ndarray    # n x m, row-normalized origin incidence
    B_bwd: np.ndarray    # m x n, row-normalized destination incidence (transposed)
    P: np.ndarray        # n x n vertex process
    Q: np.ndarray        # m x m edge process
    irreducible: bool    # False flags a reducible vertex chain; not fatal

    @property
    def n(self) -> int:
        return self.A_fwd.shape[0]

    @property
    def m(self) -> int:
        return self.A_fwd.shape[1]


@dataclass(frozen=True)
class CheckReport:
    name: str
    deviation: float
    tol: float
    passed: bool
    notes: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "deviation": self.deviation, "tol": self.tol,
                "passed": self.passed, "notes": self.notes}


def _guard_size(n: int, m: int) -> None:
    if n + m > DENSE_STATE_CAP:
        raise ValidationError(
            f"dense operators limited to n+m <= {DENSE_STATE_CAP}, got n+m={n + m}")


def build_operators(H: Hypergraph) -> WalkOperators:
    """Build A, B, P=AB, Q=BA and the stationary vectors of a connected H."""
    if H.m < 1:
        raise ValidationError("walk construction needs at least one edge")
    _guard_size(H.n, H.m)
    d, delta, _ = degrees(H)
    if (d == 0).any():
        zero = int(np.argmax(d == 0))
        raise ValidationError(f"vertex {zero} has degree 0")
    comps = _lift_components(H)
    if len(comps) != 1:
        raise DisconnectedError(
            f"hyper-graph has {len(comps)} components", comps)
    W = incidence_matrix(H)
    A = W / d[:, None]
    B = W.T / delta[:, None]
    vol = float(d.sum())
    return WalkOperators(A=A, B=B, P=A @ B, Q=B @ A,
                         pi=d / vol, zeta=delta / vol)


def build_directed_operators(D: DirectedHypergraph) -> DirectedWalkOperators:
    """Build A_fwd, B_bwd, P', Q' for a directed hyper-graph.

    Requires every vertex to originate at least one arc. A reducible vertex
    chain is flagged via `irreducible=False`; downstream hitting solvers then
    rely on reachability masks.
    """
    if D.m < 1:
        raise ValidationError("walk construction needs at least one arc")
    _guard_size(D.n, D.m)
    Wo, Wd = directed_incidence(D)
    dout = Wo.sum(axis=1)
    if (dout == 0).any():
        zero = int(np.argmax(dout == 0))
        raise ValidationError(f"vertex {zero} has no outgoing arc")
    din = Wd.sum(axis=0)
    A_fwd = Wo / dout[:, None]
    B_bwd = Wd.T / din[:, None]
    P = A_fwd @ B_bwd
    adj = [list(np.nonzero(P[v] > 0)[0]) for v in range(D.n)]
    irreducible = len(strongly_connected_components(adj)) == 1
    return DirectedWalkOperators(A_fwd=A_fwd, B_bwd=B_bwd, P=P,
                                 Q=B_bwd @ A_fwd, irreducible=irreducible)


def stationary(H: Hypergraph) -> tuple[np.ndarray, np.ndarray]:
    """(pi, zeta) = (d/Vol(V), delta/Vol(E)) for connected H."""
    ops = build_operators(H)
    return ops.pi, ops.zeta


def _vertex_edge_pair(ops) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(ops, DirectedWalkOperators):
        return ops.A_fwd, ops.B_bwd
    return ops.A, ops.B


def coupling_check(H: Hypergraph | WalkOperators | DirectedWalkOperators,
                   t: int, tol: float = 1e-12) -> CheckReport:
    """Verify P^t = A Q^(t-1) B and Q^t = B P^(t-1) A for every basis start
    (so the vertex and edge processes stay coupled for t steps)."""
    if t < 1:
        raise ValidationError(f"coupling_check needs t >= 1, got {t}")
    ops = build_operators(H) if isinstance(H, Hypergraph) else H
    A, B = _vertex_edge_pair(ops)
    dev_v = np.abs(np.linalg.matrix_power(ops.P, t)
                   - A @ np.linalg.matrix_power(ops.Q, t - 1) @ B).max()
    dev_e = np.abs(np.linalg.matrix_power(ops.Q, t)
                   - B @ np.linalg.matrix_power(ops.P, t - 1) @ A).max()
    dev = float(max(dev_v, dev_e))
    return CheckReport("coupling", dev, tol, dev <= tol, f"t={t}")


def _nonzero_spectrum(M: np.ndarray, tol: float) -> np.ndarray:
    ev = np.linalg.eigvals(M)
    ev = ev[np.abs(ev) > tol]
    order = np.lexsort((ev.imag, ev.real))
    return ev[order]


def spectrum_check(H: Hypergraph | WalkOperators | DirectedWalkOperators,
                   tol: float = 1e-8) -> CheckReport:
    """Nonzero eigenvalues of the vertex and edge processes must coincide as
    multisets. Eigenvalues with |lambda| <= tol count as zero (the spectral
    radius of a stochastic matrix is 1, so the cutoff is already relative)."""
    ops = build_operators(H) if isinstance(H, Hypergraph) else H
    ev_p = _nonzero_spectrum(ops.P, tol)
    ev_q = _nonzero_spectrum(ops.Q, tol)
    if len(ev_p) != len(ev_q):
        return CheckReport("spectrum", float("inf"), tol, False,
                           f"count mismatch: {len(ev_p)} vs {len(ev_q)}")
    dev = float(np.abs(ev_p - ev_q).max()) if len(ev_p) else 0.0
    return CheckReport("spectrum", dev, tol, dev <= tol,
                       f"{len(ev_p)} nonzero eigenvalues paired")


def lift_walk_check(H: Hypergraph, t: int = 1, tol: float = 1e-12) -> CheckReport:
    """The lift chain P_B = [[0, A], [B, 0]] observed every second step must
    reproduce the hyper-graph processes: P_B^(2t) has blocks P^t and Q^t."""
    if t < 1:
        raise ValidationError(f"lift_walk_check needs t >= 1, got {t}")
    ops = build_operators(H)
    n, m = ops.n, ops.m
    PB = np.zeros((n + m, n + m))
    PB[:n, n:] = ops.A
    PB[n:, :n] = ops.B
    PB2t = np.linalg.matrix_power(PB, 2 * t)
    dev_v = np.abs(PB2t[:n, :n] - np.linalg.matrix_power(ops.P, t)).max()
    dev_e = np.abs(PB2t[n:, n:] - np.linalg.matrix_power(ops.Q, t)).max()
    dev_off = max(np.abs(PB2t[:n, n:]).max(), np.abs(PB2t[n:, :n]).max())
    dev = float(max(dev_v, dev_e, dev_off))
    return CheckReport("lift-walk", dev, tol, dev <= tol, f"t={t}")
