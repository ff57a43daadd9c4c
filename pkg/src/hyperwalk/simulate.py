"""Seeded Monte-Carlo simulation of the vertex and edge processes.

Randomness contract: trial i of a run seeded with s consumes only the Philox
stream keyed by (s, i), in blocks of _BLOCK steps of two uniforms (edge
choice, landing choice). Trial outcomes are therefore pure functions of
(seed, trial) and reports are byte-identical under any worker count or
chunking. Aggregation runs over trial-index-ordered arrays with numpy's
pairwise summation.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DirectedHypergraph,
    DisconnectedError,
    Hypergraph,
    ValidationError,
    _lift_components,
    degrees,
)
from .exact import max_hitting, max_radio_hitting

_MASK64 = (1 << 64) - 1
_BLOCK = 128


def trial_stream(seed: int, trial: int) -> np.random.Generator:
    """Independent reproducible stream for one trial: Philox keyed (seed, trial)."""
    key = ((seed & _MASK64) << 64) | (trial & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))


_START_STREAM = _MASK64  # reserved trial index for start-vertex draws


def resolve_workers(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    return max(1, int(os.environ.get("HYPERWALK_THREADS", "1")))


@dataclass(frozen=True)
class WalkTables:
    """Padded index tables driving the vectorized step kernel."""

    n: int
    m: int
    choice: np.ndarray        # n x cmax incident edges/arcs per vertex
    choice_count: np.ndarray  # out-degree per vertex
    land: np.ndarray          # m x lmax landing candidates per edge/arc
    land_count: np.ndarray
    hear: np.ndarray          # m x hmax vertices hearing a transmission; pad = n
    directed: bool
    default_cap: int


def walk_tables(struct: Hypergraph | DirectedHypergraph) -> WalkTables:
    if isinstance(struct, DirectedHypergraph):
        n, m = struct.n, struct.m
        by_vertex: list[list[int]] = [[] for _ in range(n)]
        for j, (org, _) in enumerate(struct.arcs):
            for v in org:
                by_vertex[v].append(j)
        counts = np.array([len(a) for a in by_vertex], dtype=np.int64)
        if (counts == 0).any():
            raise ValidationError(f"vertex {int(np.argmax(counts == 0))} has no outgoing arc")
        land_sets = [list(dst) for _, dst in struct.arcs]
        hear_sets = [sorted(set(o) | set(d)) for o, d in struct.arcs]
        rank = max(len(h) for h in hear_sets)
        directed = True
    else:
        n, m = struct.n, struct.m
        if m < 1:
            raise ValidationError("walk needs at least one edge")
        d, _, rank = degrees(struct)
        if (d == 0).any():
            raise ValidationError(f"vertex {int(np.argmax(d == 0))} has degree 0")
        if len(_lift_components(struct)) != 1:
            raise DisconnectedError("hyper-graph is not connected",
                                    _lift_components(struct))
        by_vertex = [[] for _ in range(n)]
        for j, e in enumerate(struct.edges):
            for v in e:
                by_vertex[v].append(j)
        counts = np.array([len(a) for a in by_vertex], dtype=np.int64)
        land_sets = [list(e) for e in struct.edges]
        hear_sets = [list(e) for e in struct.edges]
        directed = False

    cmax = int(counts.max())
    choice = np.zeros((n, cmax), dtype=np.int64)
    for v, lst in enumerate(by_vertex):
        choice[v, :len(lst)] = lst
    land_count = np.array([len(s) for s in land_sets], dtype=np.int64)
    land = np.zeros((m, int(land_count.max())), dtype=np.int64)
    for j, s in enumerate(land_sets):
        land[j, :len(s)] = s
    hear = np.full((m, max(len(s) for s in hear_sets)), n, dtype=np.int64)
    for j, s in enumerate(hear_sets):
        hear[j, :len(s)] = s
    cap = 50 * 2 * m * n * max(rank, 1)
    return WalkTables(n=n, m=m, choice=choice, choice_count=counts,
                      land=land, land_count=land_count, hear=hear,
                      directed=directed, default_cap=cap)


def _run_chunk(tab: WalkTables, starts: np.ndarray, lo: int, hi: int, seed: int,
               cap: int, tracked: np.ndarray, mode: str,
               times: np.ndarray, finish: np.ndarray, capped: np.ndarray,
               trial_offset: int = 0) -> None:
    """Simulate trials [lo, hi); write rows of the shared output arrays."""
    n = tab.n
    count = hi - lo
    rngs = [trial_stream(seed, trial_offset + t) for t in range(lo, hi)]

    rows = np.arange(lo, hi)
    times[rows, starts[lo:hi]] = 0
    trk1 = np.zeros(n + 1, dtype=bool)
    trk1[:n] = tracked
    rem = np.full(count, int(tracked.sum()), dtype=np.int64)
    rem -= tracked[starts[lo:hi]].astype(np.int64)

    done0 = rem == 0
    finish[rows[done0]] = 0
    alive = np.nonzero(~done0)[0]
    x = starts[lo:hi].copy()
    tflat = times.ravel()

    t = 0
    while alive.size and t < cap:
        span = min(_BLOCK, cap - t)
        block = np.empty((alive.size, span, 2))
        for i, a in enumerate(alive):
            block[i] = rngs[a].random((span, 2))
        for s in range(span):
            t += 1
            xa = x[alive]
            u1 = block[:, s, 0]
            u2 = block[:, s, 1]
            cc = tab.choice_count[xa]
            ei = tab.choice[xa, np.minimum((u1 * cc).astype(np.int64), cc - 1)]
            lc = tab.land_count[ei]
            x2 = tab.land[ei, np.minimum((u2 * lc).astype(np.int64), lc - 1)]

            if mode == "heard":
                members = tab.hear[ei]
            else:
                members = x2[:, None]
            abs_rows = lo + alive
            flat = abs_rows[:, None] * (n + 1) + members
            got = tflat[flat]
            newly = got < 0
            tflat[flat] = np.where(newly, t, got)
            rem[alive] -= (newly & trk1[members]).sum(axis=1)

            x[alive] = x2
            done = rem[alive] == 0
            if done.any():
                finish[abs_rows[done]] = t
                keep = ~done
                alive = alive[keep]
                block = block[keep]
            if not alive.size:
                break
    if alive.size:
        abs_rows = lo + alive
        finish[abs_rows] = cap
        capped[abs_rows] = True


def _run_batch(tab: WalkTables, starts: np.ndarray, trials: int, seed: int,
               cap: int, tracked: np.ndarray, mode: str,
               workers: int | None = None,
               trial_offset: int = 0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Returns (times, finish, capped): first-visit or first-heard step per
    (trial, vertex) with -1 for never, the per-trial completion step, and the
    per-trial cap flags."""
    w = resolve_workers(workers)
    times = np.full((trials, tab.n + 1), -1, dtype=np.int64)
    finish = np.full(trials, -1, dtype=np.int64)
    capped = np.zeros(trials, dtype=bool)
    if trials == 0:
        return times[:, :-1], finish, capped
    bounds = np.linspace(0, trials, min(w, trials) + 1).astype(int)
    chunks = [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]
    if len(chunks) == 1:
        _run_chunk(tab, starts, 0, trials, seed, cap, tracked, mode,
                   times, finish, capped, trial_offset)
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            futs = [pool.submit(_run_chunk, tab, starts, lo, hi, seed, cap,
                                tracked, mode, times, finish, capped, trial_offset)
                    for lo, hi in chunks]
            for f in futs:
                f.result()
    return times[:, :-1], finish, capped


def sample_first_times(struct, start: int, trials: int, seed: int,
                       mode: str = "heard", targets=None, cap: int | None = None,
                       workers: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """First-visit ("visit") or first-heard ("heard") step of every vertex, per
    trial. The run stops once all `targets` (default: all vertices) are
    reached, so per-vertex columns outside `targets` may hold -1."""
    tab = walk_tables(struct)
    if cap is None:
        cap = tab.default_cap
    tracked = np.zeros(tab.n, dtype=bool)
    if targets is None:
        tracked[:] = True
    else:
        tracked[list(targets)] = True
    starts = np.full(trials, start, dtype=np.int64)
    times, _, capped = _run_batch(tab, starts, trials, seed, cap, tracked, mode, workers)
    return times, capped


# --- single trajectories ------------------------------------------------------

@dataclass(frozen=True)
class Trajectory:
    """One realized walk: the landed vertex and traversed edge per step."""

    start: int
    steps: tuple[tuple[int, int], ...]   # (edge id, landed vertex)

    def vertices(self) -> list[int]:
        return [self.start] + [v for _, v in self.steps]


def simulate_walk(struct, start: int, steps: int, seed: int) -> Trajectory:
    """Walk `steps` steps from `start`; deterministic for a fixed seed."""
    tab = walk_tables(struct)
    if not 0 <= start < tab.n:
        raise ValidationError(f"start vertex {start} out of range (n={tab.n})")
    if steps < 0:
        raise ValidationError(f"steps must be >= 0, got {steps}")
    rng = trial_stream(seed, 0)
    out = []
    x = start
    remaining = steps
    while remaining > 0:
        span = min(_BLOCK, remaining)
        block = rng.random((span, 2))
        for s in range(span):
            cc = int(tab.choice_count[x])
            ei = int(tab.choice[x, min(int(block[s, 0] * cc), cc - 1)])
            lc = int(tab.land_count[ei])
            x = int(tab.land[ei, min(int(block[s, 1] * lc), lc - 1)])
            out.append((ei, x))
        remaining -= span
    return Trajectory(start=start, steps=tuple(out))


# --- reports ------------------------------------------------------------------

@dataclass(frozen=True)
class SimReport:
    quantity: str
    trials: int
    mean: float
    variance: float
    ci95: float
    seed: int
    cap: int
    capped: int
    valid: bool
    start: str
    per_start: tuple[dict, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        d = {"quantity": self.quantity, "trials": self.trials, "mean": self.mean,
             "variance": self.variance, "ci95": self.ci95, "seed": self.seed,
             "cap": self.cap, "capped": self.capped, "valid": self.valid,
             "start": self.start}
        if self.per_start:
            d["per_start"] = [dict(p) for p in self.per_start]
        return d


def _summary(finish: np.ndarray) -> tuple[float, float, float]:
    mean = float(finish.mean())
    var = float(finish.var(ddof=1)) if finish.size > 1 else 0.0
    ci = 1.96 * math.sqrt(var / finish.size) if finish.size else 0.0
    return mean, var, ci


def _starts_for_policy(tab: WalkTables, struct, policy, trials: int, seed: int) -> list[tuple[str, np.ndarray]]:
    if policy == "all":
        return [(str(v), np.full(trials, v, dtype=np.int64)) for v in range(tab.n)]
    if policy == "stationary":
        if tab.directed:
            raise ValidationError("stationary start policy needs an undirected hyper-graph")
        d, _, _ = degrees(struct)
        pi = d / d.sum()
        rng = trial_stream(seed, _START_STREAM)
        return [("stationary", rng.choice(tab.n, size=trials, p=pi).astype(np.int64))]
    v = int(policy)
    if not 0 <= v < tab.n:
        raise ValidationError(f"start vertex {v} out of range (n={tab.n})")
    return [(str(v), np.full(trials, v, dtype=np.int64))]


def _estimate(struct, mode: str, quantity: str, start="all", trials: int = 1000,
              cap: int | None = None, seed: int = 0,
              workers: int | None = None) -> SimReport:
    tab = walk_tables(struct)
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    if cap is None:
        cap = tab.default_cap
    tracked = np.ones(tab.n, dtype=bool)
    per = []
    # each start consumes its own slice of the trial-index space
    for offset, (name, starts) in enumerate(_starts_for_policy(tab, struct, start, trials, seed)):
        _, finish, capped = _run_batch(tab, starts, trials, seed, cap, tracked,
                                       mode, workers, trial_offset=offset * trials)
        mean, var, ci = _summary(finish)
        per.append({"start": name, "mean": mean, "variance": var, "ci95": ci,
                    "capped": int(capped.sum())})
    worst = max(per, key=lambda p: p["mean"])
    total_capped = sum(p["capped"] for p in per)
    return SimReport(quantity=quantity, trials=trials, mean=worst["mean"],
                     variance=worst["variance"], ci95=worst["ci95"], seed=seed,
                     cap=cap, capped=total_capped,
                     valid=total_capped <= 0.01 * trials * len(per),
                     start=str(start),
                     per_start=tuple(per) if len(per) > 1 else ())


def estimate_cover(struct, start="all", trials: int = 1000, cap: int | None = None,
                   seed: int = 0, workers: int | None = None) -> SimReport:
    """Cover time estimate: steps until every vertex has been visited. With
    start="all" the report carries the worst start (max of per-start means)."""
    return _estimate(struct, "visit", "cover", start, trials, cap, seed, workers)


def estimate_radio_cover(struct, start="all", trials: int = 1000,
                         cap: int | None = None, seed: int = 0,
                         workers: int | None = None) -> SimReport:
    """Radio cover estimate: transmissions until every vertex has heard the
    walk (a vertex hears transmission t iff the t-th traversed edge, or the
    arc's org/dst, contains it; the start hears at 0)."""
    return _estimate(struct, "heard", "radio-cover", start, trials, cap, seed, workers)


@dataclass(frozen=True)
class SpeedupReport:
    h_max: float
    h_max_pair: tuple[int, int]
    h_radio_max: float
    h_radio_max_pair: tuple[int, int]
    hitting_speedup: float
    cover: SimReport
    radio_cover: SimReport
    cover_speedup: float
    cover_speedup_ci95: float
    seed: int

    def to_dict(self) -> dict:
        return {"h_max": self.h_max, "h_max_pair": list(self.h_max_pair),
                "h_radio_max": self.h_radio_max,
                "h_radio_max_pair": list(self.h_radio_max_pair),
                "hitting_speedup": self.hitting_speedup,
                "cover": self.cover.to_dict(),
                "radio_cover": self.radio_cover.to_dict(),
                "cover_speedup": self.cover_speedup,
                "cover_speedup_ci95": self.cover_speedup_ci95,
                "seed": self.seed}


def estimate_speedups(struct, trials: int = 1000, seed: int = 0,
                      cap: int | None = None, workers: int | None = None) -> SpeedupReport:
    """Hitting speedup from the exact solvers, cover speedup from Monte-Carlo
    with a delta-method confidence interval."""
    h_max, h_pair = max_hitting(struct)
    hr_max, hr_pair = max_radio_hitting(struct)
    cov = estimate_cover(struct, "all", trials, cap, seed, workers)
    rad = estimate_radio_cover(struct, "all", trials, cap, seed, workers)
    ratio = cov.mean / rad.mean if rad.mean > 0 else float("inf")
    if rad.mean > 0 and cov.mean > 0:
        rel = math.sqrt((cov.ci95 / cov.mean) ** 2 + (rad.ci95 / rad.mean) ** 2)
        ci = ratio * rel
    else:
        ci = 0.0
    return SpeedupReport(h_max=h_max, h_max_pair=h_pair, h_radio_max=hr_max,
                         h_radio_max_pair=hr_pair,
                         hitting_speedup=h_max / hr_max if hr_max > 0 else float("inf"),
                         cover=cov, radio_cover=rad, cover_speedup=ratio,
                         cover_speedup_ci95=ci, seed=seed)
