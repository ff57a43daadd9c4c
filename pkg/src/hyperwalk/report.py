"""Machine-readable report emission and figure rendering.

JSON and CSV artifacts serialize every float with 17 significant digits so
values round-trip exactly and repeated seeded runs are byte-identical. The
report paths of the CLI additionally render matplotlib figures next to the
delimited output (PNG; figures are a convenience and carry no data the
JSON/CSV does not).

Infinite values are encoded as null in JSON (alongside explicit reachability
flags where they can occur) and as "inf" in CSV.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np


def fmt_float(x: float) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _json_scalar(x) -> str:
    import json as _json
    if x is None:
        return "null"
    if isinstance(x, bool) or isinstance(x, np.bool_):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return "null"
        return format(x, ".17g")
    if isinstance(x, str):
        return _json.dumps(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def to_json(obj, indent: int = 0) -> str:
    """Strict JSON with .17g floats; dict key order is preserved."""
    pad = "  " * indent
    pad2 = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad2}{_json_scalar(str(k))}: {to_json(v, indent + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)) or isinstance(obj, np.ndarray):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else list(obj)
        if not seq:
            return "[]"
        items = [f"{pad2}{to_json(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return _json_scalar(obj)


def write_json(obj, path) -> None:
    Path(path).write_text(to_json(obj) + "\n", encoding="utf-8")


def write_csv(rows: list[dict], path, header: list[str] | None = None) -> None:
    """CSV with .17g floats; header from the first row when not given."""
    import csv
    if header is None:
        header = list(rows[0].keys()) if rows else []
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_csv_cell(row.get(k)) for k in header])


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer, float, np.floating)):
        return fmt_float(x)
    return str(x)


def dump_matrix_csv(M: np.ndarray, path) -> None:
    """Row-major CSV dump of a dense matrix, 17 significant digits."""
    with open(path, "w", encoding="utf-8") as fh:
        for row in np.atleast_2d(M):
            fh.write(",".join(format(float(v), ".17g") for v in row) + "\n")


# --- figures -------------------------------------------------------------------

def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def figure_path(out_path, tag: str) -> Path:
    p = Path(out_path)
    return p.with_name(p.stem + f".{tag}.png")


def render_histogram(values, title: str, xlabel: str, out_path) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(np.asarray(values), bins=40, color="#4878a8", edgecolor="white")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("trials")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return Path(out_path)


def render_trend(rows: list[dict], x_key: str, y_keys: list[str], title: str,
                 out_path, logx: bool = False, logy: bool = False,
                 bound: float | None = None) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [r[x_key] for r in rows]
    for y in y_keys:
        ax.plot(xs, [r.get(y) for r in rows], marker="o", label=y)
    if bound is not None:
        ax.axhline(bound, color="crimson", linestyle="--", label="bound")
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(x_key)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return Path(out_path)


def render_bound_bars(reports: list[dict], title: str, out_path) -> Path:
    """Measured value vs bound per check, log scale."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(max(6, 1.1 * len(reports)), 4))
    names = [r["name"] for r in reports]
    measured = [r["measured"] for r in reports]
    bound = [r["bound"] for r in reports]
    pos = np.arange(len(reports))
    ax.bar(pos - 0.2, measured, width=0.4, label="measured", color="#4878a8")
    ax.bar(pos + 0.2, bound, width=0.4, label="bound", color="#d08048")
    ax.set_xticks(pos)
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    finite = [v for v in measured + bound if v and v > 0 and math.isfinite(v)]
    if finite and max(finite) / min(finite) > 50:
        ax.set_yscale("log")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return Path(out_path)
