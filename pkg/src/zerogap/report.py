"""Alpha sweeps and report rendering.

A sweep evaluates sqrt(A) over a grid of heights alpha for each
(group, delta) curve and writes one delimited report (CSV or JSON) or a
self-contained SVG plot.  Curves run concurrently; rows are assembled in
configuration order so the output is byte-deterministic regardless of
scheduling.  The CSV report can additionally be rendered to a PNG figure
next to the data file.

Per-curve solvers are shared: a numeric-kernel curve assembles one Gram
covering the whole alpha range instead of one per point, and a
variational curve reuses a single factorized Gram across all alphas.
"""

from __future__ import annotations

import json
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .api import CROSS_CHECK_RTOL, ROUTES, CrossRouteMismatch
from .debranges import DetProblem, detroot_value
from .density import SymmetryGroup, as_group
from .gram import NodeWindow, assemble_gram
from .kernel import (
    CLOSED_FORM_GROUPS,
    default_lambda_max,
    extremal_via_kernel,
    kernel_numeric,
)
from .numerics import FactorizationError, NoRootInRange
from .pw_core import PoleProximityError, validate_delta
from .variational import ExtremalSolution, ProblemSpec, variational_value

__all__ = [
    "CSV_HEADER",
    "DEFAULT_DELTAS",
    "FORMATS",
    "SweepConfig",
    "SweepRow",
    "run_sweep",
    "shared_kernel_surrogate",
    "shared_variational_gram",
    "render_csv",
    "render_json",
    "render_svg",
    "render_figure",
    "bandwidth_warning",
]

DEFAULT_DELTAS = (1.0, 4.0 / 3.0, 1.5, 2.0)
FORMATS = ("csv", "json", "svg")
CSV_HEADER = "group,delta,alpha,k,sqrtA,aValue,route,nodes,residual"

# Extra basis nodes on each side of a shared numeric-kernel Gram.
KERNEL_MARGIN_NODES = 600

# Extra nodes on each side of a shared variational window.  The window
# truncation error is ~0.5/margin relative (measured against the
# closed-form routes, worst case over k <= 3), so 810 keeps it near
# 5e-4, comfortably inside the 1e-3 cross-route gate.
VARIATIONAL_MARGIN_NODES = 810

_ERROR_CODES = (
    (CrossRouteMismatch, "cross-route-mismatch"),
    (FactorizationError, "gram-factorization"),
    (NoRootInRange, "no-root-in-range"),
    (PoleProximityError, "pole-proximity"),
    (ArithmeticError, "nonpositive-value"),
    (ValueError, "invalid-problem"),
)


def _error_code(exc: BaseException) -> str:
    for etype, code in _ERROR_CODES:
        if isinstance(exc, etype):
            return code
    return "internal-error"


def bandwidth_warning(group: SymmetryGroup, delta: float) -> str | None:
    """Caveat for delta > 2 with the oscillatory weights, or None.

    The sin-ratio densities for Sp, SO(even), SO(odd) are standard only
    for bandwidths up to 2; beyond that the computation proceeds but its
    meaning is not settled, so callers surface this as a warning.
    """
    if delta > 2.0 and group in (
        SymmetryGroup.SYMPLECTIC,
        SymmetryGroup.SO_EVEN,
        SymmetryGroup.SO_ODD,
    ):
        return (
            f"the {group} weight is standard only for delta <= 2; "
            f"values at delta = {delta:g} are exploratory"
        )
    return None


@dataclass(frozen=True)
class SweepConfig:
    """One sweep: a grid of alphas per (group, delta) curve."""

    groups: tuple
    deltas: tuple = DEFAULT_DELTAS
    alpha_min: float = 0.0
    alpha_max: float = 4.0
    alpha_step: float = 0.05
    k: int = 1
    route: str = "auto"
    out_path: str = "sweep.csv"
    format: str = "csv"

    def __post_init__(self):
        object.__setattr__(
            self, "groups", tuple(as_group(g) for g in self.groups)
        )
        object.__setattr__(
            self, "deltas", tuple(validate_delta(d) for d in self.deltas)
        )
        if not self.groups or not self.deltas:
            raise ValueError("sweep needs at least one group and one delta")
        if self.alpha_step <= 0.0:
            raise ValueError("alpha_step must be positive")
        if self.alpha_min > self.alpha_max:
            raise ValueError("alpha_min must not exceed alpha_max")
        if self.route not in ROUTES:
            raise ValueError(f"unknown route {self.route!r}")
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")
        if self.k < 1 or self.k != int(self.k):
            raise ValueError("k must be a positive integer")

    def alpha_grid(self) -> np.ndarray:
        """Grid points alpha_min + j*step, rounded to clean decimals."""
        count = int(np.floor((self.alpha_max - self.alpha_min) / self.alpha_step + 1e-9))
        grid = self.alpha_min + self.alpha_step * np.arange(count + 1)
        return np.round(grid, 12)


@dataclass
class SweepRow:
    """One output row; a failed point carries an error code instead of values."""

    group: SymmetryGroup
    delta: float
    alpha: float
    k: int
    sqrt_a: float | None = None
    a_value: float | None = None
    route: str | None = None
    nodes: int | None = None
    residual: float | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @classmethod
    def from_solution(cls, group, delta, alpha, k, sol: ExtremalSolution):
        return cls(
            group=group,
            delta=delta,
            alpha=alpha,
            k=k,
            sqrt_a=sol.sqrt_a,
            a_value=sol.a_value,
            route=sol.route,
            nodes=int(sol.diagnostics.get("nodes", 0)),
            residual=float(sol.diagnostics.get("residual", 0.0)),
        )


def _thread_count() -> int:
    raw = os.environ.get("EXTREMAL_THREADS", "").strip()
    if raw:
        try:
            value = int(raw)
        except ValueError as exc:
            raise ValueError(
                f"EXTREMAL_THREADS must be an integer, got {raw!r}"
            ) from exc
        if value < 1:
            raise ValueError("EXTREMAL_THREADS must be >= 1")
        return value
    return os.cpu_count() or 1


def shared_kernel_surrogate(group, delta, alphas):
    """One Gram-backed kernel evaluator covering every scan in the curve."""
    ends = (float(alphas[0]), float(alphas[-1]))
    lo = min(min(0.0, a - default_lambda_max(delta, a)) for a in ends)
    hi = max(max(0.0, a + default_lambda_max(delta, a)) for a in ends)
    window = NodeWindow(
        int(np.floor(delta * lo)) - KERNEL_MARGIN_NODES,
        int(np.ceil(delta * hi)) + KERNEL_MARGIN_NODES,
    )
    return kernel_numeric(group, delta, window)


def shared_variational_gram(group, delta, alphas, margin_nodes=VARIATIONAL_MARGIN_NODES):
    """One factorized Gram reused by every variational solve on the curve."""
    lo = min(0.0, float(np.min(alphas)))
    hi = max(0.0, float(np.max(alphas)))
    window = NodeWindow(
        int(np.floor(delta * lo)) - margin_nodes,
        int(np.ceil(delta * hi)) + margin_nodes,
    )
    return assemble_gram(group, delta, window)


def _sweep_curve(cfg: SweepConfig, group, delta, alphas) -> list[SweepRow]:
    """All rows of one (group, delta) curve, in grid order."""
    note = bandwidth_warning(group, delta)
    if note is not None:
        warnings.warn(note, UserWarning, stacklevel=2)

    k = cfg.k
    rows: list[SweepRow] = []

    def fail_all(exc):
        code = _error_code(exc)
        return [
            SweepRow(group, delta, float(a), k, route=None, error=code)
            for a in alphas
        ]

    use_kernel = cfg.route == "kernel" or (cfg.route == "auto" and k == 1)
    if use_kernel and k != 1:
        return fail_all(ValueError("kernel route is k = 1 only"))

    if use_kernel:
        closed = group in CLOSED_FORM_GROUPS or (
            delta == 1.0
            and group in (SymmetryGroup.SO_EVEN, SymmetryGroup.SO_ODD)
        )
        surrogate = None
        if not closed:
            try:
                surrogate = shared_kernel_surrogate(group, delta, alphas)
            except Exception as exc:  # noqa: BLE001 - per-curve error rows
                return fail_all(exc)
        for alpha in alphas:
            alpha = float(alpha)
            try:
                sol = extremal_via_kernel(group, delta, alpha, surrogate=surrogate)
                rows.append(SweepRow.from_solution(group, delta, alpha, k, sol))
            except Exception as exc:  # noqa: BLE001
                rows.append(
                    SweepRow(group, delta, alpha, k, route="kernel", error=_error_code(exc))
                )
        if cfg.route == "auto" and surrogate is not None:
            _cross_check_endpoints(group, delta, alphas, rows, surrogate)
        return rows

    if cfg.route == "debranges" and group is not SymmetryGroup.UNITARY:
        return fail_all(ValueError("determinant route applies to U only"))

    if cfg.route == "debranges":
        for alpha in alphas:
            alpha = float(alpha)
            try:
                sol = detroot_value(DetProblem(delta, alpha, k))
                rows.append(SweepRow.from_solution(group, delta, alpha, k, sol))
            except Exception as exc:  # noqa: BLE001
                rows.append(
                    SweepRow(group, delta, alpha, k, route="debranges", error=_error_code(exc))
                )
        return rows

    # Variational curve (explicit, or the k >= 2 automatic path), with
    # one shared Gram and, for U under auto, the determinant cross-check.
    try:
        gram = shared_variational_gram(group, delta, alphas)
    except Exception as exc:  # noqa: BLE001
        return fail_all(exc)
    for alpha in alphas:
        alpha = float(alpha)
        try:
            spec = ProblemSpec(
                group=group, delta=delta, alpha=alpha, k=k, window=gram.window
            )
            sol = variational_value(spec, gram=gram)
            if cfg.route == "auto" and group is SymmetryGroup.UNITARY:
                ref = detroot_value(DetProblem(delta, alpha, k))
                rel = abs(sol.a_value - ref.a_value) / abs(ref.a_value)
                if rel > CROSS_CHECK_RTOL:
                    raise CrossRouteMismatch(
                        f"determinant cross-check off by {rel:.3e} at alpha={alpha}"
                    )
            rows.append(SweepRow.from_solution(group, delta, alpha, k, sol))
        except Exception as exc:  # noqa: BLE001
            rows.append(
                SweepRow(group, delta, alpha, k, route="variational", error=_error_code(exc))
            )
    return rows


def _cross_check_endpoints(group, delta, alphas, rows, surrogate):
    """Variational check of the first and last numeric-kernel rows.

    The check runs on the kernel surrogate's own Gram, so both routes
    measure the same window-restricted quantity and any disagreement is
    an implementation inconsistency, not truncation.  A disagreement
    marks the affected row as failed rather than raising: interior rows
    stand on their own and the 90% success rule decides the exit status.
    """
    gram = surrogate.gram
    for pos in {0, len(alphas) - 1}:
        row = rows[pos]
        if not row.ok:
            continue
        spec = ProblemSpec(
            group=group, delta=delta, alpha=float(alphas[pos]), k=1, window=gram.window
        )
        try:
            check = variational_value(spec, gram=gram)
        except Exception as exc:  # noqa: BLE001
            rows[pos] = replace(row, error=_error_code(exc))
            continue
        rel = abs(check.a_value - row.a_value) / abs(row.a_value)
        if rel > CROSS_CHECK_RTOL:
            rows[pos] = replace(
                row, sqrt_a=None, a_value=None, residual=None, error="cross-route-mismatch"
            )


def run_sweep(cfg: SweepConfig, figure: bool = False) -> list[SweepRow]:
    """Execute the sweep, write cfg.out_path, and return the rows.

    With figure=True a CSV or JSON sweep also renders a PNG plot next to
    the data file (same stem).  Returns all rows in configuration order.
    """
    alphas = cfg.alpha_grid()
    curves = [(g, d) for g in cfg.groups for d in cfg.deltas]
    workers = min(_thread_count(), len(curves))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_sweep_curve, cfg, g, d, alphas) for (g, d) in curves
            ]
            per_curve = [f.result() for f in futures]
    else:
        per_curve = [_sweep_curve(cfg, g, d, alphas) for (g, d) in curves]
    rows = [row for curve_rows in per_curve for row in curve_rows]

    if cfg.format == "csv":
        text = render_csv(rows)
    elif cfg.format == "json":
        text = render_json(rows)
    else:
        text = render_svg(rows, cfg)
    with open(cfg.out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    if figure and cfg.format in ("csv", "json"):
        render_figure(rows, os.path.splitext(cfg.out_path)[0] + ".png")
    return rows


# ----------------------------------------------------------------------
# Renderers.  All numeric fields are formatted with repr (shortest
# round-trip), so identical values always produce identical bytes.
# ----------------------------------------------------------------------


def _row_fields(row: SweepRow) -> list[str]:
    fields = [
        str(row.group),
        repr(float(row.delta)),
        repr(float(row.alpha)),
        str(row.k),
    ]
    if row.ok:
        fields += [
            repr(float(row.sqrt_a)),
            repr(float(row.a_value)),
            row.route,
            str(int(row.nodes)),
            repr(float(row.residual)),
        ]
    else:
        fields += ["", "", row.route or "", "", "", row.error]
    return fields


def render_csv(rows: list[SweepRow]) -> str:
    lines = [CSV_HEADER]
    lines += [",".join(_row_fields(row)) for row in rows]
    return "\n".join(lines) + "\n"


def render_json(rows: list[SweepRow]) -> str:
    payload = []
    for row in rows:
        record = {
            "group": str(row.group),
            "delta": float(row.delta),
            "alpha": float(row.alpha),
            "k": row.k,
            "sqrtA": None if row.sqrt_a is None else float(row.sqrt_a),
            "aValue": None if row.a_value is None else float(row.a_value),
            "route": row.route,
            "nodes": row.nodes,
            "residual": None if row.residual is None else float(row.residual),
        }
        if row.error is not None:
            record["error"] = row.error
        payload.append(record)
    return json.dumps(payload, indent=2) + "\n"


_GROUP_COLORS = {
    "U": "#1f77b4",
    "Sp": "#d62728",
    "O": "#2ca02c",
    "SO(even)": "#9467bd",
    "SO(odd)": "#ff7f0e",
}


def _polyline_runs(rows):
    """Consecutive ok-row runs (error rows break the line)."""
    run = []
    for row in rows:
        if row.ok:
            run.append(row)
        elif run:
            yield run
            run = []
    if run:
        yield run


def render_svg(rows: list[SweepRow], cfg: SweepConfig) -> str:
    """Self-contained 800x500 plot: one panel per delta, one polyline per
    group, linear axes labeled alpha and sqrt(A)."""
    width, height = 800, 500
    deltas = list(dict.fromkeys(r.delta for r in rows))
    groups = list(dict.fromkeys(r.group for r in rows))
    by_curve = {}
    for row in rows:
        by_curve.setdefault((row.group, row.delta), []).append(row)

    x_lo, x_hi = cfg.alpha_min, max(cfg.alpha_max, cfg.alpha_min + cfg.alpha_step)
    y_values = [r.sqrt_a for r in rows if r.ok]
    y_hi = 1.05 * max(y_values) if y_values else 1.0
    if y_hi <= 0.0:
        y_hi = 1.0

    ncols = 2 if len(deltas) > 1 else 1
    nrows = (len(deltas) + ncols - 1) // ncols
    legend_h = 26
    cell_w = width / ncols
    cell_h = (height - legend_h) / nrows
    pad_l, pad_r, pad_t, pad_b = 46.0, 10.0, 20.0, 32.0

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    # Legend strip.
    x_cursor = 14.0
    for group in groups:
        color = _GROUP_COLORS.get(str(group), "#333333")
        out.append(
            f'<line x1="{x_cursor:.1f}" y1="14" x2="{x_cursor + 22:.1f}" y2="14" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{x_cursor + 27:.1f}" y="18" font-family="sans-serif" '
            f'font-size="12">{group}</text>'
        )
        x_cursor += 34 + 9 * len(str(group))

    for p, delta in enumerate(deltas):
        col, prow = p % ncols, p // ncols
        ox = col * cell_w + pad_l
        oy = legend_h + prow * cell_h + pad_t
        pw = cell_w - pad_l - pad_r
        ph = cell_h - pad_t - pad_b

        def sx(a):
            return ox + (a - x_lo) / (x_hi - x_lo) * pw

        def sy(v):
            return oy + ph - v / y_hi * ph

        out.append(
            f'<rect x="{ox:.1f}" y="{oy:.1f}" width="{pw:.1f}" height="{ph:.1f}" '
            f'fill="none" stroke="#888888"/>'
        )
        out.append(
            f'<text x="{ox + pw / 2:.1f}" y="{oy - 6:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">Δ = {delta:.4g}</text>'
        )
        for i in range(5):
            a = x_lo + i * (x_hi - x_lo) / 4
            v = i * y_hi / 4
            out.append(
                f'<line x1="{sx(a):.1f}" y1="{oy + ph:.1f}" x2="{sx(a):.1f}" '
                f'y2="{oy + ph + 4:.1f}" stroke="#888888"/>'
            )
            out.append(
                f'<text x="{sx(a):.1f}" y="{oy + ph + 15:.1f}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="10">{a:.4g}</text>'
            )
            out.append(
                f'<line x1="{ox - 4:.1f}" y1="{sy(v):.1f}" x2="{ox:.1f}" '
                f'y2="{sy(v):.1f}" stroke="#888888"/>'
            )
            out.append(
                f'<text x="{ox - 7:.1f}" y="{sy(v) + 3:.1f}" text-anchor="end" '
                f'font-family="sans-serif" font-size="10">{v:.3g}</text>'
            )
        out.append(
            f'<text x="{ox + pw / 2:.1f}" y="{oy + ph + 28:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">α</text>'
        )
        out.append(
            f'<text x="{ox - 36:.1f}" y="{oy + 10:.1f}" font-family="sans-serif" '
            f'font-size="12">√\U0001d538</text>'
        )
        for group in groups:
            curve = by_curve.get((group, delta))
            if not curve:
                continue
            color = _GROUP_COLORS.get(str(group), "#333333")
            for run in _polyline_runs(curve):
                points = " ".join(
                    f"{sx(r.alpha):.1f},{sy(r.sqrt_a):.1f}" for r in run
                )
                if len(run) == 1:
                    r = run[0]
                    out.append(
                        f'<circle cx="{sx(r.alpha):.1f}" cy="{sy(r.sqrt_a):.1f}" '
                        f'r="1.5" fill="{color}"/>'
                    )
                else:
                    out.append(
                        f'<polyline points="{points}" fill="none" '
                        f'stroke="{color}" stroke-width="1.5"/>'
                    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_figure(rows: list[SweepRow], path: str) -> None:
    """PNG companion plot for a finished sweep (one axes per delta)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    deltas = list(dict.fromkeys(r.delta for r in rows))
    groups = list(dict.fromkeys(r.group for r in rows))
    ncols = 2 if len(deltas) > 1 else 1
    nrows = (len(deltas) + ncols - 1) // ncols
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(8, 2.6 * nrows + 1), squeeze=False, sharex=True
    )
    for p, delta in enumerate(deltas):
        ax = axes[p // ncols][p % ncols]
        for group in groups:
            pts = [
                (r.alpha, r.sqrt_a)
                for r in rows
                if r.group == group and r.delta == delta and r.ok
            ]
            if not pts:
                continue
            xs, ys = zip(*pts)
            ax.plot(
                xs, ys, label=str(group), color=_GROUP_COLORS.get(str(group))
            )
        ax.set_title(f"$\\Delta$ = {delta:.4g}", fontsize=10)
        ax.set_xlabel(r"$\alpha$")
        ax.set_ylabel(r"$\sqrt{\mathbb{A}}$")
        ax.grid(True, alpha=0.3)
    for p in range(len(deltas), nrows * ncols):
        axes[p // ncols][p % ncols].set_visible(False)
    handles, labels = axes[0][0].get_legend_handles_labels()
    if handles:
        fig.legend(handles, labels, loc="upper center", ncol=len(labels), fontsize=9)
    fig.tight_layout(rect=(0, 0, 1, 0.93))
    fig.savefig(path, dpi=120)
    plt.close(fig)
