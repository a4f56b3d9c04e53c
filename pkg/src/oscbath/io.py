"""CSV and SVG emission plus the matching readers.

All numeric CSV fields use 17 significant digits, which round-trips float64
exactly, so re-reading an emitted file reproduces the arrays bitwise.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .bath import BathRealization
from .dynamics import Trajectory
from .errors import ConfigError
from .modes import GroundState, PhasePointBatch


def format_float(x: float) -> str:
    return f"{float(x):.17g}"


def write_bath_csv(path, bath: BathRealization) -> None:
    """Mode table: alpha,omega,gamma,gamma_bar,weight."""
    weights = bath.weights
    lines = ["alpha,omega,gamma,gamma_bar,weight"]
    for i in range(bath.n_modes):
        lines.append(
            f"{i + 1},{format_float(bath.omega[i])},{format_float(bath.gamma[i])},"
            f"{format_float(bath.gamma_bar[i])},{format_float(weights[i])}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_mode_table_csv(path, gs: GroundState) -> None:
    """Rotation table: alpha,theta,omega_plus,omega_minus."""
    lines = ["alpha,theta,omega_plus,omega_minus"]
    for i, mode in enumerate(gs.modes):
        lines.append(
            f"{i + 1},{format_float(mode.theta)},{format_float(mode.omega_plus)},"
            f"{format_float(mode.omega_minus)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_trajectory_csv(path, traj: Trajectory, seed: int) -> None:
    """Time series with a metadata comment: t,q,qdot."""
    t = traj.t
    lines = [
        f"# method={traj.label} dt={format_float(traj.dt)} seed={seed}",
        "t,q,qdot",
    ]
    for i in range(t.size):
        lines.append(
            f"{format_float(t[i])},{format_float(traj.q[i])},{format_float(traj.qdot[i])}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_trajectory_csv(path) -> tuple[Trajectory, int]:
    """Parse a trajectory CSV back into a Trajectory and its seed."""
    text = Path(path).read_text()
    meta = {}
    header = None
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line.lstrip("# ").split():
                if "=" in token:
                    key, _, value = token.partition("=")
                    meta[key] = value
            continue
        if header is None:
            header = line.split(",")
            continue
        rows.append([float(v) for v in line.split(",")])
    if header != ["t", "q", "qdot"]:
        raise ConfigError(f"{path}: expected header t,q,qdot, got {header}")
    if "method" not in meta or "dt" not in meta:
        raise ConfigError(f"{path}: missing '# method=... dt=... seed=...' metadata")
    data = np.asarray(rows, dtype=float)
    traj = Trajectory(
        dt=float(meta["dt"]),
        t0=float(data[0, 0]),
        q=data[:, 1],
        qdot=data[:, 2],
        label=meta["method"],
    )
    return traj, int(meta.get("seed", 0))


def write_columns_csv(path, header: list[str], columns: list[np.ndarray]) -> None:
    """Generic numeric table with one named column per array."""
    n = columns[0].size
    lines = [",".join(header)]
    for i in range(n):
        lines.append(",".join(format_float(col[i]) for col in columns))
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv_columns(path) -> dict[str, np.ndarray]:
    """Read any emitted CSV (comments skipped) into named float columns."""
    header = None
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = line.split(",")
            continue
        rows.append([float(v) for v in line.split(",")])
    if header is None:
        raise ConfigError(f"{path}: no header row found")
    data = np.asarray(rows, dtype=float)
    return {name: data[:, j] for j, name in enumerate(header)}


def write_metrics_csv(path, metrics: dict[str, float]) -> None:
    lines = ["metric,value"]
    for name, value in metrics.items():
        lines.append(f"{name},{format_float(value)}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_samples_csv(path, batch: PhasePointBatch, include_momenta: bool = False) -> None:
    """Sample dump: sample_id,q,x_1..x_N (momenta columns optional)."""
    n_modes = batch.x.shape[1]
    header = ["sample_id", "q"]
    if include_momenta:
        header.append("p")
    header.extend(f"x_{a + 1}" for a in range(n_modes))
    if include_momenta:
        header.extend(f"p_{a + 1}" for a in range(n_modes))
    lines = [",".join(header)]
    for i in range(len(batch)):
        fields = [str(i), format_float(batch.q[i])]
        if include_momenta:
            fields.append(format_float(batch.p[i]))
        fields.extend(format_float(v) for v in batch.x[i])
        if include_momenta:
            fields.extend(format_float(v) for v in batch.p_bath[i])
        lines.append(",".join(fields))
    Path(path).write_text("\n".join(lines) + "\n")


def write_force_scan_csv(path, q_values, x_fixed, gs, bath, slice_label: str) -> None:
    """1-D scan over q at fixed bath coordinates: q,x_slice_spec,V,Q,force."""
    from .modes import PhasePoint
    from .potentials import bohmian_force, classical_potential, quantum_potential

    x_fixed = np.asarray(x_fixed, dtype=float)
    zeros = np.zeros_like(x_fixed)
    lines = ["q,x_slice_spec,V,Q,force"]
    for q in q_values:
        point = PhasePoint(q=float(q), p=0.0, x=x_fixed, p_bath=zeros)
        v = classical_potential(point, gs.omega_sq, bath)
        quantum = quantum_potential(point, gs)
        force = bohmian_force(point, gs, bath)
        lines.append(
            f"{format_float(q)},{slice_label},{format_float(v)},"
            f"{format_float(quantum)},{format_float(force)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


SVG_WIDTH = 800
SVG_HEIGHT = 600
SVG_MARGIN = 70


def write_svg_plot(path, t, curves, x_label: str = "t", y_label: str = "q") -> None:
    """Minimal dependency-free line plot.

    ``curves`` is a list of (label, color, values) triples sharing the grid
    ``t``.  Output is deterministic (no timestamps or generator metadata).
    """
    t = np.asarray(t, dtype=float)
    y_all = np.concatenate([np.asarray(c[2], dtype=float) for c in curves])
    x_min, x_max = float(t[0]), float(t[-1])
    y_min, y_max = float(np.min(y_all)), float(np.max(y_all))
    if y_max == y_min:
        y_min -= 1.0
        y_max += 1.0
    pad = 0.05 * (y_max - y_min)
    y_min -= pad
    y_max += pad

    plot_w = SVG_WIDTH - 2 * SVG_MARGIN
    plot_h = SVG_HEIGHT - 2 * SVG_MARGIN

    def sx(x):
        return SVG_MARGIN + plot_w * (x - x_min) / (x_max - x_min)

    def sy(y):
        return SVG_HEIGHT - SVG_MARGIN - plot_h * (y - y_min) / (y_max - y_min)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" '
        f'height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        # axes
        f'<line x1="{SVG_MARGIN}" y1="{SVG_HEIGHT - SVG_MARGIN}" '
        f'x2="{SVG_WIDTH - SVG_MARGIN}" y2="{SVG_HEIGHT - SVG_MARGIN}" '
        f'stroke="black" stroke-width="1"/>',
        f'<line x1="{SVG_MARGIN}" y1="{SVG_MARGIN}" x2="{SVG_MARGIN}" '
        f'y2="{SVG_HEIGHT - SVG_MARGIN}" stroke="black" stroke-width="1"/>',
    ]
    for i in range(6):
        frac = i / 5.0
        x_val = x_min + frac * (x_max - x_min)
        y_val = y_min + frac * (y_max - y_min)
        px = sx(x_val)
        py = sy(y_val)
        parts.append(
            f'<line x1="{px:.2f}" y1="{SVG_HEIGHT - SVG_MARGIN}" x2="{px:.2f}" '
            f'y2="{SVG_HEIGHT - SVG_MARGIN + 6}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{SVG_HEIGHT - SVG_MARGIN + 22}" '
            f'font-size="12" text-anchor="middle">{x_val:.3g}</text>'
        )
        parts.append(
            f'<line x1="{SVG_MARGIN - 6}" y1="{py:.2f}" x2="{SVG_MARGIN}" '
            f'y2="{py:.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{SVG_MARGIN - 10}" y="{py + 4:.2f}" font-size="12" '
            f'text-anchor="end">{y_val:.3g}</text>'
        )
    parts.append(
        f'<text x="{SVG_WIDTH // 2}" y="{SVG_HEIGHT - 20}" font-size="14" '
        f'text-anchor="middle">{x_label}</text>'
    )
    parts.append(
        f'<text x="20" y="{SVG_HEIGHT // 2}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 20 {SVG_HEIGHT // 2})">{y_label}</text>'
    )
    for label, color, values in curves:
        values = np.asarray(values, dtype=float)
        points = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(t, values))
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{points}"/>'
        )
    for i, (label, color, _) in enumerate(curves):
        ly = SVG_MARGIN + 20 + 22 * i
        lx = SVG_WIDTH - SVG_MARGIN - 150
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 30}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{lx + 38}" y="{ly}" font-size="13">{label}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
