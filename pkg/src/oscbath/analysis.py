"""Damping-parameter extraction and trajectory comparison.

The fit model is A * exp(-gamma t) * sin(Omega t + phi).  Seeds come from the
zero-crossing spacing (frequency) and a log-decrement line through the
extrema (decay); Gauss-Newton refinement with step halving polishes all four
parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dynamics import Trajectory
from .errors import DegenerateSignal, GridMismatch, NoConvergence

REGIME_LOW_THRESHOLD = 0.1  # below: the merge regime (regime2)
REGIME_HIGH_THRESHOLD = 1.0  # above: the common macroscopic case (regime1)

GN_MAX_ITERATIONS = 100
GN_RELATIVE_TOLERANCE = 1e-10


@dataclass(frozen=True)
class DampedSineFit:
    """Fitted parameters of a damped sinusoid."""

    amplitude: float
    decay_rate: float
    frequency: float
    phase: float
    residual_rms: float


class TrajectoryComparison(NamedTuple):
    relative_l2: float
    max_abs_diff: float
    frequency_ratio: float
    decay_ratio: float


class RegimeClassification(NamedTuple):
    label: str
    ratio: float


def _zero_crossing_times(t, y):
    s = np.sign(y)
    nonzero = s != 0
    idx = np.where(nonzero[:-1] & nonzero[1:] & (s[:-1] != s[1:]))[0]
    if idx.size == 0:
        return np.empty(0)
    frac = y[idx] / (y[idx] - y[idx + 1])
    return t[idx] + frac * (t[idx + 1] - t[idx])


def _half_period_estimate(crossings):
    """Mean spacing of the genuine crossings.

    Noise produces clusters of sign flips around each true crossing; the
    cluster-internal gaps are tiny compared with the half period, so spacings
    far below the largest one are discarded.
    """
    spacings = np.diff(crossings)
    keep = spacings > 0.25 * np.max(spacings)
    return float(np.mean(spacings[keep]))


def _extrema(t, y):
    mag = np.abs(y)
    floor = np.max(mag) * 1e-12
    idx = list(
        np.where((mag[1:-1] >= mag[:-2]) & (mag[1:-1] > mag[2:]) & (mag[1:-1] > floor))[0] + 1
    )
    # Boundary points count when the signal enters/leaves mid-swing high;
    # short records may hold only one or two interior extrema.
    if mag[0] > mag[1] and mag[0] > floor:
        idx.insert(0, 0)
    if mag[-1] > mag[-2] and mag[-1] > floor:
        idx.append(mag.size - 1)
    idx = np.asarray(idx, dtype=int)
    return t[idx], mag[idx]


def _model(beta, t):
    amp, gamma, freq, phase = beta
    return amp * np.exp(-gamma * t) * np.sin(freq * t + phase)


def _jacobian(beta, t):
    amp, gamma, freq, phase = beta
    envelope = np.exp(-gamma * t)
    arg = freq * t + phase
    s = np.sin(arg)
    c = np.cos(arg)
    return np.column_stack(
        (envelope * s, -t * amp * envelope * s, t * amp * envelope * c, amp * envelope * c)
    )


def _normalize(beta):
    amp, gamma, freq, phase = beta
    if amp < 0:
        amp = -amp
        phase += math.pi
    if freq < 0:
        freq = -freq
        phase = math.pi - phase
    phase = math.remainder(phase, 2.0 * math.pi)
    return np.array([amp, gamma, freq, phase])


def fit_damped_sine(traj: Trajectory) -> DampedSineFit:
    """Fit A exp(-gamma t) sin(Omega t + phi) to a trajectory.

    Needs at least three extrema above the numerical floor.  Raises
    DegenerateSignal for constant or non-oscillating input and NoConvergence
    (carrying the best iterate) when refinement stalls.
    """
    t = traj.t
    y = traj.q
    if np.all(y == y[0]):
        raise DegenerateSignal("trajectory is constant")

    crossings = _zero_crossing_times(t, y)
    ext_t, ext_mag = _extrema(t, y)
    if crossings.size < 2 or ext_t.size < 3:
        raise DegenerateSignal(
            f"need at least 2 zero crossings and 3 extrema to seed the fit, "
            f"found {crossings.size} and {ext_t.size}"
        )

    freq0 = math.pi / _half_period_estimate(crossings)
    slope, _ = np.polyfit(ext_t, np.log(ext_mag), 1)
    gamma0 = -slope

    # Linear least squares for the in-phase/quadrature amplitudes at the seed
    # (gamma, Omega) gives the amplitude and phase seeds.
    envelope = np.exp(-gamma0 * t)
    basis = np.column_stack((envelope * np.sin(freq0 * t), envelope * np.cos(freq0 * t)))
    coeff, *_ = np.linalg.lstsq(basis, y, rcond=None)
    beta = np.array([math.hypot(*coeff), gamma0, freq0, math.atan2(coeff[1], coeff[0])])

    def ssr_of(b):
        with np.errstate(over="ignore", invalid="ignore"):
            return float(np.sum((_model(b, t) - y) ** 2))

    best_beta = beta
    best_ssr = ssr_of(beta)
    converged = False
    for _ in range(GN_MAX_ITERATIONS):
        with np.errstate(over="ignore", invalid="ignore"):
            residual = _model(beta, t) - y
            jac = _jacobian(beta, t)
        jtj = jac.T @ jac
        jtr = jac.T @ residual
        try:
            step = np.linalg.solve(jtj, -jtr)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(jac, -residual, rcond=None)[0]
        ssr_old = float(np.sum(residual**2))
        # Plain Gauss-Newton overshoots on rough seeds; halve the step until
        # the residual does not grow, and stall out if it never improves.
        accepted = None
        scale = 1.0
        for _ in range(15):
            candidate = beta + scale * step
            ssr_new = ssr_of(candidate)
            if math.isfinite(ssr_new) and ssr_new <= ssr_old:
                accepted = (candidate, ssr_new, scale)
                break
            scale *= 0.5
        if accepted is None:
            break
        beta, ssr_new, scale = accepted
        if ssr_new < best_ssr:
            best_ssr = ssr_new
            best_beta = beta
        update = np.linalg.norm(scale * step) / max(np.linalg.norm(beta), 1e-300)
        if update < GN_RELATIVE_TOLERANCE:
            converged = True
            break

    amp, gamma, freq, phase = _normalize(best_beta)
    rms = math.sqrt(best_ssr / y.size)
    fit = DampedSineFit(
        amplitude=float(amp),
        decay_rate=float(gamma),
        frequency=float(freq),
        phase=float(phase),
        residual_rms=rms,
    )
    if not converged:
        raise NoConvergence(
            f"Gauss-Newton did not converge within {GN_MAX_ITERATIONS} iterations "
            f"(residual rms {rms:.3e})",
            best=fit,
        )
    return fit


def compare_trajectories(a: Trajectory, b: Trajectory) -> TrajectoryComparison:
    """Pointwise and fitted-parameter comparison of two same-grid trajectories.

    Ratios are reported as b over a.
    """
    if a.q.size != b.q.size or a.dt != b.dt or a.t0 != b.t0:
        raise GridMismatch(
            f"trajectories do not share a grid: "
            f"(n={a.q.size}, dt={a.dt}, t0={a.t0}) vs "
            f"(n={b.q.size}, dt={b.dt}, t0={b.t0})"
        )
    diff = a.q - b.q
    norm_a = float(np.linalg.norm(a.q))
    norm_diff = float(np.linalg.norm(diff))
    relative_l2 = 0.0 if norm_diff == 0.0 else norm_diff / norm_a
    fit_a = fit_damped_sine(a)
    fit_b = fit_damped_sine(b)
    return TrajectoryComparison(
        relative_l2=relative_l2,
        max_abs_diff=float(np.max(np.abs(diff))),
        frequency_ratio=fit_b.frequency / fit_a.frequency,
        decay_ratio=fit_b.decay_rate / fit_a.decay_rate,
    )


def classify_regime(omega0: float, omega_c: float) -> RegimeClassification:
    """Classify by the ratio r = omega_c^2 / omega0 (dimensionless units).

    r > 1: the common macroscopic case where the two damped solutions differ
    visibly (regime1).  r <= 0.1: the central frequency dominates and the two
    solutions merge (regime2).  Anything between is reported as intermediate.
    """
    if not omega0 > 0 or not omega_c > 0:
        raise ValueError("omega0 and omega_c must be positive")
    ratio = omega_c**2 / omega0
    if ratio > REGIME_HIGH_THRESHOLD:
        label = "regime1"
    elif ratio <= REGIME_LOW_THRESHOLD:
        label = "regime2"
    else:
        label = "intermediate"
    return RegimeClassification(label=label, ratio=ratio)
