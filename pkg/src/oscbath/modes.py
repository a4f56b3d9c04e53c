"""Per-mode rotation decoupling and the exact joint ground state.

Each bath mode couples to the central coordinate through a 2x2 quadratic form
in (q/N, x_a).  A rotation by the mixing angle theta_a removes the cross term
and yields normal-mode frequencies (w_plus, w_minus).  The joint ground-state
density is the Gaussian

    |psi0|^2  propto  exp(-(1/hbar) v^T M v),     v = (q, x_1 ... x_N),

whose precision core M has the arrowhead structure

    M[0, 0] = sum_a (b^2 w_plus + a^2 w_minus) / N^2      (the scalar A)
    M[0, a] = a b (w_plus - w_minus) / N
    M[a, a] = a^2 w_plus + b^2 w_minus

with a = sin(theta_a), b = cos(theta_a).  Position samples have covariance
(hbar/2) M^{-1}; momenta follow the matching Gaussian of the phase-space
distribution of the state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bath import BathRealization, SystemParams, effective_frequency_squared
from .errors import CholeskyFailure, NonPositiveMode


@dataclass(frozen=True)
class ModePair:
    """Rotation angle and normal-mode frequencies for one bath mode."""

    theta: float
    a: float  # sin(theta)
    b: float  # cos(theta)
    omega_plus: float
    omega_minus: float
    delta: float  # omega_plus - omega_minus


@dataclass(frozen=True)
class PhasePoint:
    """Instantaneous coordinates of the central system and the bath."""

    q: float
    p: float
    x: np.ndarray
    p_bath: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        p_bath = np.asarray(self.p_bath, dtype=float)
        if x.shape != p_bath.shape:
            raise ValueError("x and p_bath must have equal lengths")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p_bath", p_bath)

    @property
    def n_modes(self) -> int:
        return int(self.x.size)


@dataclass(frozen=True)
class PhasePointBatch:
    """Column-wise collection of phase points (vectorized sample storage)."""

    q: np.ndarray       # (count,)
    p: np.ndarray       # (count,)
    x: np.ndarray       # (count, N)
    p_bath: np.ndarray  # (count, N)

    def __len__(self) -> int:
        return int(self.q.size)

    def __getitem__(self, i: int) -> PhasePoint:
        return PhasePoint(
            q=float(self.q[i]),
            p=float(self.p[i]),
            x=self.x[i],
            p_bath=self.p_bath[i],
        )

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]


@dataclass(frozen=True)
class GroundState:
    """Precision-core representation of the exact joint ground state.

    ``modes`` holds the per-mode rotation data, ``precision_core`` the
    arrowhead matrix M described in the module docstring, ``A`` its (q, q)
    entry, and ``b_weights`` the per-mode coefficients 2 a b delta / N of the
    linear form B(x).  ``chol`` caches the lower Cholesky factor of M for
    sampling.  Instances are immutable and safe to share across threads.
    """

    modes: tuple[ModePair, ...]
    hbar: float
    omega_sq: float
    precision_core: np.ndarray
    A: float
    b_weights: np.ndarray
    chol: np.ndarray
    sin_theta: np.ndarray
    cos_theta: np.ndarray
    omega_plus: np.ndarray
    omega_minus: np.ndarray

    def __post_init__(self):
        for name in ("precision_core", "b_weights", "chol", "sin_theta",
                     "cos_theta", "omega_plus", "omega_minus"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def cross(self) -> np.ndarray:
        """Off-diagonal row M[0, 1:] = a b delta / N."""
        return self.precision_core[0, 1:]

    @property
    def diag_xx(self) -> np.ndarray:
        """Bath diagonal M[a, a] = a^2 w_plus + b^2 w_minus."""
        return np.diagonal(self.precision_core)[1:]


def rotation_angle(omega_sq, omega_alpha, gamma_alpha):
    """Mixing angle removing the (q/N, x_a) cross term.

    theta = 0.5 * atan2(-2 gamma w_a^2, omega^2 - w_a^2).  The two-argument
    arctangent keeps the angle continuous through omega^2 == w_a^2, where it
    equals -pi/4; for zero coupling it returns 0.
    """
    omega_alpha = np.asarray(omega_alpha, dtype=float)
    out = 0.5 * np.arctan2(
        -2.0 * gamma_alpha * omega_alpha**2, omega_sq - omega_alpha**2
    )
    return float(out) if out.ndim == 0 else out


def mode_frequency_squares(theta, omega_sq, omega_alpha, gamma_alpha):
    """Squared normal-mode frequencies (w_plus^2, w_minus^2) after rotation."""
    a = np.sin(theta)
    b = np.cos(theta)
    wa_sq = np.asarray(omega_alpha, dtype=float) ** 2
    wprime_sq = -2.0 * gamma_alpha * wa_sq
    wp_sq = omega_sq * b**2 + wa_sq * a**2 + wprime_sq * a * b
    wm_sq = omega_sq * a**2 + wa_sq * b**2 - wprime_sq * a * b
    return wp_sq, wm_sq


def mode_frequencies(theta, omega_sq, omega_alpha, gamma_alpha) -> ModePair:
    """Assemble the ModePair for one bath mode; both frequencies must be real."""
    wp_sq, wm_sq = mode_frequency_squares(theta, omega_sq, omega_alpha, gamma_alpha)
    if wm_sq <= 0.0 or wp_sq <= 0.0:
        raise NonPositiveMode(
            f"normal-mode frequency squared non-positive "
            f"(w_plus^2={wp_sq:.6g}, w_minus^2={wm_sq:.6g}) for "
            f"omega_sq={omega_sq:.6g}, omega_alpha={omega_alpha:.6g}, "
            f"gamma_alpha={gamma_alpha:.6g}"
        )
    wp = math.sqrt(wp_sq)
    wm = math.sqrt(wm_sq)
    return ModePair(
        theta=float(theta),
        a=float(np.sin(theta)),
        b=float(np.cos(theta)),
        omega_plus=wp,
        omega_minus=wm,
        delta=wp - wm,
    )


def to_normal_coords(q, x_alpha, theta, n_modes):
    """Rotate (q/N, x_a) into the decoupled pair (x_plus, x_minus)."""
    a = np.sin(theta)
    b = np.cos(theta)
    qp = q / n_modes
    return b * qp + a * x_alpha, -a * qp + b * x_alpha


def from_normal_coords(x_plus, x_minus, theta, n_modes):
    """Inverse of to_normal_coords; returns (q, x_a)."""
    a = np.sin(theta)
    b = np.cos(theta)
    return n_modes * (b * x_plus - a * x_minus), a * x_plus + b * x_minus


def build_ground_state(params: SystemParams, bath: BathRealization) -> GroundState:
    """Decouple every mode and assemble the joint ground state."""
    n = bath.n_modes
    omega_sq = effective_frequency_squared(params, bath)
    modes = tuple(
        mode_frequencies(
            rotation_angle(omega_sq, w, g), omega_sq, w, g
        )
        for w, g in zip(bath.omega, bath.gamma)
    )
    a = np.array([m.a for m in modes])
    b = np.array([m.b for m in modes])
    wp = np.array([m.omega_plus for m in modes])
    wm = np.array([m.omega_minus for m in modes])
    delta = wp - wm

    core = np.zeros((n + 1, n + 1))
    core[0, 0] = np.sum(b**2 * wp + a**2 * wm) / n**2
    cross = a * b * delta / n
    core[0, 1:] = cross
    core[1:, 0] = cross
    idx = np.arange(1, n + 1)
    core[idx, idx] = a**2 * wp + b**2 * wm

    try:
        chol = np.linalg.cholesky(core)
    except np.linalg.LinAlgError as exc:
        raise CholeskyFailure(
            f"ground-state precision core is not positive definite "
            f"(n_modes={n}, cond~{np.linalg.cond(core):.3e}): {exc}"
        ) from exc

    return GroundState(
        modes=modes,
        hbar=params.hbar,
        omega_sq=omega_sq,
        precision_core=core,
        A=float(core[0, 0]),
        b_weights=2.0 * cross,
        chol=chol,
        sin_theta=a,
        cos_theta=b,
        omega_plus=wp,
        omega_minus=wm,
    )


def sample_ground_state(gs: GroundState, rng: np.random.Generator, count: int) -> PhasePointBatch:
    """Draw phase points from the ground-state phase-space distribution.

    Positions follow the Gaussian with covariance (hbar/2) M^{-1}, generated
    by back-substitution through the cached Cholesky factor.  Momenta are
    drawn per normal mode with variance hbar * w_{+-} / 2 and rotated back;
    the system momentum collects the per-mode shares (1/N) sum_a
    (b p_plus - a p_minus), which reproduces the exact momentum covariance
    (hbar/2) M of the state.

    The stream of draws is fully determined by ``rng``; callers that shard
    work across threads must derive one independent child generator per chunk
    (for example via ``SeedSequence.spawn``) so results do not depend on
    scheduling.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    n = gs.n_modes
    scale = math.sqrt(gs.hbar / 2.0)

    u = rng.standard_normal((n + 1, count))
    pos = scale * np.linalg.solve(gs.chol.T, u)

    normal_draws = rng.standard_normal((2, n, count))
    p_plus = np.sqrt(gs.hbar * gs.omega_plus / 2.0)[:, None] * normal_draws[0]
    p_minus = np.sqrt(gs.hbar * gs.omega_minus / 2.0)[:, None] * normal_draws[1]
    a = gs.sin_theta[:, None]
    b = gs.cos_theta[:, None]
    p_bath = a * p_plus + b * p_minus
    p_sys = np.sum(b * p_plus - a * p_minus, axis=0) / n

    return PhasePointBatch(
        q=pos[0].copy(),
        p=p_sys,
        x=pos[1:].T.copy(),
        p_bath=p_bath.T.copy(),
    )
