"""Trajectory integration and closed-form damped solutions.

Three numerical paths are provided:

* ``integrate_full_hamiltonian``: velocity-Verlet integration of the full
  (N+1)-body equations of motion, used as the energy-conserving oracle.
* ``integrate_gle``: the reduced equation with the memory convolution
  qddot + omega0^2 q + int_0^t T(t - s) qdot(s) ds = R(t), stepped with RK4
  over a trapezoidal history convolution.  For bilinear coupling this is
  exactly equivalent to the full dynamics when R is built from the same
  initial bath data.
* ``integrate_damped_oscillator``: RK4 for the local damped form
  qddot + 2 Omega lam qdot + Omega^2 q = 0 shared by the Markovian quantum
  equation (Omega = omega0, lam = lambda_q) and the averaged Bohmian one
  (Omega = xi, lam = lambda_b).

The analytic solutions q(t) = C exp(-Omega lam t) sin(sqrt(1 - lam^2) Omega t
+ phi) close the loop for underdamped parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bath import BathRealization, SystemParams, effective_frequency_squared
from .errors import OverdampedUnsupported, StepTooLarge
from .modes import GroundState, PhasePoint

LABEL_FULL = "full"
LABEL_GLE = "gle"
LABEL_MARKOV_QUANTUM = "markov_quantum"
LABEL_BOHMIAN = "bohmian"
LABEL_MERGED = "merged"


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled q(t) with matching velocities."""

    dt: float
    t0: float
    q: np.ndarray
    qdot: np.ndarray
    label: str

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        qdot = np.asarray(self.qdot, dtype=float)
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if q.shape != qdot.shape or q.size < 2:
            raise ValueError("q and qdot must be equal-length arrays of size >= 2")
        q.setflags(write=False)
        qdot.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "qdot", qdot)

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.q.size)


@dataclass(frozen=True)
class LangevinParams:
    """Parameters of one damped-sine solution."""

    omega: float
    lam: float
    amplitude: float
    phase: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not 0.0 < self.lam < 1.0:
            raise OverdampedUnsupported(
                f"friction coefficient must lie in (0, 1), got {self.lam}"
            )


def _check_step(dt: float, max_freq: float):
    if dt * max_freq > 0.1:
        raise StepTooLarge(
            f"dt * max frequency = {dt * max_freq:.4g} > 0.1; "
            f"reduce dt below {0.1 / max_freq:.4g}"
        )


def _n_steps(dt: float, t_end: float) -> int:
    if not dt > 0 or not t_end > 0:
        raise ValueError(f"dt and t_end must be positive, got dt={dt}, t_end={t_end}")
    return int(round(t_end / dt))


def integrate_full_hamiltonian(
    initial: PhasePoint,
    params: SystemParams,
    bath: BathRealization,
    dt: float,
    t_end: float,
    return_state: bool = False,
):
    """Velocity-Verlet integration of the coupled (N+1)-oscillator system.

    Returns the system Trajectory; with ``return_state`` also the final
    PhasePoint (needed e.g. for time-reversal checks).
    """
    omega_sq = effective_frequency_squared(params, bath)
    max_freq = max(math.sqrt(omega_sq), float(np.max(bath.omega, initial=0.0)))
    _check_step(dt, max_freq)
    n = _n_steps(dt, t_end)

    w2 = bath.omega**2
    c = bath.coupling
    q = initial.q
    v = initial.p
    x = initial.x.astype(float).copy()
    px = initial.p_bath.astype(float).copy()

    q_hist = np.empty(n + 1)
    v_hist = np.empty(n + 1)
    q_hist[0] = q
    v_hist[0] = v

    half = 0.5 * dt
    aq = -omega_sq * q + c @ x
    ax = -w2 * x + c * q
    for i in range(n):
        v += half * aq
        px += half * ax
        q += dt * v
        x += dt * px
        aq = -omega_sq * q + c @ x
        ax = -w2 * x + c * q
        v += half * aq
        px += half * ax
        q_hist[i + 1] = q
        v_hist[i + 1] = v

    traj = Trajectory(dt=dt, t0=0.0, q=q_hist, qdot=v_hist, label=LABEL_FULL)
    if return_state:
        return traj, PhasePoint(q=q, p=v, x=x, p_bath=px)
    return traj


def classical_noise(x0, p0, q0, bath: BathRealization, t):
    """Fluctuating bath force from explicit initial conditions.

    R(t) = sum_a gamma_a w_a^2 [ (x_a(0) - gamma_a q(0)) cos(w_a t)
                                 + (p_a(0) / w_a) sin(w_a t) ].
    Vanishes identically for the shifted-equilibrium start
    x_a(0) = gamma_a q(0), p_a(0) = 0, and has zero mean under ground-state
    sampling of the initial conditions.
    """
    x0 = np.asarray(x0, dtype=float)
    p0 = np.asarray(p0, dtype=float)
    t = np.asarray(t, dtype=float)
    c = bath.coupling
    cos_part = c * (x0 - bath.gamma * q0)
    sin_part = c * p0 / bath.omega
    phase = np.multiply.outer(t, bath.omega)
    out = np.cos(phase) @ cos_part + np.sin(phase) @ sin_part
    return float(out) if out.ndim == 0 else out


def integrate_gle(
    q0: float,
    qdot0: float,
    bath: BathRealization,
    params: SystemParams,
    dt: float,
    t_end: float,
    noise: tuple[np.ndarray, np.ndarray] | None = None,
    history_window: float | None = None,
) -> Trajectory:
    """Integrate the memory-kernel equation with the discrete bath kernel.

    ``noise`` supplies initial bath conditions (x0, p0) for the fluctuating
    force; without it R is identically zero (the averaged equation).  The
    memory convolution runs over the full stored history by trapezoidal
    quadrature inside an RK4 stepper; ``history_window`` optionally truncates
    the convolution to the most recent window (approximate, off by default).
    """
    omega_sq = effective_frequency_squared(params, bath)
    max_freq = max(math.sqrt(omega_sq), float(np.max(bath.omega, initial=0.0)))
    _check_step(dt, max_freq)
    n = _n_steps(dt, t_end)
    half = 0.5 * dt

    # Kernel and noise sampled once on the integer and mid-step grids; every
    # RK4 stage time falls on one of the two.
    t_int = dt * np.arange(n + 2)
    t_mid = t_int[: n + 1] + half
    w = bath.weights
    kernel_int = np.cos(np.multiply.outer(t_int, bath.omega)) @ w
    kernel_mid = np.cos(np.multiply.outer(t_mid, bath.omega)) @ w
    if noise is not None:
        x0, p0 = noise
        noise_int = classical_noise(x0, p0, q0, bath, t_int)
        noise_mid = classical_noise(x0, p0, q0, bath, t_mid)
    else:
        noise_int = np.zeros(n + 2)
        noise_mid = np.zeros(n + 1)

    omega0_sq = params.omega0**2
    kernel_zero = kernel_int[0]
    window_steps = None if history_window is None else max(int(round(history_window / dt)), 1)

    q_hist = np.empty(n + 1)
    v_hist = np.empty(n + 1)
    q_hist[0] = q0
    v_hist[0] = qdot0

    for i in range(n):
        j0 = 0 if window_steps is None else max(0, i - window_steps)
        v_rev = v_hist[i : j0 - 1 : -1] if j0 > 0 else v_hist[i::-1]
        m = v_rev.size  # points t_j0 .. t_i, newest first

        # Grid trapezoid of T(tau - s) qdot(s) over [t_j0, t_i] for the three
        # stage offsets tau - t_i in {0, dt/2, dt}.
        d0 = kernel_int[:m] @ v_rev
        d1 = kernel_mid[:m] @ v_rev
        d2 = kernel_int[1 : m + 1] @ v_rev
        g0 = dt * d0 - half * (kernel_int[m - 1] * v_rev[-1] + kernel_int[0] * v_hist[i])
        g1 = dt * d1 - half * (kernel_mid[m - 1] * v_rev[-1] + kernel_mid[0] * v_hist[i])
        g2 = dt * d2 - half * (kernel_int[m] * v_rev[-1] + kernel_int[1] * v_hist[i])

        q_i = q_hist[i]
        v_i = v_hist[i]

        k1q = v_i
        k1v = -omega0_sq * q_i - g0 + noise_int[i]

        qb = q_i + half * k1q
        vb = v_i + half * k1v
        mem = g1 + 0.25 * dt * (kernel_mid[0] * v_i + kernel_zero * vb)
        k2q = vb
        k2v = -omega0_sq * qb - mem + noise_mid[i]

        qc = q_i + half * k2q
        vc = v_i + half * k2v
        mem = g1 + 0.25 * dt * (kernel_mid[0] * v_i + kernel_zero * vc)
        k3q = vc
        k3v = -omega0_sq * qc - mem + noise_mid[i]

        qd = q_i + dt * k3q
        vd = v_i + dt * k3v
        mem = g2 + half * (kernel_int[1] * v_i + kernel_zero * vd)
        k4q = vd
        k4v = -omega0_sq * qd - mem + noise_int[i + 1]

        q_hist[i + 1] = q_i + (dt / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
        v_hist[i + 1] = v_i + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)

    return Trajectory(dt=dt, t0=0.0, q=q_hist, qdot=v_hist, label=LABEL_GLE)


def integrate_damped_oscillator(
    q0: float,
    qdot0: float,
    omega: float,
    lam: float,
    dt: float,
    t_end: float,
    label: str,
) -> Trajectory:
    """RK4 integration of qddot + 2 omega lam qdot + omega^2 q = 0."""
    n = _n_steps(dt, t_end)
    w2 = omega * omega
    two_gl = 2.0 * omega * lam
    q_hist = np.empty(n + 1)
    v_hist = np.empty(n + 1)
    q = q0
    v = qdot0
    q_hist[0] = q
    v_hist[0] = v
    half = 0.5 * dt
    for i in range(n):
        k1q = v
        k1v = -two_gl * v - w2 * q
        k2q = v + half * k1v
        k2v = -two_gl * k2q - w2 * (q + half * k1q)
        k3q = v + half * k2v
        k3v = -two_gl * k3q - w2 * (q + half * k2q)
        k4q = v + dt * k3v
        k4v = -two_gl * k4q - w2 * (q + dt * k3q)
        q += (dt / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
        v += (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        q_hist[i + 1] = q
        v_hist[i + 1] = v
    return Trajectory(dt=dt, t0=0.0, q=q_hist, qdot=v_hist, label=label)


def quantum_langevin_analytic(t, p: LangevinParams):
    """Underdamped solution C exp(-omega lam t) sin(sqrt(1-lam^2) omega t + phi)."""
    t = np.asarray(t, dtype=float)
    damped = math.sqrt(1.0 - p.lam**2) * p.omega
    out = p.amplitude * np.exp(-p.omega * p.lam * t) * np.sin(damped * t + p.phase)
    return float(out) if out.ndim == 0 else out


def bohmian_langevin_analytic(t, p: LangevinParams):
    """Same closed form evaluated with (xi, lambda_b, C', phi')."""
    return quantum_langevin_analytic(t, p)


def langevin_params_from_initial(
    omega: float, lam: float, q0: float, qdot0: float
) -> LangevinParams:
    """Amplitude and phase of the damped solution matching q(0), qdot(0)."""
    if not 0.0 < lam < 1.0:
        raise OverdampedUnsupported(
            f"friction coefficient must lie in (0, 1), got {lam}"
        )
    damped = math.sqrt(1.0 - lam**2) * omega
    s = q0
    c = (qdot0 + omega * lam * q0) / damped
    return LangevinParams(
        omega=omega,
        lam=lam,
        amplitude=math.hypot(s, c),
        phase=math.atan2(s, c),
    )


def merged_solution(t, omega0: float, lam: float, qdot0: float):
    """High-frequency merge of the two damped solutions, pinned to q(0) = 0.

    q(t) = exp(-omega0 lam t) sin(sqrt(1-lam^2) omega0 t)
           * qdot(0) / (sqrt(1-lam^2) omega0).
    """
    return quantum_langevin_analytic(
        t, langevin_params_from_initial(omega0, lam, 0.0, qdot0)
    )


def total_energy(point: PhasePoint, params: SystemParams, bath: BathRealization) -> float:
    """H = p^2/2 + (1/2) omega^2 q^2 + sum_a [p_a^2/2 + (1/2) w_a^2 x_a^2
    - gamma_a w_a^2 q x_a]."""
    omega_sq = effective_frequency_squared(params, bath)
    q = point.q
    x = point.x
    return float(
        0.5 * point.p**2
        + 0.5 * omega_sq * q * q
        + 0.5 * np.dot(point.p_bath, point.p_bath)
        + 0.5 * np.dot(bath.omega**2, x * x)
        - q * np.dot(bath.coupling, x)
    )


def mode_energies(point: PhasePoint, gs: GroundState):
    """Per-mode normal-form energies (H_plus, H_minus) in rotated coordinates.

    Uses the per-mode share convention q' = q/N, p' = p/N, so the arrays are
    diagnostics of the per-mode quadratic forms, not an additive split of the
    total energy.
    """
    n = gs.n_modes
    a = gs.sin_theta
    b = gs.cos_theta
    qp = point.q / n
    pp = point.p / n
    x_plus = b * qp + a * point.x
    x_minus = -a * qp + b * point.x
    p_plus = b * pp + a * point.p_bath
    p_minus = -a * pp + b * point.p_bath
    h_plus = 0.5 * p_plus**2 + 0.5 * gs.omega_plus**2 * x_plus**2
    h_minus = 0.5 * p_minus**2 + 0.5 * gs.omega_minus**2 * x_minus**2
    return h_plus, h_minus


def mode_energies_unrotated(point: PhasePoint, gs: GroundState, bath: BathRealization):
    """Per-mode energies in the original coordinates with q' = q/N, p' = p/N."""
    n = gs.n_modes
    qp = point.q / n
    pp = point.p / n
    return (
        0.5 * pp**2
        + 0.5 * gs.omega_sq * qp**2
        + 0.5 * point.p_bath**2
        + 0.5 * bath.omega**2 * point.x**2
        - bath.coupling * qp * point.x
    )
