"""Classical and quantum potentials and the linear Bohmian force algebra.

For the Gaussian ground state the quantum potential is quadratic in the
coordinates,

    Q = (hbar/4) * { [2A - (1/2 hbar) (4 A^2 q^2 + 4 A B q + B^2)]
        + sum_a [ 2 a^2 w_plus + 2 b^2 w_minus
                  - (1/2 hbar) (2 a b q delta / N
                                + 2 a^2 w_plus x_a + 2 b^2 w_minus x_a)^2 ] }

with A the (q, q) entry of the precision core and B(x) the linear form with
weights 2 a b delta / N.  Differentiating Q + V in q collapses to the exact
identity

    -d(Q + V)/dq = -xi^2 q + eta(x)

with xi^2 = omega^2 - A^2 - sum_a (a b delta / N)^2 and eta linear in the bath
coordinates; both sides are implemented independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bath import BathRealization
from .errors import NegativeXiSq
from .modes import GroundState, PhasePoint, sample_ground_state


@dataclass(frozen=True)
class BohmianCoefficients:
    """Effective frequency (squared) and per-mode noise weights.

    eta(x) = sum_a eta_weights[a] * x_a, with the A*B/2 contribution folded
    into the weights through the linearity of B.
    """

    xi_sq: float
    eta_weights: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.eta_weights, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "eta_weights", arr)

    @property
    def xi(self) -> float:
        return math.sqrt(self.xi_sq)


class EtaEstimate(NamedTuple):
    mean: float
    stderr: float


def classical_potential(point: PhasePoint, omega_sq: float, bath: BathRealization) -> float:
    """V = (1/2) omega^2 q^2 + sum_a [(1/2) w_a^2 x_a^2 - gamma_a w_a^2 q x_a]."""
    q = point.q
    x = point.x
    return float(
        0.5 * omega_sq * q * q
        + 0.5 * np.dot(bath.omega**2, x * x)
        - q * np.dot(bath.coupling, x)
    )


def quantum_potential(point: PhasePoint, gs: GroundState) -> float:
    """Quantum potential of the ground state at a phase point.

    Affine in hbar: the constant part scales with hbar while the quadratic
    part is hbar-free.
    """
    q = point.q
    x = point.x
    hb = gs.hbar
    a_coeff = gs.A
    b_val = float(np.dot(gs.b_weights, x))
    cross = gs.cross
    diag = gs.diag_xx
    s = 2.0 * cross * q + 2.0 * diag * x
    term_q = 2.0 * a_coeff - (
        4.0 * a_coeff**2 * q * q + 4.0 * a_coeff * b_val * q + b_val * b_val
    ) / (2.0 * hb)
    term_x = 2.0 * float(np.sum(diag)) - float(np.dot(s, s)) / (2.0 * hb)
    return float(0.25 * hb * (term_q + term_x))


def bohmian_force(point: PhasePoint, gs: GroundState, bath: BathRealization) -> float:
    """Analytic force -d(Q + V)/dq on the central coordinate."""
    q = point.q
    x = point.x
    a_coeff = gs.A
    b_val = float(np.dot(gs.b_weights, x))
    cross = gs.cross
    diag = gs.diag_xx
    s = 2.0 * cross * q + 2.0 * diag * x
    dq_quantum = -a_coeff**2 * q - 0.5 * a_coeff * b_val - 0.5 * float(np.dot(s, cross))
    dq_classical = gs.omega_sq * q - float(np.dot(bath.coupling, x))
    return float(-(dq_quantum + dq_classical))


def bohmian_coefficients(gs: GroundState, bath: BathRealization) -> BohmianCoefficients:
    """Extract xi^2 and the eta weights from the assembled ground state."""
    cross = gs.cross
    xi_sq = gs.omega_sq - gs.A**2 - float(np.dot(cross, cross))
    if xi_sq <= 0.0:
        raise NegativeXiSq(
            f"xi^2 = {xi_sq:.6g} <= 0; the bath lies outside the underdamped "
            f"oscillatory regime"
        )
    eta_weights = gs.A * cross + bath.coupling + cross * gs.diag_xx
    return BohmianCoefficients(xi_sq=xi_sq, eta_weights=eta_weights)


def eta(coeffs: BohmianCoefficients, x) -> float:
    """Linear bath force eta(x) = sum_a eta_weights[a] * x_a; eta(0) = 0."""
    return float(np.dot(coeffs.eta_weights, np.asarray(x, dtype=float)))


def mean_eta(
    gs: GroundState,
    bath: BathRealization,
    sample_count: int,
    rng: np.random.Generator,
) -> EtaEstimate:
    """Monte Carlo mean and standard error of eta over ground-state samples.

    The exact expectation is zero: eta is linear in the zero-mean bath
    coordinates.
    """
    if sample_count < 100:
        raise ValueError(f"sample_count must be >= 100, got {sample_count}")
    coeffs = bohmian_coefficients(gs, bath)
    batch = sample_ground_state(gs, rng, sample_count)
    values = batch.x @ coeffs.eta_weights
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(sample_count))
    return EtaEstimate(mean=mean, stderr=stderr)
