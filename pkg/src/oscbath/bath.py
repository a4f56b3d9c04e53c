"""Ohmic bath construction and memory-kernel evaluation.

The environment is a set of N harmonic modes on the midpoint frequency grid
w_a = (a - 1/2) * omega_c / N with bilinear couplings gamma_a.  All dynamical
quantities depend on the modes only through the weights w_a = gamma_a^2 w_a^2,
which also give the discrete memory kernel

    T(t) = sum_a gamma_a^2 w_a^2 cos(w_a t).

Two weight assignments are provided:

* ``kernel_matched``: w_a = (2 * lambda_q_prime / pi) * (omega_c / N), the
  Riemann-sum weights of the continuum kernel of the Ohmic density
  J(w) = lambda_q_prime * w, so the discrete kernel converges to
  (2 * lambda_q_prime / pi) * sin(omega_c t) / t as N grows.
* ``paper_eq44``: w_a proportional to w_a^3 and normalized so that
  sum_a w_a = lambda_q_prime * omega_c**4.  This is the convention assumed by
  the figure-reproduction workflow (it makes xi ~ 2.25 for omega_c = 1.5 and
  lambda_q_prime = 1); note it is not consistent with the continuum kernel
  normalization above, which gives 2 * lambda_q_prime * omega_c / pi instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec, OverCoupling

KERNEL_MATCHED = "kernel_matched"
PAPER_EQ44 = "paper_eq44"
DISCRETIZATIONS = (KERNEL_MATCHED, PAPER_EQ44)


@dataclass(frozen=True)
class SystemParams:
    """Central-oscillator parameters, dimensionless units.

    omega0    vibrational frequency of the central oscillator
    hbar      dimensionless quantum scale (small values = quasi-classical)
    lambda_q  friction coefficient of the quantum damped solution, in (0, 1)
    lambda_b  friction coefficient of the Bohmian damped solution, in (0, 1)
    """

    omega0: float
    hbar: float
    lambda_q: float
    lambda_b: float

    def __post_init__(self):
        if not self.omega0 > 0:
            raise InvalidSpec(f"omega0 must be positive, got {self.omega0}")
        if not self.hbar > 0:
            raise InvalidSpec(f"hbar must be positive, got {self.hbar}")
        for name in ("lambda_q", "lambda_b"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise InvalidSpec(f"{name} must lie in (0, 1), got {value}")

    @property
    def lambda_q_prime(self) -> float:
        """Ohmic interaction strength implied by the friction coefficient."""
        return 2.0 * self.omega0 * self.lambda_q


@dataclass(frozen=True)
class BathSpec:
    """Parameters of a discretized Ohmic bath."""

    n_modes: int
    omega_c: float
    lambda_q_prime: float
    discretization: str = PAPER_EQ44
    seed: int = 0

    def __post_init__(self):
        if self.n_modes < 1:
            raise InvalidSpec(f"n_modes must be >= 1, got {self.n_modes}")
        if not self.omega_c > 0:
            raise InvalidSpec(f"omega_c must be positive, got {self.omega_c}")
        if not self.lambda_q_prime > 0:
            raise InvalidSpec(
                f"lambda_q_prime must be positive, got {self.lambda_q_prime}"
            )
        if self.discretization not in DISCRETIZATIONS:
            raise InvalidSpec(
                f"unknown discretization {self.discretization!r}; "
                f"expected one of {DISCRETIZATIONS}"
            )
        if not 0 <= self.seed < 2**64:
            raise InvalidSpec(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass(frozen=True)
class BathRealization:
    """Concrete mode frequencies and couplings of a discretized bath.

    ``gamma_bar`` is the rescaled coupling gamma_a * w_a^(3/2); the identity
    gamma_bar^2 / w_a = gamma_a^2 * w_a^2 holds algebraically.
    """

    omega: np.ndarray
    gamma: np.ndarray
    gamma_bar: np.ndarray

    def __post_init__(self):
        for name in ("omega", "gamma", "gamma_bar"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.omega.shape == self.gamma.shape == self.gamma_bar.shape):
            raise InvalidSpec("omega, gamma and gamma_bar must have equal shapes")

    @property
    def n_modes(self) -> int:
        return int(self.omega.size)

    @property
    def weights(self) -> np.ndarray:
        """Per-mode kernel weights gamma_a^2 * w_a^2."""
        return self.gamma**2 * self.omega**2

    @property
    def coupling(self) -> np.ndarray:
        """Per-mode force coefficients gamma_a * w_a^2 coupling q to x_a."""
        return self.gamma * self.omega**2


def discretize_ohmic(spec: BathSpec) -> BathRealization:
    """Build the mode arrays for a bath specification.

    Deterministic for a fixed spec.  Raises OverCoupling when the implied
    coupling strength at the cutoff-adjacent mode reaches 1, which signals too
    few modes (or too strong an interaction) for a physical realization; add
    modes or reduce lambda_q_prime to fix it.
    """
    n = spec.n_modes
    alpha = np.arange(1, n + 1, dtype=float)
    omega = (alpha - 0.5) * (spec.omega_c / n)
    if spec.discretization == KERNEL_MATCHED:
        weights = np.full(n, (2.0 * spec.lambda_q_prime / np.pi) * (spec.omega_c / n))
    else:
        cubed = omega**3
        weights = (spec.lambda_q_prime * spec.omega_c**4) * (cubed / cubed.sum())
    gamma = np.sqrt(weights) / omega
    # The Ohmic density peaks at the cutoff, so the top mode is where the
    # coupling-strength constraint binds.  kernel_matched baths additionally
    # have gamma ~ 1/omega at the bottom of the grid; those modes carry a
    # uniformly small weight and are not treated as over-coupled.
    if gamma[-1] >= 1.0:
        raise OverCoupling(
            f"implied coupling gamma = {gamma[-1]:.6g} >= 1 at the cutoff mode "
            f"(n_modes={n}, omega_c={spec.omega_c}, "
            f"lambda_q_prime={spec.lambda_q_prime})"
        )
    gamma_bar = gamma * omega**1.5
    return BathRealization(omega=omega, gamma=gamma, gamma_bar=gamma_bar)


def spectral_density(omega_e, lambda_q_prime, omega_c=None):
    """Ohmic density J(w) = lambda_q_prime * w on [0, omega_c].

    When ``omega_c`` is given, frequencies outside [0, omega_c] raise
    InvalidSpec.
    """
    w = np.asarray(omega_e, dtype=float)
    if np.any(w < 0) or (omega_c is not None and np.any(w > omega_c)):
        raise InvalidSpec(
            f"spectral density evaluated outside [0, {omega_c}]: {omega_e}"
        )
    out = lambda_q_prime * w
    return float(out) if out.ndim == 0 else out


def memory_kernel_discrete(bath: BathRealization, t):
    """Discrete retarded resistance T(t) = sum_a gamma_a^2 w_a^2 cos(w_a t)."""
    t = np.asarray(t, dtype=float)
    out = np.cos(np.multiply.outer(t, bath.omega)) @ bath.weights
    return float(out) if out.ndim == 0 else out


def memory_kernel_continuum(lambda_q_prime, omega_c, t):
    """Continuum kernel (2 lambda_q_prime / pi) * sin(omega_c t) / t.

    Continuous at t = 0, where the value is 2 * lambda_q_prime * omega_c / pi.
    """
    t = np.asarray(t, dtype=float)
    out = (2.0 * lambda_q_prime * omega_c / np.pi) * np.sinc(omega_c * t / np.pi)
    return float(out) if out.ndim == 0 else out


def effective_frequency_squared(params: SystemParams, bath: BathRealization) -> float:
    """Shifted squared frequency omega^2 = omega0^2 + sum_a gamma_a^2 w_a^2."""
    return params.omega0**2 + float(np.sum(bath.weights))
