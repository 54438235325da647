"""Amplitude-damping channel of the resonant damped Jaynes-Cummings model.

Internally time is the dimensionless ``tau = Gamma * t``; the survival
probability depends only on ``(tau, alpha)``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .qubit import TOL, DensityMatrix

log = logging.getLogger(__name__)

# |alpha - 1| at or below this uses the critical-damping limit
CRITICAL_BAND = 1e-9
_CLAMP_SILENT = 1e-15
_CLAMP_MAX = 1e-12


class ChannelError(ValueError):
    pass


@dataclass(frozen=True)
class ChannelParams:
    """Channel knobs: ``alpha = 2*coupling/gamma_rate`` and the decay rate Gamma."""

    alpha: float
    gamma_rate: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.alpha) or self.alpha < 0:
            raise ChannelError(f"alpha must be finite and >= 0, got {self.alpha!r}")
        if not math.isfinite(self.gamma_rate) or self.gamma_rate <= 0:
            raise ChannelError(f"gamma_rate must be finite and > 0, got {self.gamma_rate!r}")

    @property
    def coupling(self) -> float:
        """System-reservoir coupling constant (alpha * Gamma / 2)."""
        return self.alpha * self.gamma_rate / 2

    @property
    def non_markovian(self) -> bool:
        return self.alpha > 1

    def gamma_t(self, tau):
        """Convert Gamma*t to the coupling-time axis gamma*t = (alpha/2) * Gamma*t."""
        return 0.5 * self.alpha * tau

    def tau_from_gamma_t(self, gamma_t):
        if self.alpha == 0:
            raise ChannelError("gamma*t axis is degenerate for alpha = 0")
        return 2.0 * gamma_t / self.alpha


def _clamp(p: np.ndarray) -> np.ndarray:
    lo = p.min(initial=0.0)
    hi = p.max(initial=1.0)
    if lo < -_CLAMP_MAX or hi > 1 + _CLAMP_MAX:
        raise RuntimeError(f"survival probability left [0, 1] beyond round-off: [{lo}, {hi}]")
    if lo < -_CLAMP_SILENT or hi > 1 + _CLAMP_SILENT:
        log.warning("clamping survival probability round-off: min %.3g, max %.3g", lo, hi)
    elif lo < 0 or hi > 1:
        log.debug("clamping survival probability round-off: min %.3g, max %.3g", lo, hi)
    return np.clip(p, 0.0, 1.0)


def survival_p_tau(alpha: float, tau):
    """Survival probability p as a function of tau = Gamma*t (scalar or array).

    Three closed forms: trigonometric for alpha > 1, hyperbolic for
    alpha < 1 and the critical limit exp(-tau) (1 + tau/2)^2 near alpha = 1.
    """
    if alpha < 0:
        raise ChannelError(f"alpha must be >= 0, got {alpha!r}")
    scalar = np.ndim(tau) == 0
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0) or not np.all(np.isfinite(tau)):
        raise ChannelError("time must be finite and >= 0")

    d = alpha - 1.0
    if abs(d) <= CRITICAL_BAND:
        p = np.exp(-tau) * (1 + tau / 2) ** 2
    elif d > 0:
        s = math.sqrt(d)
        w = 0.5 * s * tau
        p = np.exp(-tau) * (np.cos(w) + np.sin(w) / s) ** 2
    else:
        s = math.sqrt(-d)
        w = 0.5 * s * tau
        # exp(-tau) [cosh w + sinh w / s]^2 with exp(-tau/2) folded into the
        # exponentials so cosh/sinh cannot overflow at large tau
        e1 = np.exp(-tau / 2 + w)
        e2 = np.exp(-tau / 2 - w)
        p = (0.5 * (e1 + e2) + 0.5 * (e1 - e2) / s) ** 2
    p = _clamp(np.atleast_1d(p))
    return float(p[0]) if scalar else p


def survival_p(params: ChannelParams, t):
    """Survival probability p(t) for physical time ``t`` (units of 1/gamma_rate)."""
    if np.ndim(t) == 0:
        return survival_p_tau(params.alpha, params.gamma_rate * float(t))
    return survival_p_tau(params.alpha, params.gamma_rate * np.asarray(t, dtype=float))


def check_p(p: float) -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise ChannelError(f"survival probability must lie in [0, 1], got {p!r}")
    return p


def kraus_operators(p: float) -> tuple[np.ndarray, np.ndarray]:
    """Incoherent Kraus pair K0 = |0><0| + sqrt(p)|1><1|, K1 = sqrt(1-p)|0><1|."""
    p = check_p(p)
    k0 = np.array([[1, 0], [0, math.sqrt(p)]], dtype=complex)
    k1 = np.array([[0, math.sqrt(1 - p)], [0, 0]], dtype=complex)
    return k0, k1


def apply_channel(rho: DensityMatrix, p: float) -> DensityMatrix:
    p = check_p(p)
    return DensityMatrix(
        rho.r11 + (1 - p) * rho.r22,
        p * rho.r22,
        math.sqrt(p) * rho.r12,
    )


def apply_kraus(rho: DensityMatrix, p: float) -> DensityMatrix:
    """Same map as :func:`apply_channel`, evaluated as sum_n K_n rho K_n^dagger."""
    m = rho.matrix
    out = sum(k @ m @ k.conj().T for k in kraus_operators(p))
    return DensityMatrix.from_matrix(out)


@dataclass(frozen=True)
class JointState:
    """Pure system-reservoir state.

    Amplitude order: |0>_S|0>_R, |1>_S|0>_R, |0>_S|1>_R, |1>_S|1>_R.
    """

    amplitudes: tuple[complex, complex, complex, complex]

    def __post_init__(self):
        amps = tuple(complex(a) for a in self.amplitudes)
        if len(amps) != 4:
            raise ValueError("a joint state has exactly four amplitudes")
        object.__setattr__(self, "amplitudes", amps)
        if abs(self.norm - 1) > TOL:
            raise ValueError(f"joint state must be normalized, norm = {self.norm!r}")

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes))

    def system_branch(self, reservoir: int) -> np.ndarray:
        """Unnormalized system amplitudes conditioned on reservoir level 0 or 1."""
        v = self.vector
        return v[2 * reservoir: 2 * reservoir + 2]

    def reduced(self) -> DensityMatrix:
        """Partial trace over the reservoir."""
        m = sum(np.outer(b, b.conj()) for b in (self.system_branch(0), self.system_branch(1)))
        return DensityMatrix.from_matrix(m)


def joint_map(p: float) -> JointState:
    """Image of |psi+>_S |0>_R under the dilated damping map."""
    p = check_p(p)
    r = 1 / math.sqrt(2)
    return JointState((r, r * math.sqrt(p), r * math.sqrt(1 - p), 0.0))

